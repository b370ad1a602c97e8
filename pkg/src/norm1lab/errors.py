class Norm1Error(Exception):
    pass


class NotASubgroup(Norm1Error):
    pass


class NotSubgroup(Norm1Error):
    pass


class NotNormal(Norm1Error):
    pass


class NotCyclic(Norm1Error):
    pass


class NotInSpan(Norm1Error):
    pass


class NonPrimeModulus(Norm1Error):
    pass


class NotACocycle(Norm1Error):
    pass


class LiftInconsistent(Norm1Error):
    pass


class BudgetExceeded(Norm1Error):
    def __init__(self, what: str, dimension: int, cap: int):
        super().__init__(f"{what}: dimension {dimension} exceeds budget {cap} (set NORM1_BUDGET to raise it)")
        self.dimension = dimension
        self.cap = cap


class EngineMismatch(Norm1Error):
    pass


class UnknownLabel(Norm1Error):
    pass
