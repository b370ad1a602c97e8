"""Sha, weak approximation defect and Tamagawa number of norm one tori.

A scenario lists the decomposition groups of the ramified places (as
conjugacy classes of subgroups of ``G = E_p(p^3)``); unramified places
contribute every cyclic subgroup.  Sha^2 of the character lattice is the
intersection of the restriction kernels over all these subgroups, and the
rest follows from the exact sequence

    0 -> A(T)^ -> Sha^2_omega -> Sha^2 -> 0

together with Ono's formula ``tau = |H^1(G, J)| / |Sha|``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import UnknownLabel
from .group import HeisenbergGroup, class_labels, normalize_label, parse_element
from .linalg import AbGroup
from .pipeline import Kernel, KernelTable, cyclic_labels, qz_kernel_table, lattice_kernel_table, workspace

CASES = ("1-I", "1-II", "1-III", "2-I", "2-II")


def _stab(stabilizer: str) -> str:
    s = stabilizer.strip()
    if s in ("1", "Triv", "{1}", "triv"):
        return "1"
    if s in ("a", "<a>", "⟨a⟩", "H0"):
        return "a"
    raise UnknownLabel(f"unknown stabilizer {stabilizer!r}; use '1' or 'a'")


def resolve_place(text: str, p: int, heis: HeisenbergGroup | None = None) -> str:
    """Class label of a decomposition group.

    Accepts a class label (``K0``, ``H_2``, ``Full``...) or a generator list
    ``gens:s,t,u/s,t,u`` which is reduced to its conjugacy class.
    """
    text = text.strip()
    if not text.startswith("gens:"):
        return normalize_label(text, p)
    heis = heis or workspace(p).heis
    body = text[len("gens:"):].strip()
    gens = [parse_element(g, p) for g in body.split("/") if g.strip()]
    S = heis.subgroup(gens)
    cls, _ = heis.conjugacy_reduce(S)
    return cls.label


@dataclass
class PlaceScenario:
    p: int
    stabilizer: str = "1"
    ramified: list = field(default_factory=list)
    include_all_cyclic: bool = True

    def __post_init__(self):
        self.stabilizer = _stab(self.stabilizer)
        self.ramified = [resolve_place(r, self.p) for r in self.ramified]

    @classmethod
    def parse(cls, p: int, stabilizer: str, places: str, include_all_cyclic: bool = True) -> "PlaceScenario":
        items = [x for x in places.split(";") if x.strip()]
        return cls(p, stabilizer, items, include_all_cyclic)

    def subgroups(self) -> list[str]:
        """Distinct labels whose restriction kernels are intersected, in class order."""
        used = set(self.ramified)
        if self.include_all_cyclic:
            used |= set(cyclic_labels(self.p))
        return [x for x in class_labels(self.p) if x in used]


@dataclass
class ShaReport:
    p: int
    stabilizer: str
    ramified: list
    sha: AbGroup
    A: AbGroup
    tamagawa: int
    case: str
    sha2_omega: AbGroup
    certificates: list
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "H": self.stabilizer,
            "ramified": list(self.ramified),
            "sha": {"factors": list(self.sha.factors)},
            "A": {"factors": list(self.A.factors)},
            "tamagawa": self.tamagawa,
            "case": self.case,
            "sha2_omega": {"factors": list(self.sha2_omega.factors)},
            "certificates": self.certificates,
            "notes": self.notes,
        }

    def to_markdown(self) -> str:
        H = "{1}" if self.stabilizer == "1" else "<a>"
        places = ", ".join(self.ramified) if self.ramified else "none"
        lines = [
            f"# Norm one torus, p={self.p}, H={H}",
            "",
            f"- ramified decomposition groups: {places}",
            f"- case: {self.case}",
            f"- Sha(T) = {self.sha}",
            f"- A(T) = {self.A}",
            f"- tau(T) = {self.tamagawa}",
            f"- Sha^2_omega = {self.sha2_omega}",
            "",
            "| subgroup | kernel | cuts Sha^2_omega |",
            "|---|---|---|",
        ]
        for c in self.certificates:
            lines.append(f"| {c['label']} | {c['kernel']} | {'yes' if c['cuts'] else 'no'} |")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def qz_table(p: int) -> KernelTable:
    return qz_kernel_table(p)


@lru_cache(maxsize=None)
def lattice_table(p: int, stabilizer: str, engine: str = "reduction") -> KernelTable:
    return lattice_kernel_table(p, _stab(stabilizer), engine)


def h1_order(p: int, stabilizer: str) -> int:
    # H^1(G, J_{G/H}) is dual to G^ab for H = 1 and to H for H = <a>
    return p * p if _stab(stabilizer) == "1" else p


def case_from_subgroups(p: int, stabilizer: str, ramified) -> str:
    """Case label read off from the subgroup conditions alone."""
    labels = set(ramified)
    rank2 = {x for x in labels if x.startswith("K")}
    if _stab(stabilizer) == "1":
        if "G" in labels or len(rank2) >= 2:
            return "1-I"
        if rank2:
            return "1-II"
        return "1-III"
    return "2-I" if ("G" in labels or rank2) else "2-II"


def expected_sha_order(p: int, case: str) -> int:
    return {"1-I": 1, "1-II": p, "1-III": p * p, "2-I": 1, "2-II": p}[case]


class Adjudicator:
    """Bitmask intersections over one kernel table."""

    def __init__(self, p: int, stabilizer: str, table: KernelTable | None = None):
        self.p = p
        self.stabilizer = _stab(stabilizer)
        self.table = table or lattice_table(p, self.stabilizer)
        self.masks = {k: v.mask() for k, v in self.table.rows.items()}
        self.omega_mask = self._intersect(cyclic_labels(p))

    def _intersect(self, labels) -> int:
        m = Kernel(self.p, "full").mask()
        for x in labels:
            m &= self.masks[x]
        return m

    def _kernel(self, mask: int) -> Kernel:
        p = self.p
        return Kernel.from_elements(p, [(k // p, k % p) for k in range(p * p) if mask >> k & 1])

    def __call__(self, s: PlaceScenario) -> ShaReport:
        if s.p != self.p or s.stabilizer != self.stabilizer:
            raise ValueError("scenario does not match this adjudicator")
        p = self.p
        sha2_mask = self._intersect(s.subgroups())
        sha2 = self._kernel(sha2_mask)
        base_mask = self.omega_mask if s.include_all_cyclic else Kernel(p, "full").mask()
        base = self._kernel(base_mask)
        a_order = base.order // sha2.order
        sha = sha2.structure()
        A = AbGroup((p,) * {1: 0, p: 1, p * p: 2}[a_order])
        tau = h1_order(p, self.stabilizer) // sha.order
        certificates = []
        for label in dict.fromkeys(s.ramified):
            row = self.table.rows[label]
            certificates.append({
                "label": label,
                "multiplicity": s.ramified.count(label),
                "kernel": row.render(),
                "line": row.to_json(),
                "cuts": (base_mask & self.masks[label]) != base_mask,
            })
        case = case_from_subgroups(p, self.stabilizer, s.ramified)
        if s.include_all_cyclic and expected_sha_order(p, case) != sha.order:
            raise AssertionError(f"case {case} predicts |Sha| = {expected_sha_order(p, case)}, got {sha.order}")
        notes = {
            "sha_structure_from": "Sha^2 (dual, elementary abelian)",
            "table_engine": self.table.engine,
        }
        return ShaReport(p, self.stabilizer, list(s.ramified), sha, A, tau, case, base.structure(), certificates, notes)


@lru_cache(maxsize=None)
def adjudicator(p: int, stabilizer: str) -> Adjudicator:
    return Adjudicator(p, _stab(stabilizer))


def adjudicate(s: PlaceScenario) -> ShaReport:
    return adjudicator(s.p, s.stabilizer)(s)


@dataclass
class TateCheck:
    holds: bool
    kernel: Kernel
    subgroups: list

    def to_json(self) -> dict:
        return {"holds": self.holds, "kernel": self.kernel.to_json(), "subgroups": self.subgroups}

    def __bool__(self) -> bool:
        return self.holds


def tate_galois_check(s: PlaceScenario) -> TateCheck:
    """Injectivity of H^3(G,Z) -> prod H^3(G_v,Z), via the Q/Z restriction kernels."""
    if s.stabilizer != "1":
        raise ValueError("the Tate criterion applies to Galois extensions (H = 1)")
    table = qz_table(s.p)
    ker = Kernel(s.p, "full")
    for x in s.subgroups():
        ker = ker & table.rows[x]
    return TateCheck(ker.kind == "zero", ker, s.subgroups())


@dataclass
class SweepResult:
    p: int
    stabilizer: str
    rows: list  # (ramified labels, |Sha|, |A|, tau, case)
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self) -> dict:
        out: dict = {}
        for _, _, _, _, case in self.rows:
            out[case] = out.get(case, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "H": self.stabilizer,
            "scenarios": len(self.rows),
            "cases": self.counts(),
            "failures": self.failures,
        }

    def to_markdown(self) -> str:
        H = "{1}" if self.stabilizer == "1" else "<a>"
        lines = [f"# Scenario sweep, p={self.p}, H={H}", "", f"{len(self.rows)} scenarios, {len(self.failures)} failures", ""]
        lines += ["| case | scenarios |", "|---|---|"]
        lines += [f"| {k} | {v} |" for k, v in self.counts().items()]
        return "\n".join(lines) + "\n"


def scenario_sweep(p: int, stabilizer: str) -> SweepResult:
    """Adjudicate every subset of subgroup classes as the ramified set."""
    stab = _stab(stabilizer)
    adj = adjudicator(p, stab)
    labels = class_labels(p)
    omega_order = adj._kernel(adj.omega_mask).order
    h1 = h1_order(p, stab)
    rows, failures = [], []
    prev_sha: dict[int, int] = {}
    for bits in range(1 << len(labels)):
        ram = [labels[i] for i in range(len(labels)) if bits >> i & 1]
        rep = adj(PlaceScenario(p, stab, ram))
        o = rep.sha.order
        rows.append((tuple(ram), o, rep.A.order, rep.tamagawa, rep.case))
        prev_sha[bits] = o

        def fail(msg):
            failures.append({"ramified": ram, "problem": msg})

        if o * rep.A.order != omega_order:
            fail("|Sha| |A| != |Sha^2_omega|")
        if rep.tamagawa not in (p * p, p, 1) or rep.tamagawa * o != h1:
            fail("Tamagawa number out of range")
        if rep.tamagawa == p * p and not (stab == "1" and o == 1):
            fail("tau = p^2 outside H = 1, Sha = 0")
        if expected_sha_order(p, rep.case) != o:
            fail(f"case {rep.case} does not match |Sha| = {o}")
        if stab == "1" and bool(tate_galois_check(PlaceScenario(p, stab, ram))) != (o == 1):
            fail("Tate criterion disagrees with Sha")
        # monotonicity: dropping a label never shrinks Sha
        for i in range(len(labels)):
            if bits >> i & 1 and prev_sha[bits ^ (1 << i)] < o:
                fail(f"adding {labels[i]} enlarged Sha")
    return SweepResult(p, stab, rows, failures)


def report_json(rep: ShaReport) -> str:
    return json.dumps(rep.to_json(), indent=2, sort_keys=True)
