"""Kernel tables for restriction maps on H^2 and the structural checks behind them.

Kernels live in H^2(G, Q/Z) ~ (Z/p)^2 with basis (f1, f2); a class
``f1^l f2^m`` has coordinates ``(l, m)``.  Lattice-coefficient classes are
moved into these coordinates through the connecting isomorphism onto
H^3(G, Z).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cochains import (
    CohomGroup,
    cohomology,
    connecting_lattice,
    coboundary_test_qz,
    h3_labeler,
    heisenberg,
    inflation,
    make_f1_f2,
    normalize_line,
    push_coefficients,
    restriction,
    tate_h0_cyclic,
)
from .errors import EngineMismatch
from .group import FiniteGroup, HeisenbergGroup, Subgroup, class_labels
from .lattice import GLattice, chevalley_dual, fixed_sublattice, perm_lattice, restrict
from .linalg import AbGroup

STABILIZERS = ("1", "a")


# ---------------------------------------------------------------------------
# (Z/p)^2 subgroups


@dataclass(frozen=True)
class Kernel:
    """A subgroup of (Z/p)^2: everything, a line through ``(l, m)``, or zero."""

    p: int
    kind: str  # "full", "line" or "zero"
    gen: tuple | None = None

    @classmethod
    def from_elements(cls, p: int, elems) -> "Kernel":
        elems = {(l % p, m % p) for l, m in elems}
        if len(elems) == p * p:
            return cls(p, "full")
        if len(elems) == 1:
            return cls(p, "zero")
        if len(elems) != p:
            raise ValueError(f"{len(elems)} elements do not form a subgroup of (Z/{p})^2")
        v = next(x for x in sorted(elems) if x != (0, 0))
        line = {((k * v[0]) % p, (k * v[1]) % p) for k in range(p)}
        if line != elems:
            raise ValueError("kernel is not a subgroup")
        return cls(p, "line", normalize_line(v, p))

    @classmethod
    def line(cls, p: int, l: int, m: int) -> "Kernel":
        return cls(p, "line", normalize_line((l, m), p))

    def elements(self) -> frozenset:
        p = self.p
        if self.kind == "full":
            return frozenset(itertools.product(range(p), repeat=2))
        if self.kind == "zero":
            return frozenset({(0, 0)})
        l, m = self.gen
        return frozenset(((k * l) % p, (k * m) % p) for k in range(p))

    def mask(self) -> int:
        out = 0
        for l, m in self.elements():
            out |= 1 << (l * self.p + m)
        return out

    @property
    def order(self) -> int:
        return {"full": self.p**2, "line": self.p, "zero": 1}[self.kind]

    def structure(self) -> AbGroup:
        return AbGroup((self.p,) * {"full": 2, "line": 1, "zero": 0}[self.kind])

    def __and__(self, other: "Kernel") -> "Kernel":
        return Kernel.from_elements(self.p, self.elements() & other.elements())

    def to_json(self) -> dict:
        l, m = self.gen if self.gen else (None, None)
        return {"kind": self.kind, "l": l, "m": m}

    def render(self) -> str:
        p = self.p
        if self.kind == "zero":
            return "0"
        if self.kind == "full":
            return f"(Z/{p}Z)^2"
        return f"⟨{monomial(*self.gen)}⟩ ≅ Z/{p}Z"


def monomial(l: int, m: int) -> str:
    parts = []
    for name, e in (("f1", l), ("f2", m)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "".join(parts) or "1"


def kernel_from_generators(labels: np.ndarray, images: np.ndarray, orders, p: int) -> Kernel:
    """Kernel of ``c -> sum c_i images[i]`` pushed into ``(l, m)`` coordinates.

    ``labels[i]`` are the ``(l, m)`` labels of two generators of an
    elementary abelian group of rank 2; ``images[i]`` their coordinates in
    the target.
    """
    orders = np.asarray(orders, dtype=np.int64)
    elems = []
    for c in itertools.product(range(p), repeat=len(labels)):
        img = sum(ci * images[i] for i, ci in enumerate(c)) if len(orders) else np.zeros(0, dtype=np.int64)
        if len(orders) == 0 or not (np.asarray(img) % orders).any():
            lm = sum(ci * labels[i] for i, ci in enumerate(c)) % p
            elems.append((int(lm[0]), int(lm[1])))
    return Kernel.from_elements(p, elems)


# ---------------------------------------------------------------------------
# small linear algebra over F_p


def nullspace_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of ``{x : x A = 0 mod p}``."""
    A = np.asarray(A, dtype=np.int64) % p
    n = A.shape[0]
    M = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    r = 0
    k = A.shape[1]
    for c in range(k):
        nz = [i for i in range(r, n) if M[i, c]]
        if not nz:
            continue
        i = nz[0]
        M[[r, i]] = M[[i, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        for j in range(n):
            if j != r and M[j, c]:
                M[j] = (M[j] - M[j, c] * M[r]) % p
        r += 1
    return M[r:, k:]


def rank_mod(A: np.ndarray, p: int) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    return A.shape[0] - len(nullspace_mod(A, p))


def row_space(A: np.ndarray, p: int) -> frozenset:
    """All vectors of the row space of ``A`` over F_p (small cases only)."""
    A = np.asarray(A, dtype=np.int64) % p
    out = set()
    for c in itertools.product(range(p), repeat=A.shape[0]):
        v = (np.asarray(c, dtype=np.int64) @ A) % p if A.shape[0] else np.zeros(A.shape[1], dtype=np.int64)
        out.add(tuple(int(x) for x in v))
    return frozenset(out)


# ---------------------------------------------------------------------------
# workspace: per-p caches of groups, lattices and cohomology


class Workspace:
    """Lazily computed objects for one prime; everything is deterministic."""

    def __init__(self, p: int):
        self.p = p
        self.heis: HeisenbergGroup = heisenberg(p)
        self.G: FiniteGroup = self.heis.group
        self._sub: dict = {}
        self._lat: dict = {}
        self._coh: dict = {}
        self._f = None

    @property
    def f1f2(self):
        if self._f is None:
            self._f = make_f1_f2(self.p)
        return self._f

    def subgroup(self, label: str) -> Subgroup:
        return self.heis.by_label(label)

    def group_of(self, label: str) -> FiniteGroup:
        if label not in self._sub:
            S = self.subgroup(label)
            self._sub[label] = self.G if label == "G" else self.heis.subgroup_group(S)
        return self._sub[label]

    def lattices(self, stab: str) -> tuple[GLattice, GLattice]:
        """``(Z[G/H], J_{G/H})`` for ``H`` trivial (``"1"``) or ``<a>`` (``"a"``)."""
        if stab not in self._lat:
            H = self.subgroup("1" if stab == "1" else "H0")
            P, _ = perm_lattice(self.heis, H)
            J, _ = chevalley_dual(P)
            self._lat[stab] = (P, J)
        return self._lat[stab]

    def lattice(self, coeff: str, stab: str) -> GLattice | None:
        if coeff == "Z":
            return None
        P, J = self.lattices(stab)
        return P if coeff == "ZGH" else J

    def cohomology(self, label: str, coeff: str, n: int, stab: str = "a") -> CohomGroup:
        key = (label, coeff, n, stab if coeff != "Z" else "")
        if key not in self._coh:
            S = self.group_of(label)
            M = self.lattice(coeff, stab)
            if M is not None and S is not self.G:
                M = restrict(M, S)
            self._coh[key] = cohomology(S, M, n)
        return self._coh[key]

    def restrict_class(self, label_from: str, label_to: str, z, n: int, rank: int):
        return restriction(z, self.group_of(label_from), self.group_of(label_to), n, rank)


@lru_cache(maxsize=None)
def workspace(p: int) -> Workspace:
    return Workspace(p)


# ---------------------------------------------------------------------------
# kernel tables


@dataclass
class KernelTable:
    p: int
    coeff: str  # "QZ", "J_G" or "J_{G/<a>}"
    rows: dict  # label -> Kernel
    engine: str = ""
    audit: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"p": self.p, "coeff": self.coeff, "rows": {k: v.to_json() for k, v in self.rows.items()}}

    def to_markdown(self) -> str:
        return render_table(self)


def qz_closed_form(p: int) -> dict:
    rows = {}
    for label in class_labels(p):
        if label in ("1", "Z") or label.startswith("H"):
            rows[label] = Kernel(p, "full")
        elif label == "G":
            rows[label] = Kernel(p, "zero")
        else:
            i = int(label[1:])
            if i == 0:
                rows[label] = Kernel.line(p, 0, 1)
            elif i == p:
                rows[label] = Kernel.line(p, 1, 0)
            else:
                rows[label] = Kernel.line(p, 1, (-pow(i, -1, p)) % p)
    return rows


def qz_kernel_table(p: int, N: int = 2) -> KernelTable:
    """Restriction kernels on H^2(G, Q/Z) by testing every ``f1^l f2^m`` for a potential."""
    ws = workspace(p)
    f1, f2 = ws.f1f2
    rows, audit = {}, []
    for label in class_labels(p):
        S = ws.group_of(label)
        elems = []
        for l, m in itertools.product(range(p), repeat=2):
            phi = coboundary_test_qz(S, l * f1 + m * f2, N=N, p=p)
            if phi is not None:
                elems.append((l, m))
                audit.append({"label": label, "l": l, "m": m, "potential": phi.flat().tolist()})
        rows[label] = Kernel.from_elements(p, elems)
    return KernelTable(p, "QZ", rows, "coboundary", audit)


def coeff_name(stab: str) -> str:
    return "J_G" if stab == "1" else "J_{G/<a>}"


class DirectEngine:
    """Restriction kernels computed from H^2(G, J) itself."""

    def __init__(self, p: int, stab: str):
        self.p = p
        self.stab = stab
        self.ws = workspace(p)
        P, J = self.ws.lattices(stab)
        self.P, self.J = P, J
        self.h2 = self.ws.cohomology("G", "J", 2, stab)
        if self.h2.orders != [p, p]:
            raise AssertionError(f"H^2(G,J) has orders {self.h2.orders}")
        lab = h3_labeler(p)
        self.labels = []
        for y in self.h2.representatives:
            c = connecting_lattice(self.ws.G, y, P, J)
            self.labels.append(tuple(lab.label(c)))
        self.labels = np.array(self.labels, dtype=np.int64)
        if rank_mod(self.labels, p) != 2:
            raise AssertionError("connecting map is not injective on H^2(G,J)")

    def kernel(self, label: str) -> Kernel:
        ws = self.ws
        r = self.J.rank
        if label == "G":
            images = np.array([self.h2.coordinates(y) for y in self.h2.representatives])
            return kernel_from_generators(self.labels, images, self.h2.orders, self.p)
        target = ws.cohomology(label, "J", 2, self.stab)
        images = [target.coordinates(ws.restrict_class("G", label, y, 2, r)) for y in self.h2.representatives]
        return kernel_from_generators(self.labels, np.array(images), target.orders, self.p)

    def table(self) -> KernelTable:
        rows = {label: self.kernel(label) for label in class_labels(self.p)}
        audit = [{"generator": i, "label": list(map(int, lm))} for i, lm in enumerate(self.labels)]
        return KernelTable(self.p, coeff_name(self.stab), rows, "direct", audit)


class ReductionEngine:
    """Restriction kernels from the Q/Z table plus subgroup-level computations.

    Rows where the stabilizer meets every conjugate of the subgroup
    trivially are copied from the Q/Z table once H^2(H', Z[G/H]) is seen to
    vanish.  With ``H = <a>`` the rows ``<a,c>`` and ``<a>`` come from the
    inflation argument and from comparing the connecting map with
    restriction on ``<a,c>``.
    """

    def __init__(self, p: int, stab: str, qz: KernelTable | None = None):
        self.p = p
        self.stab = stab
        self.ws = workspace(p)
        self.qz = qz or qz_kernel_table(p)
        self.audit: list = []

    def _vanishing_h2_perm(self, label: str) -> bool:
        ws = self.ws
        if label == "1":
            return True
        P, _ = ws.lattices(self.stab)
        S = ws.group_of(label)
        PS = restrict(P, S)
        if len(S) == self.p:
            return tate_h0_cyclic(S, PS).is_trivial
        # free action on the basis makes Z[G/H] induced from the trivial group
        return all(len(orbit) == len(S) for orbit in permutation_orbits(PS))

    def kernel(self, label: str) -> Kernel:
        p = self.p
        ws = self.ws
        if label == "G":
            self.audit.append({"label": label, "route": "identity"})
            return Kernel(p, "zero")
        H = ws.subgroup("1" if self.stab == "1" else "H0")
        S = ws.subgroup(label)
        if ws.heis.intersects_conjugates_trivially(H, S):
            if not self._vanishing_h2_perm(label):
                raise EngineMismatch(f"H^2({label}, Z[G/H]) does not vanish")
            self.audit.append({"label": label, "route": "injective connecting map"})
            return self.qz.rows[label]
        if self.stab == "a" and label == "K0":
            inf = inflation_route_k0(p)
            self.audit.append({"label": label, "route": "inflation", **inf})
            if not inf["h1_vanishes"]:
                raise EngineMismatch("H^1(<a,c>, J) does not vanish")
            return Kernel(p, "zero") if inf["tate_h0"] == "0" else Kernel(p, "full")
        if self.stab == "a" and label == "H0":
            chk = connecting_vs_restriction_k0(p)
            self.audit.append({"label": label, "route": "connecting map on <a,c>", **chk})
            if not chk["kernels_equal"]:
                raise EngineMismatch("kernel of delta' differs from kernel of res'")
            return self.qz.rows["K0"]
        raise EngineMismatch(f"no reduction available for {label}")

    def table(self) -> KernelTable:
        rows = {label: self.kernel(label) for label in class_labels(self.p)}
        return KernelTable(self.p, coeff_name(self.stab), rows, "reduction", self.audit)


def permutation_orbits(M: GLattice) -> list[list[int]]:
    """Orbits of a permutation lattice on its basis."""
    seen, orbits = set(), []
    gens = [M.action(g) for g in M.group.generators]
    for k in range(M.rank):
        if k in seen:
            continue
        orbit, frontier = {k}, [k]
        while frontier:
            nxt = []
            for i in frontier:
                for A in gens:
                    j = int(np.flatnonzero(A[:, i])[0])
                    if j not in orbit:
                        orbit.add(j)
                        nxt.append(j)
            frontier = nxt
        seen |= orbit
        orbits.append(sorted(orbit))
    return orbits


def inflation_route_k0(p: int) -> dict:
    """Kernel of res: H^2(G,J) -> H^2(<a,c>,J) via inflation from G/<a,c> ~ C_p."""
    ws = workspace(p)
    _, J = ws.lattices("a")
    h1 = ws.cohomology("K0", "J", 1, "a")
    fx = fixed_sublattice(J, ws.subgroup("K0").elements)
    tate = tate_h0_cyclic(fx.quotient, fx.lattice)
    return {"h1_vanishes": h1.structure.is_trivial, "fixed_rank": fx.lattice.rank, "tate_h0": str(tate)}


def connecting_vs_restriction_k0(p: int) -> dict:
    """Compare ``Ker(delta')`` and ``Ker(res')`` on H^2(<a,c>, J_{G/<a>})."""
    ws = workspace(p)
    P, J = ws.lattices("a")
    K0 = ws.group_of("K0")
    h2 = ws.cohomology("K0", "J", 2, "a")
    h3 = ws.cohomology("K0", "Z", 3)
    h2H = ws.cohomology("H0", "J", 2, "a")
    PK, JK = restrict(P, K0), restrict(J, K0)
    r = J.rank
    delta_img = np.array([h3.coordinates(connecting_lattice(K0, y, PK, JK)) for y in h2.representatives])
    res_img = np.array([h2H.coordinates(ws.restrict_class("K0", "H0", y, 2, r)) for y in h2.representatives])
    ker_delta = row_space(nullspace_mod(delta_img, p), p)
    ker_res = row_space(nullspace_mod(res_img, p), p)
    return {
        "ker_delta_order": len(ker_delta),
        "ker_res_order": len(ker_res),
        "contained": ker_delta <= ker_res,
        "kernels_equal": ker_delta == ker_res,
    }


def lattice_kernel_table(p: int, stab: str, engine: str = "both") -> KernelTable:
    if stab not in STABILIZERS:
        raise ValueError("stabilizer must be '1' or 'a'")
    if engine not in ("direct", "reduction", "both"):
        raise ValueError("engine must be direct, reduction or both")
    red = ReductionEngine(p, stab).table() if engine in ("reduction", "both") else None
    direct = DirectEngine(p, stab).table() if engine in ("direct", "both") else None
    if red is not None and direct is not None:
        bad = [k for k in red.rows if red.rows[k] != direct.rows[k]]
        if bad:
            raise EngineMismatch(f"engines disagree on rows {bad}")
        return KernelTable(p, coeff_name(stab), direct.rows, "both", red.audit + direct.audit)
    return red if red is not None else direct


def cyclic_labels(p: int) -> list[str]:
    return ["1", "Z"] + [f"H{i}" for i in range(p + 1)]


def sha_omega(table: KernelTable) -> Kernel:
    out = Kernel(table.p, "full")
    for label in cyclic_labels(table.p):
        out = out & table.rows[label]
    return out


# ---------------------------------------------------------------------------
# rendering


def subgroup_display(label: str, p: int) -> str:
    if label == "1":
        return "{1}"
    if label == "G":
        return "G=⟨a,b,c⟩"
    if label == "Z":
        return "Z(G)=⟨c⟩"
    i = int(label[1:])
    gen = "b" if i == p else ("a" if i == 0 else ("ab" if i == 1 else f"ab^{i}"))
    if label[0] == "H":
        return f"H_{i}=⟨{gen}⟩"
    return f"H_{i}'=⟨{gen},c⟩"


def render_table(t: KernelTable) -> str:
    p = t.p
    coeff = {"QZ": "Q/Z", "J_G": "J_G", "J_{G/<a>}": "J_{G/H}"}[t.coeff]
    head = f"Ker{{H^2(G,{coeff}) -> H^2(H',{coeff})}}"
    lines = [f"# Restriction kernels, p={p}, coefficients {coeff}", ""]
    groups = [
        ("H' trivial or G", ["1", "G"]),
        ("H' ≅ C_p", ["Z"] + [f"H{i}" for i in range(p + 1)]),
        ("H' ≅ (C_p)^2", [f"K{i}" for i in range(p + 1)]),
    ]
    for title, labels in groups:
        lines.append("| " + " | ".join([title] + [subgroup_display(x, p) for x in labels]) + " |")
        lines.append("|" + "---|" * (len(labels) + 1))
        lines.append("| " + " | ".join([head] + [t.rows[x].render() for x in labels]) + " |")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# structural suite


@dataclass
class Assertion:
    name: str
    claim: str
    computed: str
    expected: str

    @property
    def passed(self) -> bool:
        return self.computed == self.expected

    def to_json(self) -> dict:
        return {"name": self.name, "claim": self.claim, "computed": self.computed, "expected": self.expected, "passed": self.passed}


@dataclass
class StructuralReport:
    p: int
    assertions: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def add(self, name: str, claim: str, computed, expected) -> None:
        self.assertions.append(Assertion(name, claim, str(computed), str(expected)))

    def to_json(self) -> dict:
        return {"p": self.p, "passed": self.passed, "assertions": [a.to_json() for a in self.assertions]}

    def to_markdown(self) -> str:
        lines = [f"# Structural checks, p={self.p}", "", "| check | claim | computed | expected | result |", "|---|---|---|---|---|"]
        for a in self.assertions:
            lines.append(f"| {a.name} | {a.claim} | {a.computed} | {a.expected} | {'pass' if a.passed else 'FAIL'} |")
        return "\n".join(lines) + "\n"


def _elem(p: int, k: int) -> AbGroup:
    return AbGroup((p,) * k)


def structural_suite(p: int = 3, include_full_group: bool = True) -> StructuralReport:
    """Direct computations of the cohomology groups and maps around ``<a> < <a,c> < G``."""
    ws = workspace(p)
    rep = StructuralReport(p)

    def safe(name, claim, fn, expected):
        try:
            rep.add(name, claim, fn(), expected)
        except Exception as exc:  # recorded, suite continues
            rep.add(name, claim, f"error: {exc}", expected)

    coh = ws.cohomology
    safe("h1-H-J", "H^1(<a>, J_{G/H}) = 0", lambda: coh("H0", "J", 1).structure, _elem(p, 0))
    safe("h1-K0-J", "H^1(<a,c>, J_{G/H}) = 0", lambda: coh("K0", "J", 1).structure, _elem(p, 0))
    safe("h1-G-ZGH", "H^1(G, Z[G/H]) = 0", lambda: coh("G", "ZGH", 1).structure, _elem(p, 0))
    safe("h1-G-J", "H^1(G, J_{G/H}) = Z/p", lambda: coh("G", "J", 1).structure, _elem(p, 1))
    safe("h2-K0-Z", "H^2(<a,c>, Z) = (Z/p)^2", lambda: coh("K0", "Z", 2).structure, _elem(p, 2))
    safe("h2-H-Z", "H^2(<a>, Z) = Z/p", lambda: coh("H0", "Z", 2).structure, _elem(p, 1))
    safe("h3-K0-Z", "H^3(<a,c>, Z) = Z/p", lambda: coh("K0", "Z", 3).structure, _elem(p, 1))
    safe("h3-H-Z", "H^3(<a>, Z) = 0", lambda: coh("H0", "Z", 3).structure, _elem(p, 0))
    safe("h2-K0-ZGH", "H^2(<a,c>, Z[G/H]) = (Z/p)^p", lambda: coh("K0", "ZGH", 2).structure, _elem(p, p))
    safe("h2-H-ZGH", "H^2(<a>, Z[G/H]) = (Z/p)^p", lambda: coh("H0", "ZGH", 2).structure, _elem(p, p))
    safe("h3-K0-ZGH", "H^3(<a,c>, Z[G/H]) = 0", lambda: coh("K0", "ZGH", 3).structure, _elem(p, 0))
    safe("h3-H-ZGH", "H^3(<a>, Z[G/H]) = 0", lambda: coh("H0", "ZGH", 3).structure, _elem(p, 0))
    safe("h2-K0-J", "H^2(<a,c>, J_{G/H}) = (Z/p)^(p-1)", lambda: coh("K0", "J", 2).structure, _elem(p, p - 1))
    safe("h2-H-J", "H^2(<a>, J_{G/H}) = (Z/p)^(p-1)", lambda: coh("H0", "J", 2).structure, _elem(p, p - 1))

    maps = _diagram_maps(p)
    safe("res1-surjective", "res: H^2(<a,c>,Z) -> H^2(<a>,Z) is onto", lambda: maps["res1_rank"], 1)
    safe("phi-injective", "H^2(<a>,Z) -> H^2(<a>,Z[G/H]) is injective", lambda: maps["phi_rank"], 1)
    safe("res2-kernel", "Ker res on H^2(-,Z[G/H]) is the sum of the non-base orbit summands",
         lambda: maps["res2_kernel_is_orbits"], True)
    safe("res2-kernel-order", "|Ker res on H^2(-,Z[G/H])| = p^(p-1)", lambda: maps["res2_kernel_order"], p ** (p - 1))
    safe("base-orbit-injective", "the base orbit summand restricts injectively", lambda: maps["base_injective"], True)
    safe("images-equal", "Im(phi'') = Im(res'_2)", lambda: maps["images_equal"], True)
    chk = connecting_vs_restriction_k0(p)
    safe("ker-delta-in-ker-res", "Ker(delta') is contained in Ker(res'_3)", lambda: chk["contained"], True)
    safe("ker-res3-order", "|Ker res: H^2(<a,c>,J) -> H^2(<a>,J)| = p^(p-2)", lambda: chk["ker_res_order"], p ** (p - 2))
    inf2 = inflation_route_k0_to_h(p)
    safe("ker-res3-inflation", "Tate H^0(<a,c>/<a>, J^<a>) = (Z/p)^(p-2)", lambda: inf2["tate_h0"], str(_elem(p, p - 2)))
    safe("inflation-lands-in-kernel", "inflated classes restrict to zero on <a>", lambda: inf2["lands_in_kernel"], True)
    safe("inflation-onto-kernel", "inflated classes span Ker res'_3", lambda: inf2["spans_kernel"], True)
    inf = inflation_route_k0(p)
    safe("fixed-rank", "rank of J^{<a,c>} = p-1", lambda: inf["fixed_rank"], p - 1)
    safe("ker-res-K0-inflation", "Tate H^0(G/<a,c>, J^{<a,c>}) = 0", lambda: inf["tate_h0"], "0")
    if include_full_group:
        direct = DirectEngine(p, "a")
        safe("ker-res-K0-direct", "Ker res: H^2(G,J) -> H^2(<a,c>,J) = 0", lambda: direct.kernel("K0").render(), "0")
        safe("ker-res-H-direct", "Ker res: H^2(G,J) -> H^2(<a>,J) = <f2>", lambda: direct.kernel("H0").render(),
             Kernel.line(p, 0, 1).render())
        safe("h2-G-Z", "H^2(G, Z) = (Z/p)^2", lambda: coh("G", "Z", 2).structure, _elem(p, 2))
        safe("h2-G-ZGH", "H^2(G, Z[G/H]) = Z/p", lambda: coh("G", "ZGH", 2).structure, _elem(p, 1))
        safe("h2-G-J", "H^2(G, J_{G/H}) = (Z/p)^2", lambda: direct.h2.structure, _elem(p, 2))
        safe("h3-G-Z", "H^3(G, Z) = (Z/p)^2", lambda: h3_labeler(p).h3.structure, _elem(p, 2))
    return rep


def _diagram_maps(p: int) -> dict:
    ws = workspace(p)
    P, J = ws.lattices("a")
    K0, Hg = ws.group_of("K0"), ws.group_of("H0")
    n = P.rank
    h2K_Z, h2H_Z = ws.cohomology("K0", "Z", 2), ws.cohomology("H0", "Z", 2)
    h2K_P, h2H_P = ws.cohomology("K0", "ZGH", 2), ws.cohomology("H0", "ZGH", 2)
    out = {}
    res1 = np.array([h2H_Z.coordinates(restriction(y, K0, Hg, 2, 1)) for y in h2K_Z.representatives])
    out["res1_rank"] = rank_mod(res1, p)
    ones = np.ones((n, 1), dtype=np.int64)
    phi = np.array([h2H_P.coordinates(push_coefficients(y, ones, 1)) for y in h2H_Z.representatives])
    out["phi_rank"] = rank_mod(phi, p)
    res2 = np.array([h2H_P.coordinates(restriction(y, K0, Hg, 2, n)) for y in h2K_P.representatives])
    ker2 = row_space(nullspace_mod(res2, p), p)
    out["res2_kernel_order"] = len(ker2)
    # orbit summands of Z[G/H] under <a,c>
    PK = restrict(P, K0)
    orbits = permutation_orbits(PK)
    base = next(o for o in orbits if n - 1 in o)
    summand_classes, base_classes = [], []
    for orbit in orbits:
        sub = _sub_permutation(PK, orbit)
        h = cohomology(K0, sub, 2)
        emb = np.zeros((n, len(orbit)), dtype=np.int64)
        for j, k in enumerate(orbit):
            emb[k, j] = 1
        for y in h.representatives:
            coords = h2K_P.coordinates(push_coefficients(y, emb, len(orbit)))
            (base_classes if orbit is base else summand_classes).append(coords)
    span = row_space(np.array(summand_classes), p) if summand_classes else frozenset()
    out["res2_kernel_is_orbits"] = span == ker2
    if base_classes:
        bimg = np.array([h2H_P.coordinates(restriction(_coords_to_cocycle(h2K_P, c), K0, Hg, 2, n)) for c in base_classes])
        out["base_injective"] = rank_mod(bimg, p) == len(base_classes)
    else:
        out["base_injective"] = False
    out["images_equal"] = row_space(phi, p) == row_space(res2, p)
    return out


def _coords_to_cocycle(h: CohomGroup, coords) -> np.ndarray:
    return sum(int(c) * y for c, y in zip(coords, h.representatives))


def _sub_permutation(M: GLattice, orbit: list) -> GLattice:
    mats = {g: M.action(g)[np.ix_(orbit, orbit)] for g in M.group.generators}
    return GLattice(M.group, mats, [M.labels[k] for k in orbit], name="orbit")


def inflation_route_k0_to_h(p: int) -> dict:
    """Inflation from ``<a,c>/<a>`` with coefficients ``J^<a>`` into H^2(<a,c>, J)."""
    ws = workspace(p)
    _, J = ws.lattices("a")
    K0 = ws.group_of("K0")
    JK = restrict(J, K0)
    H = ws.subgroup("H0")
    fx = fixed_sublattice(JK, H.elements)
    tate = tate_h0_cyclic(fx.quotient, fx.lattice)
    hq = cohomology(fx.quotient, fx.lattice, 2)
    h2 = ws.cohomology("K0", "J", 2, "a")
    h2H = ws.cohomology("H0", "J", 2, "a")
    r = J.rank
    infl = [inflation(y, K0, fx.quotient, fx.rep_of, 2, fx.inclusion) for y in hq.representatives]
    coords = np.array([h2.coordinates(z) for z in infl]) if infl else np.zeros((0, len(h2.orders)), dtype=np.int64)
    restricted = [h2H.coordinates(restriction(z, K0, ws.group_of("H0"), 2, r)) for z in infl]
    res_img = np.array([h2H.coordinates(ws.restrict_class("K0", "H0", y, 2, r)) for y in h2.representatives])
    ker_res = row_space(nullspace_mod(res_img, p), p)
    return {
        "tate_h0": str(tate),
        "h2_quotient": str(hq.structure),
        "lands_in_kernel": all(not np.asarray(c).any() for c in restricted),
        "spans_kernel": (row_space(coords, p) if len(coords) else frozenset({tuple([0] * len(h2.orders))})) == ker_res,
    }


def exact_sequence_consistency(p: int, stab: str) -> dict:
    """Orders along ``H^2(G,Z) -> H^2(G,Z[G/H]) -> H^2(G,J) -> H^3(G,Z) -> 0``."""
    ws = workspace(p)
    hab = ws.cohomology("G", "ZGH", 2, stab).order
    h2j = ws.cohomology("G", "J", 2, stab).order
    h3 = h3_labeler(p).h3.order
    # the middle map is zero and the connecting map is onto, so |H^2(G,J)| = |H^3(G,Z)|
    return {"H2(G,Z[G/H])": hab, "H2(G,J)": h2j, "H3(G,Z)": h3, "consistent": h2j == h3 == p * p}


def tables_json(t: KernelTable) -> str:
    return json.dumps(t.to_json(), indent=2, sort_keys=True)
