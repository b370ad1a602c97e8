"""Inhomogeneous cochains and cohomology of finite groups.

Cochains are flat ``int64`` vectors: the value of an ``n``-cochain at
``(g1, ..., gn)`` in basis direction ``j`` sits at index
``(g1*N^(n-1) + ... + gn) * rank + j`` where group elements are their
indices in ``group.elements``.

For ``n >= 1`` and lattice coefficients ``H^n`` is finite and killed by the
group order, so it equals the torsion of ``coker d^(n-1)``.  That torsion is
read off a Smith elimination over ``Z/q^e`` for every prime ``q`` dividing
the group order, which avoids ever forming ``d^n``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, LiftInconsistent, NotACocycle, NotCyclic, NotInSpan, NotNormal
from .group import FiniteGroup, HeisenbergGroup
from .lattice import GLattice, fixed_sublattice, quotient_group, trivial_lattice
from .linalg import (
    AbGroup,
    IntMatrix,
    LocalSmith,
    _factorize,
    cokernel_mod,
    kernel_lattice,
    kernel_mod,
    solve,
    solve_mod,
    subquotient,
    LatticeBasis,
)

DEFAULT_BUDGET = 200_000
DEFAULT_DENSE_BUDGET = 40_000_000


def dimension_budget() -> int:
    return int(os.environ.get("NORM1_BUDGET", DEFAULT_BUDGET))


def dense_budget() -> int:
    # the dense eliminations scale with the dimension cap
    return max(DEFAULT_DENSE_BUDGET, DEFAULT_DENSE_BUDGET * dimension_budget() // DEFAULT_BUDGET)


def _check_dim(what: str, dim: int) -> None:
    cap = dimension_budget()
    if dim > cap:
        raise BudgetExceeded(what, dim, cap)


# ---------------------------------------------------------------------------
# coefficient handling


@dataclass(frozen=True)
class FiniteCyclic:
    """``(1/m) Z / Z`` inside ``Q/Z`` with trivial action; values stored as residues mod ``m``."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")


def _action_table(G: FiniteGroup, M: GLattice | None) -> np.ndarray:
    if M is None:
        return np.ones((len(G), 1, 1), dtype=np.int64)
    if M.group is not G and len(M.group) != len(G):
        raise ValueError("lattice is defined over a different group")
    return M.table


def _rank(M: GLattice | None) -> int:
    return 1 if M is None else M.rank


@dataclass
class QZCochain:
    """A cochain ``G^n -> (1/m) Z / Z`` stored as residues mod ``m``."""

    group: FiniteGroup
    degree: int
    modulus: int
    table: np.ndarray

    def __post_init__(self):
        N = len(self.group)
        self.table = np.asarray(self.table, dtype=np.int64).reshape((N,) * self.degree) % self.modulus

    def value(self, *elements) -> Fraction:
        idx = tuple(self.group.index[g] for g in elements)
        return Fraction(int(self.table[idx]), self.modulus) % 1

    def rescale(self, modulus: int) -> "QZCochain":
        if modulus % self.modulus:
            raise ValueError("new modulus must be a multiple of the old one")
        return QZCochain(self.group, self.degree, modulus, self.table * (modulus // self.modulus))

    def __add__(self, other: "QZCochain") -> "QZCochain":
        m = max(self.modulus, other.modulus)
        a, b = self.rescale(m), other.rescale(m)
        return QZCochain(self.group, self.degree, m, a.table + b.table)

    def __mul__(self, k: int) -> "QZCochain":
        return QZCochain(self.group, self.degree, self.modulus, self.table * int(k))

    __rmul__ = __mul__

    def flat(self) -> np.ndarray:
        return self.table.reshape(-1)

    def is_zero(self) -> bool:
        return not self.table.any()

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "degree": self.degree,
            "modulus": self.modulus,
            "table": self.flat().tolist(),
        }


# ---------------------------------------------------------------------------
# the differential


def coboundary(G: FiniteGroup, M: GLattice | None, n: int, y) -> np.ndarray:
    """Apply ``d^n`` to an ``n``-cochain; returns the ``(n+1)``-cochain."""
    A = _action_table(G, M)
    r = _rank(M)
    N = len(G)
    T = G.table
    Y = np.asarray(y, dtype=np.int64).reshape((N,) * n + (r,))
    if n == 0:
        return (A @ Y - Y[None, :]).reshape(-1)
    out = np.empty((N,) * (n + 1) + (r,), dtype=np.int64)
    for g1 in range(N):
        O = Y @ A[g1].T
        O -= Y[T[g1]]
        Yg = Y[g1]
        for i in range(2, n + 1):
            k = i - 2
            term = np.take(Yg, T, axis=k)
            O += term if i % 2 == 0 else -term
        last = np.expand_dims(Yg, axis=n - 1)
        if (n + 1) % 2 == 0:
            O += last
        else:
            O -= last
        out[g1] = O
    return out.reshape(-1)


def boundary_coo(G: FiniteGroup, M: GLattice | None, n: int):
    """COO triplets of ``d^n`` (duplicates possible) and its shape."""
    A = _action_table(G, M)
    r = _rank(M)
    N = len(G)
    rows_dim = r * N ** (n + 1)
    cols_dim = r * N**n
    _check_dim(f"C^{n + 1}", rows_dim)
    T = G.table
    tuples = np.arange(N ** (n + 1), dtype=np.int64)
    digits = np.array(np.unravel_index(tuples, (N,) * (n + 1))) if n + 1 > 0 else np.zeros((0, 1), dtype=np.int64)
    jj = np.arange(r, dtype=np.int64)
    R, C, V = [], [], []

    def index_of(dig):
        if not dig:
            return np.zeros_like(tuples)
        return np.ravel_multi_index(tuple(dig), (N,) * len(dig))

    # g1 . f(g2, ..., g_{n+1})
    tail = index_of(list(digits[1:]))
    g1 = digits[0]
    nzj, nzi = np.nonzero(np.abs(A).sum(axis=0))
    vals = A[g1][:, nzj, nzi]  # (tuples, pairs)
    mask = vals != 0
    t_idx = np.broadcast_to(tuples[:, None], vals.shape)[mask]
    c_idx = np.broadcast_to(tail[:, None], vals.shape)[mask]
    R.append(t_idx * r + np.broadcast_to(nzj, vals.shape)[mask])
    C.append(c_idx * r + np.broadcast_to(nzi, vals.shape)[mask])
    V.append(vals[mask])
    sign = -1
    for i in range(1, n + 1):
        dig = list(digits[: i - 1]) + [T[digits[i - 1], digits[i]]] + list(digits[i + 1 :])
        col = index_of(dig)
        R.append((tuples[:, None] * r + jj).reshape(-1))
        C.append((col[:, None] * r + jj).reshape(-1))
        V.append(np.full(len(tuples) * r, sign, dtype=np.int64))
        sign = -sign
    head = index_of(list(digits[:n]))
    R.append((tuples[:, None] * r + jj).reshape(-1))
    C.append((head[:, None] * r + jj).reshape(-1))
    V.append(np.full(len(tuples) * r, sign, dtype=np.int64))
    return np.concatenate(R), np.concatenate(C), np.concatenate(V), (rows_dim, cols_dim)


def boundary_matrix(G: FiniteGroup, M: GLattice | None, n: int) -> IntMatrix:
    """``d^n : C^n -> C^(n+1)`` as a sparse integer matrix."""
    R, C, V, (m, k) = boundary_coo(G, M, n)
    return IntMatrix.from_coo(m, k, R, C, V)


def boundary_dense(G: FiniteGroup, M: GLattice | None, n: int) -> np.ndarray:
    R, C, V, (m, k) = boundary_coo(G, M, n)
    if m * k > dense_budget():
        raise BudgetExceeded(f"dense d^{n}", m * k, dense_budget())
    D = np.zeros((m, k), dtype=np.int64)
    np.add.at(D, (R, C), V)
    return D


# ---------------------------------------------------------------------------
# cohomology groups


@dataclass
class _Primary:
    prime: int
    smith: LocalSmith
    pivots: list  # torsion pivots (row, col, j, unit)


@dataclass
class CohomGroup:
    """``H^n(G, M)`` with one representative cocycle per cyclic factor.

    ``orders`` lists the orders of the representatives, which form a
    primary cyclic decomposition; ``structure`` is the same group in
    invariant-factor form.
    """

    structure: AbGroup
    representatives: list
    orders: list
    degree: int
    coefficients: str
    group: FiniteGroup
    lattice: GLattice | None = None
    _primary: list = field(default_factory=list, repr=False)
    _kernel: LatticeBasis | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return self.structure.order

    def __str__(self) -> str:
        return str(self.structure)

    def is_cocycle(self, z) -> bool:
        return not coboundary(self.group, self.lattice, self.degree, z).any()

    def coordinates(self, z, check: bool = True) -> np.ndarray:
        """Coordinates of the class of ``z`` against the representatives."""
        z = np.asarray(z, dtype=np.int64)
        if check and not self.is_cocycle(z):
            raise NotACocycle(f"not a {self.degree}-cocycle")
        if self.degree == 0:
            x = solve(self._kernel.basis, z.tolist())
            if x is None:
                raise NotInSpan("not an invariant vector")
            return np.array(x, dtype=np.int64)
        out = []
        for prim in self._primary:
            y = prim.smith.apply_rows(z)
            for r, c, j, unit in prim.pivots:
                out.append(int(y[r]) % prim.prime**j)
        return np.array(out, dtype=np.int64)

    def is_coboundary(self, z) -> bool:
        return not self.coordinates(z).any()

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": self.coefficients,
            "group": self.group.name,
            "structure": self.structure.to_json(),
            "orders": list(self.orders),
        }


def _coeff_name(M: GLattice | None) -> str:
    return "Z" if M is None else (M.name or f"rank {M.rank} lattice")


def cohomology(G: FiniteGroup, M: GLattice | None, n: int) -> CohomGroup:
    """``H^n(G, M)`` for ``n`` in 0..3; ``M=None`` means trivial ``Z``."""
    if not 0 <= n <= 3:
        raise ValueError("degree must be between 0 and 3")
    r = _rank(M)
    A = _action_table(G, M)
    name = _coeff_name(M)
    if n == 0:
        blocks = [A[x] - np.eye(r, dtype=np.int64) for x in G.generator_indices()]
        K = kernel_lattice(np.vstack(blocks).tolist()) if blocks else LatticeBasis(r, IntMatrix.identity(r))
        reps = [np.array(v, dtype=np.int64) for v in K.vectors()]
        return CohomGroup(AbGroup((), K.rank), reps, [0] * K.rank, 0, name, G, M, [], K)
    N = len(G)
    _check_dim(f"C^{n}", r * N**n)
    if N == 1:
        return CohomGroup(AbGroup(), [], [], n, name, G, M)
    D = boundary_dense(G, M, n - 1)
    primaries, reps, orders = [], [], []
    for q, v in sorted(_factorize(N).items()):
        ls = LocalSmith(D, q, 2 * v + 1)
        tors = sorted(ls.torsion_pivots(), key=lambda pv: (pv[2], pv[1]))
        for r_, c, j, unit in tors:
            qc = (ls.Q[:, c] * pow(unit, -1, ls.mod)) % ls.mod
            y = D @ qc
            if (y % q**j).any():
                raise AssertionError("torsion representative is not divisible")
            reps.append(y // q**j)
            orders.append(q**j)
        primaries.append(_Primary(q, ls, tors))
    out = CohomGroup(AbGroup.from_cyclic(orders), reps, orders, n, name, G, M, primaries)
    for y in reps:
        if not out.is_cocycle(y):
            raise AssertionError("representative failed the cocycle check")
    return out


# ---------------------------------------------------------------------------
# restriction, inflation, pushforward


def subgroup_indices(G: FiniteGroup, S: FiniteGroup) -> np.ndarray:
    return np.array([G.index[g] for g in S.elements], dtype=np.int64)


def restriction(c, G: FiniteGroup, S: FiniteGroup, n: int, rank: int = 1) -> np.ndarray:
    """Precompose an ``n``-cochain over ``G`` with ``S^n -> G^n``."""
    N = len(G)
    idx = subgroup_indices(G, S)
    Y = np.asarray(c).reshape((N,) * n + (rank,))
    for axis in range(n):
        Y = np.take(Y, idx, axis=axis)
    return Y.reshape(-1)


def restrict_qz(f: QZCochain, S: FiniteGroup) -> QZCochain:
    tab = restriction(f.flat(), f.group, S, f.degree)
    return QZCochain(S, f.degree, f.modulus, tab)


def push_coefficients(c, matrix: np.ndarray, rank_in: int) -> np.ndarray:
    """Apply a coefficient map to every value of a cochain."""
    Y = np.asarray(c, dtype=np.int64).reshape(-1, rank_in)
    return (Y @ np.asarray(matrix, dtype=np.int64).T).reshape(-1)


def inflation(c, G: FiniteGroup, Q: FiniteGroup, rep_of: dict, n: int, inclusion: np.ndarray) -> np.ndarray:
    """Inflate an ``n``-cochain over ``G/N`` valued in ``M^N`` to one over ``G`` valued in ``M``."""
    proj = np.array([Q.index[rep_of[g]] for g in G.elements], dtype=np.int64)
    k = inclusion.shape[1]
    Y = np.asarray(c, dtype=np.int64).reshape((len(Q),) * n + (k,))
    for axis in range(n):
        Y = np.take(Y, proj, axis=axis)
    return push_coefficients(Y.reshape(-1), inclusion, k)


def inflate_from_fixed(c, M: GLattice, N_elements: Sequence, n: int) -> np.ndarray:
    """Inflation along ``G -> G/N`` for a cochain valued in ``M^N`` (recomputes the fixed sublattice)."""
    G = M.group
    try:
        fx = fixed_sublattice(M, N_elements)
    except NotNormal:
        raise
    return inflation(c, G, fx.quotient, fx.rep_of, n, fx.inclusion)


# ---------------------------------------------------------------------------
# Q/Z coefficients in degree 2


def _is_qz_cocycle(f: QZCochain) -> bool:
    """Exact degree-2 cocycle test using only generator triples.

    ``f(g,1)`` constant together with the identity for ``(g, h, x)`` with
    ``x`` a generator implies the identity for all triples by induction on
    the word length of the third argument.
    """
    G = f.group
    m = f.modulus
    F = f.table
    T = G.table
    if len(G) == 1:
        return True
    if ((F[:, 0] - F[0, 0]) % m).any():
        return False
    for x in G.generator_indices():
        # f(g,h) + f(gh,x) = f(h,x) + f(g,hx)
        lhs = F + F[T, x]
        rhs = F[:, x][None, :] + F[:, T[:, x]]
        if ((lhs - rhs) % m).any():
            return False
    return True


def is_qz_cocycle(f: QZCochain) -> bool:
    if f.degree != 2:
        raise ValueError("only degree 2 is supported")
    return _is_qz_cocycle(f)


def coboundary_test_qz(S: FiniteGroup, f: QZCochain, N: int = 2, p: int | None = None) -> QZCochain | None:
    """Look for ``phi: S -> (1/p^N)Z/Z`` with ``d phi = f``; None means ``f`` is not a coboundary."""
    if f.group is not S:
        f = restrict_qz(f, S)
    if not _is_qz_cocycle(f):
        raise NotACocycle("f fails the 2-cocycle identity")
    if p is None:
        p = next(iter(_factorize(f.modulus)))
    m = p**N
    if m % f.modulus:
        raise ValueError(f"values with denominator {f.modulus} need a larger N")
    F = f.rescale(m).table
    n = len(S)
    alpha, beta = _phi_affine(S, F, m)
    T = S.table
    # phi(g) + phi(h) - phi(gh) = f(g,h) for all g, h
    B = (beta[:, None, :] + beta[None, :, :] - beta[T]).reshape(n * n, -1)
    rhs = (F - alpha[:, None] - alpha[None, :] + alpha[T]).reshape(-1)
    u = solve_mod(B, rhs, p, N)
    if u is None:
        return None
    phi = (alpha + beta @ u) % m
    d = (phi[:, None] + phi[None, :] - phi[T]) % m
    if ((d - F) % m).any():
        raise AssertionError("potential does not reproduce f")
    return QZCochain(S, 1, m, phi)


def _phi_affine(S: FiniteGroup, F: np.ndarray, m: int):
    gens = S.generator_indices()
    N = len(S)
    k = len(gens)
    alpha = np.zeros(N, dtype=np.int64)
    beta = np.zeros((N, k), dtype=np.int64)
    alpha[0] = F[0, 0]
    known = np.zeros(N, dtype=bool)
    known[0] = True
    # each generator is its own unknown
    for pos, x in enumerate(gens):
        if not known[x]:
            beta[x, pos] = 1
            known[x] = True
    for h, pos, child in S.cayley_tree():
        if known[child]:
            continue
        x = gens[pos]
        alpha[child] = alpha[h] + alpha[x] - F[h, x]
        beta[child] = beta[h] + beta[x]
        known[child] = True
    return alpha % m, beta % m


def _cocycle_parametrisation(G: FiniteGroup, m: int):
    """Affine-free parametrisation of degree-2 cochains by their values on ``G x gens`` and ``f(1,1)``.

    Returns ``(Fcoef, constraints)``: ``Fcoef[g, k]`` is the coefficient vector
    of the propagated value ``f(g, k)``; ``constraints`` is the matrix whose
    kernel mod ``m`` is the cocycle space.
    """
    N = len(G)
    gens = G.generator_indices()
    k = len(gens)
    nu = N * k + 1
    c = nu - 1
    T = G.table

    def U(g, pos):
        return g * k + pos

    Fc = np.zeros((N, N, nu), dtype=np.int64)
    Fc[:, 0, c] = 1
    tree = G.cayley_tree()
    in_tree = set()
    for h, pos, child in tree:
        x = gens[pos]
        in_tree.add((h, pos))
        # f(g, h x) = f(g, h) + f(g h, x) - f(h, x)
        Fc[:, child] = Fc[:, h]
        Fc[np.arange(N), child, T[:, h] * k + pos] += 1
        Fc[:, child, U(h, pos)] -= 1
    rows = []
    # f(g, x) must equal the parameter U(g, x)
    for pos, x in enumerate(gens):
        block = Fc[:, x].copy()
        block[np.arange(N), U(np.arange(N), pos)] -= 1
        rows.append(block)
    for h in range(N):
        for pos, x in enumerate(gens):
            if (h, pos) in in_tree:
                continue
            hx = T[h, x]
            block = Fc[:, h].copy() - Fc[:, hx]
            block[np.arange(N), T[:, h] * k + pos] += 1
            block[:, U(h, pos)] -= 1
            rows.append(block)
    C = np.vstack(rows) % m if rows else np.zeros((0, nu), dtype=np.int64)
    return Fc % m, C


def _params_of(G: FiniteGroup, F: np.ndarray) -> np.ndarray:
    gens = G.generator_indices()
    return np.concatenate([F[:, gens].reshape(-1), [F[0, 0]]])


def h2_qz(G: FiniteGroup, p: int | None = None) -> CohomGroup:
    """``H^2(G, Q/Z)`` for a ``p``-group, as ``H^2(G, Z/p^N) / Bockstein(Hom(G, Q/Z))``."""
    N = len(G)
    if N == 1:
        return CohomGroup(AbGroup(), [], [], 2, "Q/Z", G)
    primes = _factorize(N)
    if len(primes) != 1:
        raise ValueError("h2_qz expects a group of prime-power order")
    (q, e), = primes.items()
    if p is not None and p != q:
        raise ValueError("group order is not a power of p")
    m = q**e
    _check_dim("Z^2 constraints", N * N * len(G.generators))
    Fc, C = _cocycle_parametrisation(G, m)
    Z = kernel_mod(C, q, e)
    T = G.table
    rels = []
    for k in range(N):
        psi = np.zeros(N, dtype=np.int64)
        psi[k] = 1
        F = psi[:, None] + psi[None, :] - psi[T]
        rels.append(Z.coordinates(_params_of(G, F % m)))
    # homomorphisms G -> Z/m and their Bockstein images
    H = np.zeros((N * N, N), dtype=np.int64)
    ii = np.arange(N * N)
    gg, hh = np.divmod(ii, N)
    np.add.at(H, (ii, gg), 1)
    np.add.at(H, (ii, hh), 1)
    np.add.at(H, (ii, T[gg, hh]), -1)
    homs = kernel_mod(H, q, e)
    for a in homs.generators:
        a = a % m
        num = a[:, None] + a[None, :] - a[T]
        if (num % m).any():
            raise AssertionError("homomorphism check failed")
        rels.append(Z.coordinates(_params_of(G, (num // m) % m)))
    s = len(Z.generators)
    R = np.zeros((s, len(rels) + s), dtype=np.int64)
    for j, v in enumerate(rels):
        R[:, j] = v
    for i, o in enumerate(Z.orders):
        R[i, len(rels) + i] = o
    orders, gens = cokernel_mod(R, q, e + 1)
    reps = []
    for gvec in gens:
        x = sum(int(cf) * Z.generators[i] for i, cf in enumerate(gvec)) % m
        F = (Fc @ x) % m
        reps.append(QZCochain(G, 2, m, F))
    out = CohomGroup(AbGroup.from_cyclic(orders), reps, orders, 2, "Q/Z", G)
    for f in reps:
        if not _is_qz_cocycle(f):
            raise AssertionError("h2 representative is not a cocycle")
    return out


# ---------------------------------------------------------------------------
# the Heisenberg cocycles and connecting maps


def make_f1_f2(p: int) -> tuple[QZCochain, QZCochain]:
    heis = heisenberg(p)
    G = heis.group
    E = np.array(G.elements, dtype=np.int64)
    s1, t1, u1 = (E[:, i][:, None] for i in range(3))
    s2, t2, u2 = (E[:, i][None, :] for i in range(3))
    f1 = u1 * s2 + t1 * (s2 * (s2 - 1) // 2)
    f2 = (t1 * (t1 - 1) // 2) * s2 + (t1 * s2 + u1) * t2
    return QZCochain(G, 2, p, f1), QZCochain(G, 2, p, f2)


@lru_cache(maxsize=None)
def heisenberg(p: int) -> HeisenbergGroup:
    return HeisenbergGroup(p)


def connecting_qz_to_h3z(f: QZCochain) -> np.ndarray:
    """Integer 3-cocycle ``d(F)/m`` for the numerator table ``F`` of ``f``."""
    G = f.group
    dF = coboundary(G, None, 2, f.flat())
    if (dF % f.modulus).any():
        raise NotACocycle("f is not a cocycle mod its modulus")
    return dF // f.modulus


def connecting_lattice(G: FiniteGroup, z, P: GLattice, J: GLattice, n: int = 2) -> np.ndarray:
    """``delta`` for ``0 -> Z -> P -> J -> 0`` with ``J`` the quotient by the sum of the basis.

    ``z`` is an ``n``-cocycle in ``J``; the lift puts coordinate 0 on the
    eliminated basis vector.  Returns the ``Z``-valued ``(n+1)``-cocycle.
    """
    r = J.rank
    z = np.asarray(z, dtype=np.int64)
    if coboundary(G, J, n, z).any():
        raise NotACocycle("z is not a cocycle")
    Zl = np.zeros((z.size // r, r + 1), dtype=np.int64)
    Zl[:, :r] = z.reshape(-1, r)
    W = coboundary(G, P, n, Zl.reshape(-1)).reshape(-1, r + 1)
    if (W - W[:, :1]).any():
        raise LiftInconsistent("coboundary of the lift leaves the norm line")
    return W[:, 0].copy()


@dataclass(frozen=True)
class ClassLabel:
    l: int
    m: int
    line: tuple | None  # normalised generator of the line, None for the zero class

    def __iter__(self):
        return iter((self.l, self.m))


def normalize_line(v: tuple, p: int) -> tuple | None:
    l, m = v[0] % p, v[1] % p
    if (l, m) == (0, 0):
        return None
    return min(((k * l) % p, (k * m) % p) for k in range(1, p))


class H3Labeler:
    """Coordinates in ``H^3(G, Z)`` for the Heisenberg group and the basis ``delta f1, delta f2``."""

    def __init__(self, p: int):
        self.p = p
        heis = heisenberg(p)
        self.group = heis.group
        self.h3 = cohomology(self.group, None, 3)
        f1, f2 = make_f1_f2(p)
        self.basis = np.array(
            [self.h3.coordinates(connecting_qz_to_h3z(f1)), self.h3.coordinates(connecting_qz_to_h3z(f2))]
        )

    def label(self, c) -> ClassLabel:
        p = self.p
        x = self.h3.coordinates(c)
        orders = np.array(self.h3.orders)
        for l in range(p):
            for m in range(p):
                if not ((l * self.basis[0] + m * self.basis[1] - x) % orders).any():
                    return ClassLabel(l, m, normalize_line((l, m), p))
        raise NotInSpan("class is not in the span of delta f1, delta f2")


_LABELERS: dict = {}


def h3_labeler(p: int) -> H3Labeler:
    if p not in _LABELERS:
        _LABELERS[p] = H3Labeler(p)
    return _LABELERS[p]


def h3_class_label(c, p: int) -> ClassLabel:
    return h3_labeler(p).label(c)


# ---------------------------------------------------------------------------
# Tate cohomology, Shapiro, cyclic helpers


def cyclic_generator(S: FiniteGroup):
    for i in range(len(S)):
        if S.element_order(i) == len(S):
            return S.elements[i]
    raise NotCyclic(f"{S.name} is not cyclic")


def tate_h0_cyclic(S: FiniteGroup, M: GLattice) -> AbGroup:
    """``M^S / N_S(M)`` for cyclic ``S`` acting through ``M``."""
    g = cyclic_generator(S)
    r = M.rank
    Ag = M.action(g)
    K = kernel_lattice((Ag - np.eye(r, dtype=np.int64)).tolist())
    norm = sum(M.action(x) for x in S.elements)
    grp, _ = subquotient(K, norm.tolist())
    return grp


@dataclass
class ShapiroReport:
    degree: int
    induced: AbGroup
    subgroup: AbGroup

    @property
    def agree(self) -> bool:
        return self.induced == self.subgroup


def shapiro_check(G: FiniteGroup, P: GLattice, S: FiniteGroup, n: int) -> ShapiroReport:
    """Compute ``H^n(G, Z[G/S])`` and ``H^n(S, Z)`` independently."""
    left = cohomology(G, P, n).structure
    right = cohomology(S, None, n).structure
    return ShapiroReport(n, left, right)


def cocycle_json(G: FiniteGroup, n: int, values, lattice: str | None = None, modulus: int | None = None) -> str:
    d = {"group": G.name, "degree": n, "table": np.asarray(values).tolist()}
    if modulus is not None:
        d["modulus"] = modulus
    else:
        d["lattice"] = lattice or "Z"
    return json.dumps(d)
