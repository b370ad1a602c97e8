"""Exact integer linear algebra.

Two layers live here:

* small exact routines over arbitrary-precision ``int`` (Hermite and Smith
  normal forms, saturated kernels, integral solving, subquotients), used for
  anything up to a few hundred rows;
* :class:`LocalSmith`, a Smith elimination over ``Z/p^e`` on dense ``int64``
  arrays.  Over the local ring every pivot choice is "smallest valuation", so
  the elimination is a plain sweep.  It yields the ``p``-parts of the
  elementary divisors of an integer matrix whose nonzero elementary divisors
  are known to divide ``p^v`` with ``2v < e``, together with the column
  transform and a replayable record of the row operations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np

from .errors import NonPrimeModulus, NotInSpan


# ---------------------------------------------------------------------------
# containers


class IntMatrix:
    """Sparse integer matrix in coordinate form with sorted canonical order."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError((r, c))
            v = int(v)
            if v:
                self.entries[(r, c)] = v

    @classmethod
    def from_dense(cls, M) -> "IntMatrix":
        M = [list(map(int, row)) for row in M]
        rows = len(M)
        cols = len(M[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, row in enumerate(M) for j, v in enumerate(row) if v})

    @classmethod
    def from_coo(cls, rows: int, cols: int, r, c, v) -> "IntMatrix":
        out = cls(rows, cols)
        acc = out.entries
        for i, j, x in zip(np.asarray(r).tolist(), np.asarray(c).tolist(), np.asarray(v).tolist()):
            acc[(i, j)] = acc.get((i, j), 0) + x
        for key in [k for k, x in acc.items() if x == 0]:
            del acc[key]
        return out

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self) -> list[list[int]]:
        M = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            M[r][c] = v
        return M

    def to_numpy(self, dtype=np.int64) -> np.ndarray:
        M = np.zeros((self.rows, self.cols), dtype=dtype)
        for (r, c), v in self.entries.items():
            M[r, c] = v
        return M

    def triples(self) -> list[list[int]]:
        return [[r, c, v] for (r, c), v in sorted(self.entries.items())]

    def to_json(self) -> str:
        return json.dumps({"rows": self.rows, "cols": self.cols, "entries": self.triples()})

    @classmethod
    def from_json(cls, text: str) -> "IntMatrix":
        d = json.loads(text)
        return cls(d["rows"], d["cols"], {(r, c): v for r, c, v in d["entries"]})

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            by_row: dict[int, list] = {}
            for (r, c), v in other.entries.items():
                by_row.setdefault(r, []).append((c, v))
            out: dict = {}
            for (r, k), v in self.entries.items():
                for c, w in by_row.get(k, ()):
                    out[(r, c)] = out.get((r, c), 0) + v * w
            return IntMatrix(self.rows, other.cols, out)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        out = [0] * self.rows
        for (r, c), v in self.entries.items():
            out[r] += v * vec[c]
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


@dataclass(frozen=True)
class AbGroup:
    """Finitely generated abelian group ``Z/d1 + ... + Z/dk + Z^r`` with ``d1 | d2 | ...``."""

    factors: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors)
        if any(d <= 1 for d in fs):
            raise ValueError("invariant factors must exceed 1")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise ValueError(f"divisibility chain broken: {fs}")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def from_cyclic(cls, orders: Iterable[int], free_rank: int = 0) -> "AbGroup":
        """Normalise an arbitrary list of cyclic orders into invariant factors."""
        primes: dict[int, list[int]] = {}
        for d in orders:
            d = abs(int(d))
            if d == 0:
                free_rank += 1
                continue
            for q, k in _factorize(d).items():
                primes.setdefault(q, []).append(q**k)
        for q in primes:
            primes[q].sort(reverse=True)
        n = max((len(v) for v in primes.values()), default=0)
        out = []
        for i in range(n):
            out.append(prod(v[i] for v in primes.values() if i < len(v)))
        return cls(tuple(sorted(out)), free_rank)

    @classmethod
    def trivial(cls) -> "AbGroup":
        return cls()

    @property
    def order(self) -> int | None:
        return prod(self.factors) if self.free_rank == 0 else None

    @property
    def is_trivial(self) -> bool:
        return not self.factors and self.free_rank == 0

    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"factors": list(self.factors), "free_rank": self.free_rank}


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass
class LatticeBasis:
    """Saturated sublattice of ``Z^dim``; basis vectors are the columns of ``basis``."""

    dim: int
    basis: IntMatrix

    @property
    def rank(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[list[int]]:
        cols = [[0] * self.dim for _ in range(self.rank)]
        for (r, c), v in self.basis.entries.items():
            cols[c][r] = v
        return cols


# ---------------------------------------------------------------------------
# dense helpers on lists of lists


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, IntMatrix):
        return M.to_dense()
    if isinstance(M, np.ndarray):
        return [[int(x) for x in row] for row in M.tolist()]
    return [[int(x) for x in row] for row in M]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = x*a + y*b = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _pivot_gcd(a: int, b: int) -> tuple[int, int, int]:
    # plain elimination when the pivot already divides b, so cleared entries stay cleared
    if b % a == 0:
        return a, 1, 0
    return _xgcd(a, b)


def _hnf_rows(A: list[list[int]], ncols: int, track: bool):
    """Row Hermite normal form in place; returns (H, U, pivots)."""
    m = len(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= m:
            break
        nz = [i for i in range(r, m) if A[i][c]]
        if not nz:
            continue
        # Euclid on column c: move the smallest entry up and reduce the rest by it
        while True:
            k = min(nz, key=lambda i: abs(A[i][c]))
            if k != r:
                A[r], A[k] = A[k], A[r]
                if track:
                    U[r], U[k] = U[k], U[r]
            piv = A[r][c]
            for i in range(r + 1, m):
                q = A[i][c] // piv
                if q:
                    A[i] = [u - q * v for u, v in zip(A[i], A[r])]
                    if track:
                        U[i] = [u - q * v for u, v in zip(U[i], U[r])]
            nz = [i for i in range(r, m) if A[i][c]]
            if nz == [r]:
                break
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
            if track:
                U[r] = [-v for v in U[r]]
        piv = A[r][c]
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [u - q * v for u, v in zip(A[i], A[r])]
                if track:
                    U[i] = [u - q * v for u, v in zip(U[i], U[r])]
        pivots.append(c)
        r += 1
    return A, U, pivots


def hnf(M) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form ``H = U M`` with ``U`` unimodular.

    Pivots are positive, entries above each pivot are reduced into
    ``[0, pivot)``, zero rows sit at the bottom.
    """
    A = _as_rows(M)
    m = len(A)
    ncols = M.cols if isinstance(M, IntMatrix) else (len(A[0]) if m else 0)
    H, U, _ = _hnf_rows([row[:] for row in A], ncols, True)
    return IntMatrix.from_dense(H) if m else IntMatrix(0, ncols), IntMatrix.from_dense(U) if m else IntMatrix(0, 0)


def _snf_dense(A: list[list[int]], track: bool):
    """Smith normal form; returns (diag, P, Q) with ``P A Q = diag``."""
    m = len(A)
    n = len(A[0]) if m else 0
    A = [row[:] for row in A]
    P = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    Q = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in Q:
                row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t] == 0:
                    continue
                a, b = A[t][t], A[i][t]
                g, x, y = _pivot_gcd(a, b)
                ag, bg = a // g, b // g
                ra, rb = A[t], A[i]
                A[t] = [x * u + y * v for u, v in zip(ra, rb)]
                A[i] = [ag * v - bg * u for u, v in zip(ra, rb)]
                if track:
                    pa, pb = P[t], P[i]
                    P[t] = [x * u + y * v for u, v in zip(pa, pb)]
                    P[i] = [ag * v - bg * u for u, v in zip(pa, pb)]
                changed = True
            for j in range(t + 1, n):
                if A[t][j] == 0:
                    continue
                a, b = A[t][t], A[t][j]
                g, x, y = _pivot_gcd(a, b)
                ag, bg = a // g, b // g
                for row in A:
                    u, v = row[t], row[j]
                    row[t], row[j] = x * u + y * v, ag * v - bg * u
                if track:
                    for row in Q:
                        u, v = row[t], row[j]
                        row[t], row[j] = x * u + y * v, ag * v - bg * u
                changed = True
            if not changed:
                break
        d = A[t][t]
        bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % d), None)
        if bad is not None:
            # pull an offending row in and redo this step to restore divisibility
            i, _ = bad
            A[t] = [u + v for u, v in zip(A[t], A[i])]
            if track:
                P[t] = [u + v for u, v in zip(P[t], P[i])]
            continue
        if d < 0:
            A[t] = [-v for v in A[t]]
            if track:
                P[t] = [-v for v in P[t]]
        t += 1
    diag = [A[i][i] for i in range(min(m, n))]
    return diag, P, Q


@dataclass
class SmithForm:
    diagonal: list
    P: IntMatrix | None = None
    Q: IntMatrix | None = None

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]

    def cokernel(self, rows: int) -> AbGroup:
        nonzero = [d for d in self.diagonal if d]
        return AbGroup(tuple(d for d in nonzero if d > 1), rows - len(nonzero))


def snf(M, transforms: bool = False) -> SmithForm:
    A = _as_rows(M)
    diag, P, Q = _snf_dense(A, transforms)
    if transforms:
        return SmithForm(diag, IntMatrix.from_dense(P), IntMatrix.from_dense(Q))
    return SmithForm(diag)


def cokernel(M) -> AbGroup:
    rows = M.rows if isinstance(M, IntMatrix) else len(M)
    return snf(M).cokernel(rows)


def kernel_lattice(M) -> LatticeBasis:
    """Saturated basis of ``{x : M x = 0}``, canonicalised by HNF."""
    A = _as_rows(M)
    ncols = M.cols if isinstance(M, IntMatrix) else (len(A[0]) if A else 0)
    if not A:
        return LatticeBasis(ncols, IntMatrix.identity(ncols))
    At = [list(col) for col in zip(*A)] if A and A[0] else [[] for _ in range(ncols)]
    H, U, pivots = _hnf_rows([row[:] for row in At], len(A), True)
    r = len(pivots)
    K = [U[i] for i in range(r, ncols)]
    if K:
        K, _, _ = _hnf_rows(K, ncols, False)
        K = [row for row in K if any(row)]
    basis = IntMatrix(ncols, len(K), {(j, i): v for i, row in enumerate(K) for j, v in enumerate(row) if v})
    return LatticeBasis(ncols, basis)


def solve(M, b: Sequence[int]) -> list[int] | None:
    """Some integral ``x`` with ``M x = b``, or None."""
    A = _as_rows(M)
    m = len(A)
    ncols = M.cols if isinstance(M, IntMatrix) else (len(A[0]) if m else 0)
    b = [int(v) for v in b]
    if len(b) != m:
        raise ValueError("right-hand side has wrong length")
    if ncols == 0:
        return [] if not any(b) else None
    At = [list(col) for col in zip(*A)] if m else [[] for _ in range(ncols)]
    H, U, pivots = _hnf_rows([row[:] for row in At], m, True)
    # M U^T = H^T: solve H^T y = b along the pivot rows
    y = []
    for i, c in enumerate(pivots):
        acc = b[c] - sum(H[j][c] * y[j] for j in range(i))
        if acc % H[i][c]:
            return None
        y.append(acc // H[i][c])
    y += [0] * (ncols - len(y))
    x = [sum(U[i][j] * y[i] for i in range(ncols)) for j in range(ncols)]
    check = [sum(A[r][j] * x[j] for j in range(ncols)) for r in range(m)]
    return x if check == b else None


def subquotient(K: LatticeBasis, J) -> tuple[AbGroup, IntMatrix]:
    """Present ``span(K) / span(J columns)`` as an abelian group.

    Returns the group and the matrix of ``J`` in ``K`` coordinates.
    """
    Jrows = _as_rows(J)
    ncols = J.cols if isinstance(J, IntMatrix) else (len(Jrows[0]) if Jrows else 0)
    Kmat = K.basis
    coords = []
    for j in range(ncols):
        col = [Jrows[i][j] for i in range(len(Jrows))]
        x = solve(Kmat, col) if K.rank else ([] if not any(col) else None)
        if x is None:
            raise NotInSpan(f"column {j} is not in the span of the lattice")
        coords.append(x)
    C = IntMatrix(K.rank, ncols, {(i, j): v for j, x in enumerate(coords) for i, v in enumerate(x) if v})
    if ncols == 0:
        return AbGroup((), K.rank), C
    return cokernel(C), C


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def modular_rank(M, m: int) -> int:
    if not is_prime(m):
        raise NonPrimeModulus(f"{m} is not prime")
    if isinstance(M, IntMatrix):
        A = M.to_numpy(np.int64) if m < 2**31 else M.to_dense()
    else:
        A = np.asarray(M, dtype=np.int64) if m < 2**31 else _as_rows(M)
    if isinstance(A, np.ndarray):
        A = A % m
        rank = 0
        rows, cols = A.shape
        for c in range(cols):
            if rank == rows:
                break
            nz = np.flatnonzero(A[rank:, c])
            if not len(nz):
                continue
            r = rank + int(nz[0])
            A[[rank, r]] = A[[r, rank]]
            inv = pow(int(A[rank, c]), -1, m)
            A[rank] = (A[rank] * inv) % m
            below = rank + 1 + np.flatnonzero(A[rank + 1 :, c])
            if len(below):
                A[below] = (A[below] - np.outer(A[below, c], A[rank])) % m
            rank += 1
        return rank
    A = [[v % m for v in row] for row in A]
    rank = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        r = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if r is None:
            continue
        A[rank], A[r] = A[r], A[rank]
        inv = pow(A[rank][c], -1, m)
        A[rank] = [v * inv % m for v in A[rank]]
        for i in range(rank + 1, len(A)):
            if A[i][c]:
                f = A[i][c]
                A[i] = [(u - f * v) % m for u, v in zip(A[i], A[rank])]
        rank += 1
    return rank


def unimodular(M) -> bool:
    sf = snf(M)
    A = _as_rows(M)
    return len(A) == (len(A[0]) if A else 0) and all(abs(d) == 1 for d in sf.diagonal)


# ---------------------------------------------------------------------------
# elimination over Z/p^e


def valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class LocalSmith:
    """Smith elimination of an integer matrix over ``Z/p^e``.

    ``A`` is an ``m x k`` integer array.  After construction:

    * ``pivots`` lists ``(row, col, j, unit)`` with pivot value ``p^j * unit``;
    * ``Q`` is the ``k x k`` column transform (mod ``p^e``);
    * :meth:`apply_rows` replays the row operations on new vectors.

    With ``P`` the recorded row transform, ``P A Q = D (mod p^e)`` where
    ``D`` carries the pivot values at the pivot positions.
    """

    def __init__(self, A: np.ndarray, p: int, e: int, track_columns: bool = True, track_inverses: bool = False, track_row_inverse: bool = False):
        self.p = p
        self.e = e
        self.mod = mod = p**e
        if mod >= 2**31:
            raise ValueError("modulus too large for int64 elimination")
        A = np.array(A, dtype=np.int64) % mod
        m, k = A.shape
        self.shape = (m, k)
        self.Q = np.eye(k, dtype=np.int64) if track_columns else None
        # inverses of P and Q, only affordable for small matrices
        self.Qinv = np.eye(k, dtype=np.int64) if track_inverses else None
        self.Pinv = np.eye(m, dtype=np.int64) if track_row_inverse else None
        self.ops: list[tuple[int, np.ndarray, np.ndarray]] = []
        self.pivots: list[tuple[int, int, int, int]] = []
        row_active = np.ones(m, dtype=bool)
        col_active = np.ones(k, dtype=bool)
        for j in range(e):
            pj = p**j
            pj1 = p ** (j + 1)
            progress = True
            while progress:
                progress = False
                for c in np.flatnonzero(col_active):
                    col = A[:, c]
                    cand = np.flatnonzero(row_active & (col % pj1 != 0))
                    if not len(cand):
                        continue
                    r = int(cand[0])
                    self._eliminate(A, r, int(c), pj, row_active, col_active)
                    progress = True
        self.rank_mod = len(self.pivots)

    def _eliminate(self, A, r, c, pj, row_active, col_active):
        mod = self.mod
        piv = int(A[r, c])
        unit = (piv // pj) % mod
        uinv = pow(unit, -1, mod)
        rows = np.flatnonzero(A[:, c])
        rows = rows[rows != r]
        if len(rows):
            mult = ((A[rows, c] // pj) * uinv) % mod
            A[rows] = (A[rows] - np.outer(mult, A[r])) % mod
            self.ops.append((r, rows, mult))
            if self.Pinv is not None:
                self.Pinv[:, r] = (self.Pinv[:, r] + self.Pinv[:, rows] @ mult) % mod
        cols = np.flatnonzero(A[r])
        cols = cols[cols != c]
        if len(cols) and self.Q is not None:
            w = ((A[r, cols] // pj) * uinv) % mod
            self.Q[:, cols] = (self.Q[:, cols] - np.outer(self.Q[:, c], w)) % mod
            if self.Qinv is not None:
                self.Qinv[c] = (self.Qinv[c] + w @ self.Qinv[cols]) % mod
        A[r, cols] = 0
        row_active[r] = False
        col_active[c] = False
        self.pivots.append((r, c, valuation(piv, self.p), unit))

    def apply_rows(self, Y: np.ndarray) -> np.ndarray:
        """Return ``P Y mod p^e`` for a vector or a matrix of column vectors."""
        mod = self.mod
        Y = np.array(Y, dtype=np.int64) % mod
        vec = Y.ndim == 1
        if vec:
            Y = Y[:, None]
        for r, rows, mult in self.ops:
            Y[rows] = (Y[rows] - np.outer(mult, Y[r])) % mod
        return Y[:, 0] if vec else Y

    def torsion_pivots(self) -> list[tuple[int, int, int, int]]:
        return [pv for pv in self.pivots if pv[2] > 0]

    def nonpivot_rows(self) -> np.ndarray:
        mask = np.ones(self.shape[0], dtype=bool)
        for r, _, _, _ in self.pivots:
            mask[r] = False
        return np.flatnonzero(mask)


def solve_mod(A: np.ndarray, b: np.ndarray, p: int, e: int) -> np.ndarray | None:
    """Some ``x`` with ``A x = b (mod p^e)``, or None."""
    A = np.asarray(A, dtype=np.int64)
    mod = p**e
    b = np.asarray(b, dtype=np.int64) % mod
    if A.shape[1] == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    ls = LocalSmith(A, p, e)
    y = ls.apply_rows(b)
    w = np.zeros(A.shape[1], dtype=np.int64)
    used = np.zeros(A.shape[0], dtype=bool)
    for r, c, j, unit in ls.pivots:
        used[r] = True
        if y[r] % p**j:
            return None
        w[c] = (y[r] // p**j) * pow(unit, -1, mod) % mod
    if y[~used].any():
        return None
    x = (ls.Q @ w) % mod
    if (((A % mod) @ x - b) % mod).any():
        return None
    return x


@dataclass
class ModKernel:
    """``{x : A x = 0 (mod p^e)}`` as a direct sum of cyclic ``Z/p^e``-submodules."""

    p: int
    e: int
    generators: list  # vectors
    orders: list
    _Qinv: np.ndarray = field(repr=False, default=None)
    _slots: list = field(repr=False, default_factory=list)  # (column, divisor)

    def coordinates(self, x) -> np.ndarray:
        mod = self.p**self.e
        w = (self._Qinv @ (np.asarray(x, dtype=np.int64) % mod)) % mod
        out = np.zeros(len(self._slots), dtype=np.int64)
        for i, (c, div) in enumerate(self._slots):
            if w[c] % div:
                raise NotInSpan("vector is not in the kernel")
            out[i] = (w[c] // div) % self.orders[i]
        return out


def kernel_mod(A: np.ndarray, p: int, e: int) -> ModKernel:
    A = np.asarray(A, dtype=np.int64)
    k = A.shape[1]
    mod = p**e
    if A.shape[0] == 0:
        gens = [np.eye(k, dtype=np.int64)[i] for i in range(k)]
        return ModKernel(p, e, gens, [mod] * k, np.eye(k, dtype=np.int64), [(i, 1) for i in range(k)])
    ls = LocalSmith(A, p, e, track_inverses=True)
    gens, orders, slots = [], [], []
    pivot_cols = {}
    for r, c, j, unit in ls.pivots:
        pivot_cols[c] = j
    for c in range(k):
        j = pivot_cols.get(c)
        if j is None:
            gens.append(ls.Q[:, c].copy())
            orders.append(mod)
            slots.append((c, 1))
        elif j > 0:
            div = p ** (e - j)
            gens.append(ls.Q[:, c] * div % mod)
            orders.append(p**j)
            slots.append((c, div))
    # non-kernel columns must vanish in the coordinates
    return ModKernel(p, e, gens, orders, ls.Qinv, slots)


def cokernel_mod(R: np.ndarray, p: int, e: int) -> tuple[list, list]:
    """Cyclic decomposition of ``Z^s / im(R)`` when ``p^(e-1)`` kills it.

    Returns ``(orders, generators)`` with generators as vectors in ``Z^s``.
    """
    R = np.asarray(R, dtype=np.int64)
    s = R.shape[0]
    ls = LocalSmith(R, p, e, track_row_inverse=True)
    orders, gens = [], []
    pivot_rows = set()
    for r, c, j, unit in ls.pivots:
        pivot_rows.add(r)
        if j > 0:
            orders.append(p**j)
            gens.append(ls.Pinv[:, r].copy())
    if len(pivot_rows) != s:
        raise ValueError("cokernel is not killed by p^(e-1)")
    return orders, gens
