"""G-lattices: the trivial lattice, permutation lattices Z[G/H] and the
Chevalley module J_{G/H} = Z[G/H] / (sum of all cosets).

Action matrices act on column vectors from the left, so
``action(g) @ action(h) == action(g*h)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import NotNormal, NotSubgroup
from .group import CosetSpace, FiniteGroup, HeisenbergGroup, Subgroup
from .linalg import IntMatrix, kernel_lattice, solve


class GLattice:
    """A free Z-module of finite rank with a unimodular action of a finite group."""

    def __init__(
        self,
        group: FiniteGroup,
        generator_matrices: dict,
        labels: Sequence[str] | None = None,
        name: str = "",
        check: bool = True,
    ):
        self.group = group
        mats = {g: np.asarray(m, dtype=np.int64) for g, m in generator_matrices.items()}
        ranks = {m.shape for m in mats.values()}
        if len(ranks) > 1:
            raise ValueError("generator matrices have inconsistent shapes")
        rank = next(iter(ranks))[0] if ranks else (len(labels) if labels is not None else 0)
        self.rank = rank
        self.labels = list(labels) if labels is not None else [f"v{i}" for i in range(rank)]
        self.name = name
        self.generator_matrices = mats
        self._table = self._expand(mats)
        if check:
            self.check()

    def _expand(self, mats: dict) -> np.ndarray:
        G = self.group
        n = len(G)
        table = np.zeros((n, self.rank, self.rank), dtype=np.int64)
        table[0] = np.eye(self.rank, dtype=np.int64)
        done = np.zeros(n, dtype=bool)
        done[0] = True
        frontier = [0]
        gens = [(G.index[g], m) for g, m in mats.items()]
        while frontier:
            nxt = []
            for h in frontier:
                for x, m in gens:
                    k = int(G.table[h, x])
                    if not done[k]:
                        table[k] = table[h] @ m
                        done[k] = True
                        nxt.append(k)
            frontier = nxt
        if not done.all():
            raise ValueError("generator matrices do not cover the whole group")
        return table

    def check(self) -> None:
        G = self.group
        T = self._table
        for g, m in self.generator_matrices.items():
            d = round(abs(np.linalg.det(m))) if self.rank else 1
            if d != 1:
                raise ValueError(f"action of {g} is not unimodular")
        # homomorphism property on all pairs (groups here have at most a few hundred elements)
        if len(G) <= 128:
            prod = np.einsum("aij,bjk->abik", T, T)
            if not np.array_equal(prod, T[G.table]):
                raise ValueError("action is not a homomorphism")
        else:
            for i in range(len(G)):
                for x in G.generator_indices():
                    if not np.array_equal(T[i] @ T[x], T[G.table[i, x]]):
                        raise ValueError("action is not a homomorphism")

    @property
    def table(self) -> np.ndarray:
        """``(|G|, rank, rank)`` array of action matrices indexed like ``group.elements``."""
        return self._table

    def action(self, g: Hashable) -> np.ndarray:
        return self._table[self.group.index[g]]

    def __repr__(self) -> str:
        return f"GLattice({self.name or '?'}, rank={self.rank}, group={self.group.name})"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "labels": self.labels,
            "generators": {str(g): m.tolist() for g, m in self.generator_matrices.items()},
        }

    def twisted(self, phi: Callable, name: str = "") -> "GLattice":
        """Same module with ``g`` acting as ``action(phi(g))``."""
        mats = {g: self.action(phi(g)) for g in self.group.generators}
        return GLattice(self.group, mats, self.labels, name or f"{self.name}^phi")


@dataclass
class LatticeMap:
    source: GLattice
    target: GLattice
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.int64)
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise ValueError("map has the wrong shape")

    def is_equivariant(self) -> bool:
        return all(
            np.array_equal(self.matrix @ self.source.action(g), self.target.action(g) @ self.matrix)
            for g in self.source.group.generators
        )

    def __call__(self, v):
        return self.matrix @ np.asarray(v, dtype=np.int64)


# ---------------------------------------------------------------------------
# constructors


def trivial_lattice(group: FiniteGroup) -> GLattice:
    mats = {g: np.eye(1, dtype=np.int64) for g in group.generators}
    return GLattice(group, mats, ["1"], name="Z", check=False)


def _coset_key(rep: tuple, p: int) -> tuple:
    # exponents 0..p-1 read with p in place of 0, so the identity coset sorts last
    return tuple(x if x else p for x in rep)


def perm_lattice(heis: HeisenbergGroup, H: Subgroup) -> tuple[GLattice, CosetSpace]:
    """``Z[G/H]`` with basis the cosets, ordered so that the identity coset is last."""
    p = heis.p
    cs = heis.cosets(H)
    order = sorted(range(len(cs)), key=lambda k: _coset_key(cs.representatives[k], p))
    reps = [cs.representatives[k] for k in order]
    pos = {}
    for new, old in enumerate(order):
        pos[old] = new
    index = {g: pos[k] for g, k in cs.index.items()}
    cs = CosetSpace(H, tuple(reps), index)
    labels = [_coset_label(r, H, heis) for r in reps]
    n = len(reps)
    mats = {}
    G = heis.group
    for g in G.generators:
        m = np.zeros((n, n), dtype=np.int64)
        for k, r in enumerate(reps):
            m[index[heis.mul(g, r)], k] = 1
        mats[g] = m
    name = "Z[G]" if H.order == 1 else f"Z[G/{H.label or 'H'}]"
    return GLattice(G, mats, labels, name=name), cs


def _coset_label(rep: tuple, H: Subgroup, heis: HeisenbergGroup) -> str:
    p = heis.p
    s, t, u = (x if x else p for x in rep)
    if H.elements == heis.subgroup([heis.a]).elements:
        return f"e_{{{t},{u}}}"
    return f"e_{{{s},{t},{u}}}"


def permutation_lattice_from_action(group: FiniteGroup, perm_of: Callable, npoints: int, name: str = "P") -> GLattice:
    """Permutation lattice of a group action on ``range(npoints)``; ``perm_of(g)[k]`` is ``g.k``."""
    mats = {}
    for g in group.generators:
        m = np.zeros((npoints, npoints), dtype=np.int64)
        for k, j in enumerate(perm_of(g)):
            m[j, k] = 1
        mats[g] = m
    return GLattice(group, mats, [f"x{k}" for k in range(npoints)], name=name)


def chevalley_dual(P: GLattice) -> tuple[GLattice, LatticeMap]:
    """``J = P / Z.(sum of basis)`` with the last basis vector eliminated."""
    n = P.rank
    proj = np.zeros((n - 1, n), dtype=np.int64)
    proj[:, : n - 1] = np.eye(n - 1, dtype=np.int64)
    proj[:, n - 1] = -1
    mats = {}
    for g in P.group.generators:
        m = P.generator_matrices[g]
        mats[g] = proj @ m[:, : n - 1]
    name = P.name.replace("Z[", "J[") if P.name.startswith("Z[") else f"J({P.name})"
    J = GLattice(P.group, mats, P.labels[: n - 1], name=name)
    return J, LatticeMap(P, J, proj)


def norm_embedding(Z: GLattice, P: GLattice) -> LatticeMap:
    return LatticeMap(Z, P, np.ones((P.rank, 1), dtype=np.int64))


def restrict(M: GLattice, sub: FiniteGroup) -> GLattice:
    """Restrict the action to a subgroup whose elements live in ``M.group``."""
    for g in sub.elements:
        if g not in M.group.index:
            raise NotSubgroup(f"{g} is not an element of the acting group")
    mats = {g: M.action(g) for g in sub.generators}
    out = GLattice.__new__(GLattice)
    out.group = sub
    out.rank = M.rank
    out.labels = list(M.labels)
    out.name = f"{M.name}|{sub.name}"
    out.generator_matrices = mats
    out._table = np.stack([M.action(g) for g in sub.elements]) if M.rank else np.zeros((len(sub), 0, 0), dtype=np.int64)
    return out


def fixed_basis_vectors(M: GLattice, g: Hashable) -> list[int]:
    A = M.action(g)
    return [k for k in range(M.rank) if A[k, k] == 1 and np.count_nonzero(A[:, k]) == 1]


# ---------------------------------------------------------------------------
# quotient groups and fixed sublattices


def quotient_group(G: FiniteGroup, N_elements: Sequence[Hashable], name: str = "G/N") -> tuple[FiniteGroup, dict]:
    """``G/N`` with elements the minimal coset representatives; returns the group and ``g -> gN`` map."""
    Nset = set(N_elements)
    for x in G.elements:
        for n in Nset:
            conj = G.mul(G.mul(G.elements[G.inverse[G.index[x]]], n), x)
            if conj not in Nset:
                raise NotNormal(f"{n} conjugated by {x} leaves the subgroup")
    rep_of = {}
    for g in sorted(G.elements, key=lambda e: (e != G.identity, e)):
        if g in rep_of:
            continue
        for n in Nset:
            rep_of.setdefault(G.mul(g, n), g)
    reps = sorted(set(rep_of.values()), key=lambda e: (e != G.identity, e))

    def mul(x, y):
        return rep_of[G.mul(x, y)]

    gens = sorted({rep_of[g] for g in G.generators} - {G.identity})
    Q = FiniteGroup(reps, mul, G.identity, name=name, generators=gens)
    return Q, rep_of


@dataclass
class FixedSublattice:
    lattice: GLattice  # M^N with the induced G/N action
    inclusion: np.ndarray  # rank(M) x rank(M^N), columns form the saturated basis
    quotient: FiniteGroup
    rep_of: dict
    full_action: dict = field(default_factory=dict)  # g in G -> matrix on M^N


def fixed_sublattice(M: GLattice, N_elements: Sequence[Hashable], N_generators: Sequence[Hashable] | None = None) -> FixedSublattice:
    G = M.group
    gens = list(N_generators) if N_generators is not None else list(N_elements)
    Q, rep_of = quotient_group(G, N_elements, name=f"{G.name}/N")
    r = M.rank
    blocks = [M.action(n) - np.eye(r, dtype=np.int64) for n in gens if n != G.identity]
    if blocks:
        stacked = np.vstack(blocks)
        K = kernel_lattice(stacked.tolist())
        B = np.array(K.basis.to_dense(), dtype=np.int64).reshape(r, K.rank)
    else:
        B = np.eye(r, dtype=np.int64)
    k = B.shape[1]
    full = {}
    for g in G.elements:
        image = M.action(g) @ B
        X = np.zeros((k, k), dtype=np.int64)
        for j in range(k):
            x = solve(B.tolist(), image[:, j].tolist())
            if x is None:
                raise NotNormal("fixed sublattice is not stable under the group")
            X[:, j] = x
        full[g] = X
    for g in G.elements:
        if not np.array_equal(full[g], full[rep_of[g]]):
            raise NotNormal("induced action of G/N is not well defined")
    mats = {q: full[q] for q in Q.generators}
    L = GLattice(Q, mats, [f"f{j}" for j in range(k)], name=f"{M.name}^N")
    return FixedSublattice(L, B, Q, rep_of, full)


def dual_lattice(M: GLattice) -> GLattice:
    """``Hom(M, Z)`` with ``g`` acting by ``(A(g)^-1)^T``."""
    G = M.group
    mats = {}
    for g in G.generators:
        ginv = G.elements[G.inverse[G.index[g]]]
        mats[g] = M.action(ginv).T.copy()
    return GLattice(G, mats, [f"{l}*" for l in M.labels], name=f"{M.name}^dual")


def augmentation_ideal(P: GLattice) -> GLattice:
    """Kernel of the augmentation ``P -> Z`` with basis ``e_k - e_last``."""
    n = P.rank
    B = np.zeros((n, n - 1), dtype=np.int64)
    for k in range(n - 1):
        B[k, k] = 1
        B[n - 1, k] = -1
    mats = {}
    for g in P.group.generators:
        img = P.generator_matrices[g] @ B
        # coordinates in the basis B are just the first n-1 entries
        mats[g] = img[: n - 1, :]
    return GLattice(P.group, mats, [f"{P.labels[k]}-{P.labels[-1]}" for k in range(n - 1)], name=f"I({P.name})")


# ---------------------------------------------------------------------------
# isomorphism search


def equivariant_hom_basis(M1: GLattice, M2: GLattice) -> list[np.ndarray]:
    """Z-basis of ``Hom_G(M1, M2)`` (saturated)."""
    r1, r2 = M1.rank, M2.rank
    rows = []
    for g in M1.group.generators:
        A1, A2 = M1.action(g), M2.action(g)
        # X A1 - A2 X = 0, X is r2 x r1 flattened row-major
        L = np.kron(np.eye(r2, dtype=np.int64), A1.T) - np.kron(A2, np.eye(r1, dtype=np.int64))
        rows.append(L)
    if not rows:
        return [np.eye(r2, r1, dtype=np.int64)]
    K = kernel_lattice(np.vstack(rows).tolist())
    return [np.array(v, dtype=np.int64).reshape(r2, r1) for v in K.vectors()]


def equivariant_iso_search(M1: GLattice, M2: GLattice, budget: int = 20000) -> LatticeMap | None:
    """Look for a unimodular equivariant ``M1 -> M2``; None means nothing found within budget."""
    if M1.rank != M2.rank:
        return None
    basis = equivariant_hom_basis(M1, M2)
    if not basis:
        return None
    tried = 0
    for weight in range(1, len(basis) + 1):
        for support in itertools.combinations(range(len(basis)), weight):
            for signs in itertools.product((1, -1), repeat=weight):
                if signs[0] != 1 and weight:
                    continue
                X = sum(s * basis[i] for s, i in zip(signs, support))
                tried += 1
                if round(abs(np.linalg.det(X))) == 1:
                    return LatticeMap(M1, M2, X)
                if tried >= budget:
                    return None
    return None
