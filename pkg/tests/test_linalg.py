import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from norm1lab.errors import NotInSpan
from norm1lab.linalg import (
    AbGroup,
    IntMatrix,
    LocalSmith,
    cokernel,
    cokernel_mod,
    hnf,
    kernel_lattice,
    kernel_mod,
    modular_rank,
    snf,
    solve,
    solve_mod,
    subquotient,
    unimodular,
)


def int_matrices(max_rows=8, max_cols=8, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def sympy_invariants(A):
    S = smith_normal_form(Matrix(A), domain=ZZ)
    return sorted(abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0)


def test_intmatrix_roundtrip():
    M = IntMatrix.from_dense([[1, 0, 2], [0, -3, 0]])
    assert IntMatrix.from_json(M.to_json()) == M
    assert M.transpose().to_dense() == [[1, 0], [0, -3], [2, 0]]
    assert (M @ IntMatrix.identity(3)) == M


def test_abgroup_normalisation():
    assert AbGroup.from_cyclic([2, 3]).factors == (6,)
    assert AbGroup.from_cyclic([4, 2, 0]) == AbGroup((2, 4), 1)
    assert str(AbGroup.from_cyclic([3, 3])) == "Z/3 + Z/3"
    assert str(AbGroup()) == "0"
    with pytest.raises(ValueError):
        AbGroup((2, 3))


def test_known_cokernels():
    assert cokernel([[2, 0], [0, 3]]) == AbGroup((6,))
    assert cokernel([[2, 4], [6, 8]]) == AbGroup((2, 4))
    assert cokernel([[0, 0]]) == AbGroup((), 1)


@given(int_matrices())
def test_snf_matches_sympy(A):
    got = sorted(d for d in snf(A).invariant_factors if d)
    assert got == sympy_invariants(A)


@given(int_matrices())
def test_snf_transforms(A):
    S = snf(A, transforms=True)
    P, Q = np.array(S.P.to_dense(), dtype=object), np.array(S.Q.to_dense(), dtype=object)
    assert unimodular(P.tolist()) and unimodular(Q.tolist())
    D = P @ np.array(A, dtype=object) @ Q
    for i, j in itertools.product(range(D.shape[0]), range(D.shape[1])):
        if i != j:
            assert D[i, j] == 0


@given(int_matrices())
def test_hnf_is_triangular_and_equivalent(A):
    H, U = hnf(A)
    # transforms can outgrow int64, so compare with exact integers
    Hn, Un = np.array(H.to_dense(), dtype=object), np.array(U.to_dense(), dtype=object)
    assert unimodular(Un.tolist())
    assert (Un @ np.array(A, dtype=object) == Hn).all()


@settings(max_examples=40)
@given(st.integers(1, 20).flatmap(lambda m: st.integers(1, 30).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=m, max_size=m))))
def test_kernel_saturation_against_dense_oracle(A):
    K = kernel_lattice(A)
    M = Matrix(A)
    assert K.rank == M.shape[1] - M.rank()
    V = K.vectors()
    for v in V:
        assert all(x == 0 for x in M * Matrix(v))
    if V:
        # saturated: every invariant factor of the basis is 1
        assert sympy_invariants([list(v) for v in V]) == [1] * len(V)
        # and every rational kernel vector, cleared of denominators, is an integral combination
        B = Matrix(V).T
        for w in M.nullspace():
            w = w * math.lcm(*(x.q for x in w))
            sol = B.solve_least_squares(w) if B.shape[0] != B.shape[1] else B.solve(w)
            assert all(x.is_integer for x in sol)


@given(int_matrices(6, 6), st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_solve(A, x0):
    x0 = x0[: len(A[0])]
    b = (np.array(A) @ np.array(x0)).tolist()
    x = solve(A, b)
    assert x is not None
    assert (np.array(A) @ np.array(x)).tolist() == b


def test_solve_reports_no_solution():
    assert solve([[2, 0], [0, 2]], [1, 0]) is None


def test_subquotient():
    K = kernel_lattice([[1, -1, 0]])
    grp, _ = subquotient(K, [[3, 0], [3, 0], [0, 1]])
    assert grp == AbGroup((3,))
    with pytest.raises(NotInSpan):
        subquotient(K, [[1], [0], [0]])


@given(int_matrices(7, 7, -20, 20), st.sampled_from([2, 3, 5]), st.integers(1, 3))
def test_local_smith_decomposition(A, p, e):
    mod = p**e
    ls = LocalSmith(np.array(A), p, e, track_inverses=True, track_row_inverse=True)
    assert ((ls.Q @ ls.Qinv) % mod == np.eye(len(A[0]), dtype=np.int64)).all()
    # the p-part of the invariant factors, truncated at p^e, matches the pivots
    expected = []
    for d in sympy_invariants(A):
        j = 0
        while d % p == 0 and j < e:
            d //= p
            j += 1
        expected.append(j)
    got = sorted(j for _, _, j, _ in ls.pivots)
    assert sorted(x for x in expected if x < e) == [x for x in got if x < e]
    assert modular_rank(A, p) == sum(1 for _, _, j, _ in ls.pivots if j == 0)


@given(int_matrices(6, 6, -9, 9), st.sampled_from([3, 5]), st.integers(1, 3), st.data())
def test_solve_mod_and_kernel_mod(A, p, e, data):
    mod = p**e
    A = np.array(A, dtype=np.int64)
    x0 = np.array(data.draw(st.lists(st.integers(0, mod - 1), min_size=A.shape[1], max_size=A.shape[1])))
    b = (A @ x0) % mod
    x = solve_mod(A, b, p, e)
    assert x is not None and not ((A @ x - b) % mod).any()
    K = kernel_mod(A, p, e)
    for g, o in zip(K.generators, K.orders):
        assert not ((A @ g) % mod).any()
    # the kernel has the right size: brute force when small
    if mod ** A.shape[1] <= 5000:
        count = sum(1 for v in itertools.product(range(mod), repeat=A.shape[1]) if not ((A @ np.array(v)) % mod).any())
        assert count == int(np.prod(K.orders)) if K.orders else count == 1
        diff = (x - x0) % mod
        coords = K.coordinates(diff)
        rebuilt = sum((int(c) * g for c, g in zip(coords, K.generators)), np.zeros(A.shape[1], dtype=np.int64)) % mod
        assert (rebuilt == diff).all()


def test_cokernel_mod():
    orders, gens = cokernel_mod(np.array([[3, 0], [0, 9]]), 3, 3)
    assert sorted(orders) == [3, 9]
    assert len(gens) == 2
