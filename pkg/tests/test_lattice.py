import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from norm1lab.cochains import tate_h0_cyclic
from norm1lab.errors import NotNormal, NotSubgroup
from norm1lab.group import HeisenbergGroup, cyclic_group
from norm1lab.lattice import (
    GLattice,
    LatticeMap,
    augmentation_ideal,
    chevalley_dual,
    dual_lattice,
    equivariant_iso_search,
    fixed_basis_vectors,
    fixed_sublattice,
    norm_embedding,
    perm_lattice,
    permutation_lattice_from_action,
    quotient_group,
    restrict,
    trivial_lattice,
)


@pytest.fixture(scope="module")
def heis3():
    return HeisenbergGroup(3)


@pytest.fixture(scope="module")
def lattices_a(heis3):
    P, cs = perm_lattice(heis3, heis3.by_label("H0"))
    J, proj = chevalley_dual(P)
    return P, cs, J, proj


def test_perm_lattice_basis_order(heis3, lattices_a):
    P, cs, _, _ = lattices_a
    assert P.rank == 9
    assert cs.representatives[-1] == (0, 0, 0)
    assert P.labels[0] == "e_{1,1}" and P.labels[-1] == "e_{3,3}"
    # a moves e_{1,1} to e_{1,3}
    img = P.action((1, 0, 0))[:, P.labels.index("e_{1,1}")]
    assert P.labels[int(np.flatnonzero(img)[0])] == "e_{1,3}"
    P1, _ = perm_lattice(heis3, heis3.by_label("1"))
    assert P1.rank == 27


def test_chevalley_dual(lattices_a):
    P, _, J, proj = lattices_a
    assert J.rank == P.rank - 1
    assert proj.is_equivariant()
    N = norm_embedding(trivial_lattice(P.group), P)
    assert N.is_equivariant()
    assert not (proj.matrix @ N.matrix).any()


def test_chevalley_module_is_dual_of_augmentation_ideal(lattices_a):
    _, _, J, _ = lattices_a
    Istar = dual_lattice(augmentation_ideal(lattices_a[0]))
    iso = equivariant_iso_search(Istar, J)
    assert iso is not None and iso.is_equivariant()
    assert round(abs(np.linalg.det(iso.matrix))) == 1


def test_dual_of_dual(lattices_a):
    _, _, J, _ = lattices_a
    DD = dual_lattice(dual_lattice(J))
    for g in J.group.elements:
        assert np.array_equal(DD.action(g), J.action(g))


def test_restrict_and_errors(heis3, lattices_a):
    P, _, _, _ = lattices_a
    K0 = heis3.subgroup_group(heis3.by_label("K0"))
    R = restrict(P, K0)
    assert R.rank == P.rank and len(R.group) == 9
    with pytest.raises(NotSubgroup):
        restrict(P, cyclic_group(3))
    with pytest.raises(NotNormal):
        quotient_group(heis3.group, heis3.by_label("H0").elements)


def test_quotient_group_orders(heis3):
    Q, rep_of = quotient_group(heis3.group, heis3.by_label("Z").elements)
    assert len(Q) == 9 and Q.is_abelian
    assert len(set(rep_of.values())) == 9


def test_fixed_sublattice_counts_orbits(heis3, lattices_a):
    P, _, _, _ = lattices_a
    for label, orbits in [("Z", 3), ("K0", 3), ("G", 1)]:
        S = heis3.by_label(label)
        fx = fixed_sublattice(P, S.elements, S.generators)
        assert fx.lattice.rank == orbits


def test_bad_action_is_rejected():
    C3 = cyclic_group(3)
    with pytest.raises(ValueError):
        GLattice(C3, {1: [[0, 1], [1, 0]]})
    with pytest.raises(ValueError):
        GLattice(C3, {1: [[2]]})
    with pytest.raises(ValueError):
        LatticeMap(trivial_lattice(C3), trivial_lattice(C3), np.eye(2))


def test_fixed_basis_vectors(lattices_a):
    P, _, _, _ = lattices_a
    # a fixes the three cosets c^u H
    assert len(fixed_basis_vectors(P, (1, 0, 0))) == 3
    assert len(fixed_basis_vectors(P, (0, 0, 0))) == 9


@settings(max_examples=100)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 12), st.randoms(use_true_random=False))
def test_tate_h0_of_permutation_lattices(p, n, rnd):
    # random action of C_p on n points: disjoint p-cycles and fixed points
    points = list(range(n))
    rnd.shuffle(points)
    ncycles = rnd.randint(0, n // p)
    perm = list(range(n))
    for k in range(ncycles):
        cyc = points[k * p:(k + 1) * p]
        for i, x in enumerate(cyc):
            perm[x] = cyc[(i + 1) % p]

    def act(g):
        out = list(range(n))
        for k in range(n):
            y = k
            for _ in range(g):
                y = perm[y]
            out[k] = y
        return out

    C = cyclic_group(p)
    M = permutation_lattice_from_action(C, act, n)
    assert tate_h0_cyclic(C, M).factors == oracles.tate_h0_permutation(p, perm)
