import json
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from norm1lab.adjudicator import (
    PlaceScenario,
    adjudicate,
    report_json,
    resolve_place,
    scenario_sweep,
    tate_galois_check,
    case_from_subgroups,
)
from norm1lab.errors import UnknownLabel
from norm1lab.group import HeisenbergGroup, class_labels, multiply, inverse


def run(stab, ramified, p=3, **kw):
    return adjudicate(PlaceScenario(p, stab, ramified, **kw))


@pytest.mark.parametrize(
    "stab, ramified, sha, A, tau, case",
    [
        ("a", ["K0"], (), (3,), 3, "2-I"),
        ("a", [], (3,), (), 1, "2-II"),
        ("1", ["K0", "K3"], (), (3, 3), 9, "1-I"),
        ("1", ["K0"], (3,), (3,), 3, "1-II"),
        ("1", ["Full"], (), (3, 3), 9, "1-I"),
        ("1", [], (3, 3), (), 1, "1-III"),
    ],
)
def test_reference_scenarios(stab, ramified, sha, A, tau, case):
    rep = run(stab, ramified)
    assert rep.sha.factors == sha
    assert rep.A.factors == A
    assert rep.tamagawa == tau
    assert rep.case == case


def test_report_contents():
    rep = run("1", ["K0", "K0", "H1"])
    doc = json.loads(report_json(rep))
    assert doc["ramified"] == ["K0", "K0", "H1"]
    certs = {c["label"]: c for c in doc["certificates"]}
    assert certs["K0"]["multiplicity"] == 2 and certs["K0"]["cuts"]
    assert not certs["H1"]["cuts"]
    assert doc["sha2_omega"]["factors"] == [3, 3]
    assert "Sha^2" in doc["notes"]["sha_structure_from"]
    assert "| K0 |" in rep.to_markdown()


def test_generator_lists_are_reduced_to_classes():
    # each class representative, given by generators, resolves back to its own label
    heis = HeisenbergGroup(3)
    for label in class_labels(3):
        S = heis.by_label(label)
        gens = "/".join(",".join(map(str, g)) for g in S.generators) or "0,0,0"
        assert resolve_place("gens:" + gens, 3) == label
    rep = run("1", ["gens:1,0,0/0,0,1"])
    assert rep.ramified == ["K0"]


@settings(max_examples=40)
@given(st.sampled_from(class_labels(3)), st.tuples(*[st.integers(0, 2)] * 3), st.sampled_from(["1", "a"]))
def test_conjugation_invariance(label, x, stab):
    heis = HeisenbergGroup(3)
    S = heis.by_label(label)
    xi = inverse(x, 3)
    conj = [multiply(multiply(xi, g, 3), x, 3) for g in S.generators]
    text = "gens:" + ("/".join(",".join(map(str, g)) for g in conj) or "0,0,0")
    a = run(stab, [label]).to_json()
    b = run(stab, [text]).to_json()
    assert a == b


def test_unknown_labels():
    with pytest.raises(UnknownLabel):
        PlaceScenario(3, "1", ["K9"])
    with pytest.raises(UnknownLabel):
        PlaceScenario(3, "b", [])


def test_without_cyclic_places():
    rep = run("1", ["K0"], include_all_cyclic=False)
    assert rep.sha.order == 3
    assert rep.A.order == 3
    rep = run("a", [], include_all_cyclic=False)
    # nothing is intersected: all of H^2 survives
    assert rep.sha.order == 9 and rep.A.order == 1


@pytest.mark.parametrize(
    "ramified, holds",
    [(["Full"], True), ([], False), (["K0", "K3"], True), (["K1"], False)],
)
def test_tate_criterion(ramified, holds):
    s = PlaceScenario(3, "1", ramified)
    chk = tate_galois_check(s)
    assert bool(chk) == holds
    assert chk.holds == (adjudicate(s).sha.order == 1)


def test_tate_criterion_needs_trivial_stabilizer():
    with pytest.raises(ValueError):
        tate_galois_check(PlaceScenario(3, "a", []))


def test_tate_criterion_against_oracle():
    # intersect the oracle's Q/Z kernels independently
    table = oracles.qz_table(3)
    rnd = random.Random(7)
    labels = class_labels(3)
    for _ in range(50):
        ram = rnd.sample(labels, rnd.randint(0, 4))
        s = PlaceScenario(3, "1", ram)
        ker = set.intersection(*(set(table[x]) for x in s.subgroups()))
        assert tate_galois_check(s).holds == (ker == {(0, 0)})


@given(st.sets(st.sampled_from(class_labels(3))), st.sampled_from(["1", "a"]))
def test_case_matches_conditions(labels, stab):
    rep = run(stab, sorted(labels))
    assert rep.case == case_from_subgroups(3, stab, labels)
    rank2 = [x for x in labels if x.startswith("K")]
    if stab == "1":
        assert (rep.sha.order == 1) == ("G" in labels or len(rank2) >= 2)
        assert (rep.sha.order == 9) == ("G" not in labels and not rank2)
    else:
        assert (rep.sha.order == 1) == ("G" in labels or bool(rank2))


@pytest.mark.parametrize("stab, counts", [
    ("1", {"1-I": 1728, "1-II": 256, "1-III": 64}),
    ("a", {"2-I": 1984, "2-II": 64}),
])
def test_sweep_p3(stab, counts):
    res = scenario_sweep(3, stab)
    assert res.passed, res.failures[:5]
    assert len(res.rows) == 2 ** 11
    assert res.counts() == counts
    empty = next(r for r in res.rows if r[0] == ())
    assert empty[1] == (9 if stab == "1" else 3)
    # only-cyclic subsets leave the full Sha^2_omega
    for ram, sha, _, _, _ in res.rows:
        if all(x in ("1", "Z") or x.startswith("H") for x in ram):
            assert sha == (9 if stab == "1" else 3)


@pytest.mark.slow
def test_sweep_p5_trivial_stabilizer():
    res = scenario_sweep(5, "1")
    assert res.passed, res.failures[:5]
    assert len(res.rows) == 2 ** 15
