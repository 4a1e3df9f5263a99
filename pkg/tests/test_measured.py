from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from strategies import sublattices
from lattice_entropy.functors import FactorMap, FiniteProbSystem, apply_functor_to_morphism
from lattice_entropy.actions import GroupAction
from lattice_entropy.lattice import FiniteDistributiveLattice, GroundSet, LatticeError
from lattice_entropy.measured import (AmbientLocalization, GeneratedLocalization,
                                      LatticeMorphism, MeasuredLattice, NonemptyIndicator,
                                      PointMeasure, TabulatedLocalization, TabulatedMeasurement,
                                      antichain_covers, check_measurement_axioms, check_morphism,
                                      enumerate_covers, is_local_sublattice, measured_from_json,
                                      measured_to_json)

G = GroundSet(("a", "b", "c"))
P3 = FiniteDistributiveLattice(G, range(8), check=False)
third = Fraction(1, 3)


def el(s):
    return G.element(s)


def test_uniform_probability_satisfies_axioms():
    assert check_measurement_axioms(P3, PointMeasure([third] * 3)) == []
    assert check_measurement_axioms(P3, NonemptyIndicator()) == []


def test_zero_top_violates_axiom_a():
    vs = check_measurement_axioms(P3, PointMeasure([0, 0, 0]))
    assert any(v.axiom == "axiom (a)" for v in vs)


def test_crafted_measurement_violates_axiom_b():
    L = FiniteDistributiveLattice.from_labels(G, [[], ["a"], ["b"], ["a", "b"], ["a", "b", "c"]])
    m = TabulatedMeasurement({0: 0, el("a"): 0, el("b"): 0.5, el("ab"): 0.7, G.full: 1})
    vs = check_measurement_axioms(L, m)
    assert [v.axiom for v in vs] == ["axiom (b)"]
    assert el("a") in vs[0].elements and el("b") in vs[0].elements


def test_enumerate_covers_on_two_points():
    g = GroundSet(("a", "b"))
    L = FiniteDistributiveLattice(g, range(4), check=False)
    assert list(enumerate_covers(L, 1)) == [frozenset({3})]
    two = list(enumerate_covers(L, 2))
    # bottom is never a member; {ab}, {a,b}, {a,ab}, {b,ab}
    assert set(two) == {frozenset({3}), frozenset({1, 2}), frozenset({1, 3}), frozenset({2, 3})}
    assert len(two) == len(set(two))
    assert len(list(enumerate_covers(L, 10))) == 5  # plus {a, b, ab}
    with pytest.raises(ValueError):
        list(enumerate_covers(L, 0))


def test_enumeration_is_deterministic():
    assert list(enumerate_covers(P3, 3)) == list(enumerate_covers(P3, 3))


def test_antichain_covers_count_on_b4():
    L = FiniteDistributiveLattice(GroundSet.of_size(4), range(16), check=False)
    assert len(antichain_covers(L)) == 114


def test_is_local_sublattice_examples():
    host = MeasuredLattice(P3, PointMeasure([third] * 3), GeneratedLocalization(P3, complement=True))
    assert is_local_sublattice(host, P3)
    W = FiniteDistributiveLattice(G, [0, el("ab"), el("b"), el("bc"), G.full], check=False)
    assert not is_local_sublattice(host, W)
    assert is_local_sublattice(host, FiniteDistributiveLattice.trivial(G))


def test_generated_localization_contains_alpha():
    om = GeneratedLocalization(P3)
    for alpha in enumerate_covers(P3, 3):
        assert alpha <= om(alpha).element_set()


def test_identity_morphism_has_no_violations():
    V = MeasuredLattice(P3, PointMeasure([third] * 3), GeneratedLocalization(P3, complement=True))
    assert check_morphism(LatticeMorphism.identity(V)) == []


def test_two_block_factor_of_uniform_four_points():
    g4 = GroundSet(("a", "b", "c", "d"))
    src = FiniteProbSystem(FiniteDistributiveLattice(g4, range(16), check=False),
                           (Fraction(1, 4),) * 4, GroupAction.trivial(4, boolean=True))
    g2 = GroundSet(("x", "y"))
    tgt = FiniteProbSystem(FiniteDistributiveLattice(g2, range(4), check=False),
                           (Fraction(1, 2),) * 2, GroupAction.trivial(2, boolean=True))
    phi = apply_functor_to_morphism("psp", FactorMap(src, tgt, (0, 0, 1, 1)))
    assert check_morphism(phi) == []
    assert phi.embedding == {0: 0, 1: 0b0011, 2: 0b1100, 3: 0b1111}


def test_scaled_measurement_is_reported():
    V = MeasuredLattice(P3, PointMeasure([third] * 3))
    W = MeasuredLattice(P3, PointMeasure([2 * third] * 3))
    vs = check_morphism(LatticeMorphism(V, W, {e: e for e in P3.elements}))
    assert vs and all(v.axiom == "measurement" for v in vs)


def test_broken_embeddings_are_reported():
    V = MeasuredLattice(P3, NonemptyIndicator())
    emb = {e: e for e in P3.elements}
    emb[el("a")] = el("b")
    assert any(v.axiom == "injectivity" for v in check_morphism(LatticeMorphism(V, V, emb)))
    partial = {0: 0, G.full: G.full}
    assert check_morphism(LatticeMorphism(V, V, partial))[0].axiom == "totality"


def test_localization_violation_is_reported():
    V = MeasuredLattice(P3, NonemptyIndicator(), GeneratedLocalization(P3))
    W = MeasuredLattice(P3, NonemptyIndicator(), AmbientLocalization(P3))
    vs = check_morphism(LatticeMorphism(V, W, {e: e for e in P3.elements}))
    assert any(v.axiom == "localization" for v in vs)


def test_tabulated_localization_falls_back_to_host():
    alpha = frozenset({G.full})
    om = TabulatedLocalization(P3, {alpha: FiniteDistributiveLattice.trivial(G)})
    assert om(alpha) == FiniteDistributiveLattice.trivial(G)
    assert om(frozenset({el("a"), el("bc")})) == P3


def test_measured_json_round_trip():
    V = MeasuredLattice(P3, PointMeasure([0.25, 0.5, 0.25]), GeneratedLocalization(P3, complement=True))
    back = measured_from_json(measured_to_json(V))
    assert all(back.m(e) == V.m(e) for e in P3.elements)
    assert back.omega.name == "generated-subalgebra"
    with pytest.raises(LatticeError):
        measured_from_json({"lattice": P3.to_json(), "m": {"[z]": 1}})


def test_tabulated_omega_from_json():
    data = {"lattice": P3.to_json(), "m": {"[a,b,c]": 1},
            "omega": {"[a,b,c]": [[], ["a", "b", "c"]]}}
    V = measured_from_json(data)
    assert len(V.omega(frozenset({G.full}))) == 2


@given(st.integers(1, 4).flatmap(lambda n: sublattices(n, complement=True)),
       st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_point_measures_are_additive_on_disjoint_joins(L, w):
    n = L.ground.size
    weights = [Fraction(x) for x in w[:n]]
    if not any(weights):
        weights[0] = Fraction(1)
    m = PointMeasure(weights)
    assert check_measurement_axioms(L, m) == []
    for a in L.elements:
        for b in L.elements:
            if a & b == 0:
                assert m(a | b) == m(a) + m(b)


@given(st.integers(1, 4).flatmap(lambda n: sublattices(n)))
def test_composition_of_identities_is_valid(L):
    V = MeasuredLattice(L, NonemptyIndicator(), GeneratedLocalization(L))
    ident = LatticeMorphism.identity(V)
    assert check_morphism(ident.then(ident)) == []
