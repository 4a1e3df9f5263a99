import pytest
from hypothesis import given, strategies as st

from strategies import covers_of, sublattices
from lattice_entropy.actions import (FolnerBox, GroupAction, act_on_cover, compose,
                                     folner_defect, generate_invariant_sublattice, invert,
                                     orbit_join, perm_power, preimage)
from lattice_entropy.entropy import n_nonzero
from lattice_entropy.lattice import (FiniteDistributiveLattice, GroundSet, LatticeError,
                                     equivalent, generate_sublattice, refines)
from lattice_entropy.measured import (GeneratedLocalization, MeasuredLattice, NonemptyIndicator,
                                      PointMeasure, is_local_sublattice)
from lattice_entropy.shifts import ShiftSystem, periodic_model

G = GroundSet(("a", "b", "c"))
P3 = FiniteDistributiveLattice(G, range(8), check=False)
CYCLE = GroupAction(3, [(1, 2, 0)])  # a -> b -> c -> a


def el(s):
    return G.element(s)


def test_identity_acts_trivially():
    alpha = frozenset({el("a"), el("bc")})
    assert act_on_cover(CYCLE, (0,), alpha) == alpha
    assert act_on_cover(CYCLE, (3,), alpha) == alpha


def test_cyclic_shift_acts_by_preimage():
    # preimage of {a} under a -> b -> c -> a is {c}; of {b, c} it is {a, b}
    assert act_on_cover(CYCLE, (1,), {el("a"), el("bc")}) == {el("c"), el("ab")}
    # the inverse rotation gives the forward image {b}, {c, a}
    assert act_on_cover(CYCLE, (-1,), {el("a"), el("bc")}) == {el("b"), el("ca")}


def test_generators_must_commute():
    with pytest.raises(LatticeError):
        GroupAction(3, [(1, 0, 2), (0, 2, 1)])
    with pytest.raises(LatticeError):
        GroupAction(3, [(0, 0, 1)])


def test_json_round_trip():
    data = {"dimension": 1, "generators": [{"perm": {"a": "b", "b": "c", "c": "a"}}], "boolean": True}
    act = GroupAction.from_json(data, G.points)
    assert act.perms == ((1, 2, 0),) and act.boolean
    assert GroupAction.from_json(act.to_json(G.points), G.points).perms == act.perms


def test_folner_boxes():
    assert len(FolnerBox(3, 2)) == 9
    assert set(FolnerBox(2, 2).members) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    defects = [folner_defect(FolnerBox(n).members, (1,)) for n in range(1, 30)]
    assert all(a > b for a, b in zip(defects, defects[1:]))
    assert defects[-1] < 0.1
    d2 = [folner_defect(FolnerBox(n, 2).members, (1, 1)) for n in range(1, 12)]
    assert all(a > b for a, b in zip(d2, d2[1:]))


def test_orbit_join_of_identity_box():
    alpha = frozenset({el("ab"), el("bc")})
    assert equivalent(orbit_join(CYCLE, alpha, [(0,)]), alpha)
    assert orbit_join(CYCLE, alpha, []) == {G.full}


def test_bernoulli_cylinders_by_counting():
    model = periodic_model(ShiftSystem.bernoulli([0.5, 0.5]), 8)
    for n in range(1, 9):
        cyl = orbit_join(model.action, model.time0, FolnerBox(n))
        assert len(cyl) == 2 ** n
        assert {model.m(c) for c in cyl} == {2.0 ** -n}


def test_invariant_sublattice_examples():
    assert generate_invariant_sublattice(GroupAction.trivial(3), [el("a"), el("b")], P3) == \
        generate_sublattice(P3, [el("a"), el("b")])
    assert generate_invariant_sublattice(CYCLE, [el("a")], P3) == P3
    boolean = generate_invariant_sublattice(GroupAction.trivial(3, boolean=True), [el("ab")], P3)
    assert boolean.element_set() == {0, el("ab"), el("c"), G.full}


def test_invariant_sublattice_is_local_for_matching_rule():
    host = MeasuredLattice(P3, NonemptyIndicator(), GeneratedLocalization(P3, CYCLE.maps()))
    for gens in ([el("a")], [el("ab")], []):
        W = generate_invariant_sublattice(CYCLE, gens, P3)
        assert is_local_sublattice(host, W)


def test_non_invariant_host_is_rejected():
    chain = FiniteDistributiveLattice.from_labels(G, [[], ["a"], ["a", "b", "c"]])
    with pytest.raises(LatticeError):
        generate_invariant_sublattice(CYCLE, [el("a")], chain)


@st.composite
def commuting_actions(draw, n):
    p = tuple(draw(st.permutations(list(range(n)))))
    k = draw(st.integers(0, 5))
    q = perm_power(p, k)
    return GroupAction(n, [p, q])


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(commuting_actions(n), sublattices(n, 3))), st.data())
def test_opposite_action_law(args, data):
    act, _ = args
    n = act.n_points
    e = data.draw(st.integers(0, (1 << n) - 1))
    f = tuple(data.draw(st.integers(-4, 4)) for _ in range(2))
    g = tuple(data.draw(st.integers(-4, 4)) for _ in range(2))
    fg = tuple(a + b for a, b in zip(f, g))
    assert act.act(fg, e) == act.act(g, act.act(f, e))
    assert act.act((0, 0), e) == e


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.permutations(list(range(n))), st.just(n))), st.data())
def test_action_preserves_refinement_and_n(args, data):
    p, n = args
    act = GroupAction(n, [tuple(p)], boolean=True)
    L = FiniteDistributiveLattice(GroundSet.of_size(n), range(1 << n), check=False)
    a = data.draw(covers_of(L))
    b = data.draw(covers_of(L))
    m = PointMeasure([1] * n)
    ga, gb = act_on_cover(act, (1,), a), act_on_cover(act, (1,), b)
    if refines(a, b):
        assert refines(ga, gb)
    assert n_nonzero(ga, m) == n_nonzero(a, m)


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.permutations(list(range(n))), st.just(n))), st.data())
def test_orbit_join_translation(args, data):
    p, n = args
    act = GroupAction(n, [tuple(p)])
    L = FiniteDistributiveLattice(GroundSet.of_size(n), range(1 << n), check=False)
    alpha = data.draw(covers_of(L))
    F = data.draw(st.lists(st.integers(-3, 3), min_size=1, max_size=4).map(lambda xs: [(x,) for x in xs]))
    g = (data.draw(st.integers(-3, 3)),)
    Fg = [(f[0] + g[0],) for f in F]
    aF = orbit_join(act, alpha, F)
    assert equivalent(orbit_join(act, alpha, Fg), act_on_cover(act, g, aF))
    for f in F:
        assert refines(aF, act_on_cover(act, f, alpha))


def test_perm_helpers():
    p = (1, 2, 0)
    assert compose(p, invert(p)) == (0, 1, 2)
    assert perm_power(p, 3) == (0, 1, 2)
    assert perm_power(p, -1) == invert(p)
    assert preimage(p, 0b001) == 0b100
