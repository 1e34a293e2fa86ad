import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from purebench import generators as gen
from purebench.base import Map, set_hom_guard
from purebench.errors import CapabilityError, ValidationError
from purebench.oracles import ordinary_pushout_distances
from purebench.qmet import (
    QMET,
    check_q_pushout_universal,
    dense_at,
    internal_hom,
    map_from_list,
    nonexpanding_maps,
    open_ball,
    q_commutes,
    q_pushout,
    sim_at,
    space,
    tensor,
    two_point,
    unit_space,
)
from purebench.quantale import INF, LAWVERE, ULTRAMETRIC, chain_quantale

F = Fraction
seeds = st.integers(min_value=0, max_value=10**6)


def _all_maps_brute(X, Y):
    """Nonexpanding maps by filtering every assignment."""
    q = X.quantale
    out = []
    for images in itertools.product(Y.points, repeat=len(X.points)):
        f = dict(zip(X.points, images))
        if all(q.leq(Y.d(f[a], f[b]), X.d(a, b)) for a in X.points for b in X.points):
            out.append(images)
    return sorted(out, key=repr)


def test_validation_names_the_broken_axiom():
    with pytest.raises(ValidationError, match="triangle"):
        space([0, 1, 2], [[1, 5], [1]])
    with pytest.raises(ValidationError, match="distance zero"):
        space([0, 1], [[0]])
    with pytest.raises(ValidationError, match="missing"):
        space([0, 1, 2], {(0, 1): 1})


def test_tensor_distances():
    T = tensor(two_point(1), two_point(2))
    assert T.d((0, 0), (1, 1)) == 3
    U = tensor(two_point(1, ULTRAMETRIC), two_point(2, ULTRAMETRIC))
    assert U.d((0, 0), (1, 1)) == 2
    X = space(["a", "b"], [["3/2"]])
    XI = tensor(X, unit_space())
    assert XI.d(("a", 0), ("b", 0)) == X.d("a", "b")


def test_internal_hom_of_two_point_spaces():
    H = internal_hom(two_point(1), two_point(2))
    assert sorted(H.points) == [(0, 0), (1, 1)]
    assert H.d((0, 0), (1, 1)) == 2


def test_hom_from_unit_is_the_space():
    Y = space("abc", [[1, 2], [1]])
    H = internal_hom(unit_space(), Y)
    assert [p[0] for p in H.points] == list(Y.points)
    assert all(H.d((x,), (y,)) == Y.d(x, y) for x in Y.points for y in Y.points)


def test_guard_aborts_large_homs():
    set_hom_guard(3)
    try:
        with pytest.raises(CapabilityError):
            QMET.hom(space("abcd", [[INF] * 3, [INF] * 2, [INF]]), space("xy", [[INF]]))
    finally:
        set_hom_guard(None)


def test_currying_bijection_on_two_point_spaces():
    X, Y, Z = two_point(1), two_point(2), space("abc", [[1, 2], [1]])
    left = nonexpanding_maps(tensor(X, Y), Z)
    H = internal_hom(Y, Z)
    right = nonexpanding_maps(X, H)
    curried = set()
    TP = tensor(X, Y).points
    for images in left:
        table = dict(zip(TP, images))
        curried.add(tuple(tuple(table[x, y] for y in Y.points) for x in X.points))
    assert curried == set(right)


def test_dense_and_balls():
    i0 = map_from_list(unit_space(), two_point(F(1, 2)), [0])
    assert dense_at(i0, 1)
    assert not dense_at(i0, F(1, 2))
    assert open_ball(two_point(F(1, 2)), 0, 1) == {0, 1}
    assert open_ball(two_point(1), 0, F(1, 2)) == {0}


def test_sim_at():
    two = two_point(F(3, 4))
    c0 = map_from_list(unit_space(), two, [0])
    c1 = map_from_list(unit_space(), two, [1])
    assert sim_at(c0, c1, F(3, 4)) and not sim_at(c0, c1, F(1, 2))
    assert sim_at(c0, c0, 0) and not sim_at(c0, c1, 0)


def test_worked_q_pushout():
    one = unit_space()
    i0 = map_from_list(one, two_point(1), [0])
    po = q_pushout(i0, QMET.identity(one), F(1, 2))
    b0, b1, c = po.fbar(0), po.fbar(1), po.gbar(0)
    assert len(po.D.points) == 3
    assert (po.D.d(b0, c), po.D.d(b1, c), po.D.d(b0, b1)) == (F(1, 2), F(3, 2), F(1))
    assert po.commutes()


def test_q_zero_is_the_ordinary_pushout():
    one = unit_space()
    i0 = map_from_list(one, two_point(1), [0])
    po = q_pushout(i0, QMET.identity(one), 0)
    assert len(po.D.points) == 2
    assert po.fbar(0) == po.gbar(0)


def test_competitor_collapsing_everything_has_constant_mediator():
    one = unit_space()
    i0 = map_from_list(one, two_point(1), [0])
    po = q_pushout(i0, QMET.identity(one), F(1, 2))
    top = map_from_list(two_point(1), one, [0, 0])
    bottom = QMET.identity(one)
    rep = check_q_pushout_universal(po, top, bottom)
    assert rep.unique and rep.competitor_ok
    self_rep = check_q_pushout_universal(po, po.fbar, po.gbar)
    assert self_rep.unique
    assert all(self_rep.mediator(p) == p for p in po.D.points)


def test_non_commuting_competitor_is_reported():
    one = unit_space()
    i0 = map_from_list(one, two_point(1), [0])
    po = q_pushout(i0, QMET.identity(one), F(1, 2))
    E = two_point(2)
    rep = check_q_pushout_universal(po, map_from_list(two_point(1), E, [0, 0]), map_from_list(one, E, [1]))
    assert not rep.competitor_ok and not rep


def test_finite_table_q_pushout_uses_relaxation():
    q = chain_quantale(4)
    B = space(["x", "y"], [["1"]], quantale=q)
    A = space(["a"], [], quantale=q)
    g = map_from_list(A, B, ["x"])
    po = q_pushout(g, QMET.identity(A), "1")
    assert po.commutes()
    assert not po.D.axiom_violations()


@given(seeds)
def test_nonexpanding_enumeration_matches_brute_force(seed):
    rng = random.Random(seed)
    X = gen.random_space(rng, max_points=3)
    Y = gen.random_space(rng, max_points=3, prefix="y")
    assert sorted(nonexpanding_maps(X, Y), key=repr) == _all_maps_brute(X, Y)


@given(seeds)
def test_generated_spaces_are_valid(seed):
    X = gen.random_space(random.Random(seed))
    assert X.axiom_violations() == []


@given(seeds, st.sampled_from([0, F(1, 2), 1, F(3, 2), INF]))
def test_q_pushout_commutes_and_is_a_metric(seed, q):
    rng = random.Random(seed)
    g = gen.random_test_map(rng)
    C = gen.random_space(rng, max_points=3, prefix="c")
    f = gen.random_qmet_map(rng, g.dom, C)
    po = q_pushout(g, f, q)
    assert po.commutes()
    assert po.D.axiom_violations() == []


@given(seeds)
def test_q_zero_matches_pushout_oracle(seed):
    rng = random.Random(seed)
    g = gen.random_test_map(rng)
    C = gen.random_space(rng, max_points=3, prefix="c")
    f = gen.random_qmet_map(rng, g.dom, C)
    po = q_pushout(g, f, 0)
    oracle = ordinary_pushout_distances(g, f)
    legs = {**{("B", b): po.fbar(b) for b in g.cod.points}, **{("C", c): po.gbar(c) for c in C.points}}
    for (u, v), d in oracle.items():
        assert po.D.d(legs[u], legs[v]) == d


@given(seeds)
def test_tensor_unit_law(seed):
    X = gen.random_space(random.Random(seed), max_points=4)
    XI = tensor(X, unit_space())
    assert all(XI.d((a, 0), (b, 0)) == X.d(a, b) for a in X.points for b in X.points)


@given(seeds, st.sampled_from([F(1, 2), 1, 2]), st.sampled_from([F(1, 2), 1, 2, INF]))
def test_sim_is_monotone_in_tolerance(seed, q, extra):
    rng = random.Random(seed)
    X, Y = gen.random_space(rng, max_points=3), gen.random_space(rng, max_points=3, prefix="y")
    maps = nonexpanding_maps(X, Y)
    f = Map(X, Y, dict(zip(X.points, rng.choice(maps))))
    g = Map(X, Y, dict(zip(X.points, rng.choice(maps))))
    if sim_at(f, g, q):
        assert sim_at(f, g, LAWVERE.plus(q, extra))
    assert sim_at(f, g, 0) == (f(X.points[0]) == g(X.points[0]) and all(f(x) == g(x) for x in X.points))


def test_q_commutes_on_identity_square():
    X = space("ab", [[1]])
    idX = QMET.identity(X)
    assert q_commutes(idX, idX, idX, idX, 0)
