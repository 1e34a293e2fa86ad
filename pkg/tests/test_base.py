import random

import pytest
from hypothesis import given, settings, strategies as st

from purebench import generators as gen
from purebench.base import Map, check_guard, hom_guard, remember, set_hom_guard
from purebench.errors import CapabilityError, ValidationError
from purebench.omega_cpo import CPO
from purebench.oracles import brute_fills
from purebench.qmet import QMET, map_from_list, space, two_point, unit_space

seeds = st.integers(min_value=0, max_value=10**6)


def test_remember_evicts_oldest_first():
    cache: dict = {}
    for k in range(5):
        remember(cache, k, k * k, limit=3)
    assert list(cache) == [2, 3, 4]


def test_guard_from_environment(monkeypatch):
    monkeypatch.setenv("PURITY_GUARD", "7")
    assert hom_guard() == 7
    with pytest.raises(CapabilityError, match="above the guard of 7"):
        check_guard(8, "hom")
    set_hom_guard(100)
    try:
        assert hom_guard() == 100
    finally:
        set_hom_guard(None)
    monkeypatch.setenv("PURITY_GUARD", "lots")
    with pytest.raises(ValidationError):
        hom_guard()


def test_table_map_is_undefined_off_its_table():
    m = Map(two_point(1), unit_space(), {0: 0})
    with pytest.raises(ValidationError, match="undefined"):
        m(1)


def test_pullback_of_two_maps():
    X = space("abc", [[1, 2], [1]])
    f = map_from_list(two_point(1), X, ["a", "b"])
    g = map_from_list(unit_space(), X, ["b"])
    P, p1, p2 = QMET.pullback(f, g)
    assert [(p1(z), p2(z)) for z in P.elements()] == [(1, 0)]
    with pytest.raises(ValidationError, match="common codomain"):
        QMET.pullback(f, QMET.identity(two_point(1)))


def test_unknown_system_lists_the_available_ones():
    with pytest.raises(ValidationError, match="available"):
        QMET.system("nope")


@pytest.mark.parametrize("name", ["surjective-isometry", "all-iso", "iso-all"])
def test_trivial_factorizations_recompose(name):
    f = map_from_list(two_point(2), two_point(1), [0, 1])
    system = QMET.system(name)
    e, _, m = system.factorize(f)
    assert QMET.equal(QMET.compose(m, e), f)
    assert system.in_E(e) and system.in_M(m)


@settings(max_examples=40)
@given(seeds)
def test_qmet_factorization_and_fill_match_brute_force(seed):
    rng = random.Random(seed)
    X = gen.random_space(rng, max_points=3)
    Y = gen.random_space(rng, max_points=3, prefix="y")
    f = gen.random_qmet_map(rng, X, Y)
    system = QMET.system("surjective-isometry")
    e, _, m = system.factorize(f)
    assert QMET.equal(QMET.compose(m, e), f)
    assert system.in_E(e) and system.in_M(m)
    # the square m o e = f o 1 has exactly one fill
    d = system.fill(e, m, e, m)
    fills = brute_fills(QMET, e, m, e, m)
    assert d is not None and len(fills) == 1 and QMET.equal(d, fills[0])
    QMET.clear_cache()


@settings(max_examples=40)
@given(seeds)
def test_cpo_fill_is_unique(seed):
    rng = random.Random(seed)
    X = gen.random_poset(rng, max_points=4)
    Y = gen.random_poset(rng, max_points=4, prefix="y")
    f = gen.random_monotone_map(rng, X, Y)
    system = CPO.system("dense-embedding")
    e, _, m = system.factorize(f)
    fills = brute_fills(CPO, e, m, e, m)
    assert len(fills) == 1
    assert CPO.equal(system.fill(e, m, e, m), fills[0])
