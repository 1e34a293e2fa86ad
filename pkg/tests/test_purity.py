import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from purebench import generators as gen
from purebench.dgab import DG, shift
from purebench.oracles import brute_pure_qmet
from purebench.props import _curated_inclusion, _protosplit, suspension_instance
from purebench.purity import (
    is_barely_E_pure,
    is_E_injective,
    is_E_pure,
    is_E_pure_family,
    is_E_split,
    is_ordinarily_pure,
    is_orthogonal,
    p_factorization,
    q_factorization,
    search_bare_transfer,
    three_way,
    tolerance_grid,
    weakly_pure,
    weakly_pure_at,
)
from purebench.qmet import QMET, map_from_list, two_point, unit_space

F = Fraction
seeds = st.integers(min_value=0, max_value=10**6)
SI = "surjective-isometry"


def test_identity_is_pure_for_any_test_map():
    f = _curated_inclusion()
    ident = QMET.identity(f.cod)
    assert is_E_pure(QMET, SI, ident, f)
    assert is_barely_E_pure(QMET, SI, ident, f)


def test_curated_inclusion_is_not_pure():
    f = _curated_inclusion()
    v = is_E_pure(QMET, SI, f, f)
    assert not v
    assert v.counterexample["u"] == (0, 2)
    assert not brute_pure_qmet(f, f)[0]
    assert not is_barely_E_pure(QMET, SI, f, f)


def test_trivial_systems():
    f = _curated_inclusion()
    assert is_E_pure(QMET, "all-iso", f, f)
    assert is_barely_E_pure(QMET, "all-iso", f, f)
    # under (iso, all) purity asks r to be invertible, which fails here
    assert not is_E_pure(QMET, "iso-all", f, f)


def test_curated_weak_purity_by_tolerance():
    f = _curated_inclusion()
    # every nonexpanding map from the 3-point line onto its ends is constant
    low = weakly_pure_at(f, f, F(1, 2))
    assert not low and low.counterexample["u"] == (0, 2)
    assert weakly_pure_at(f, f, 1)
    assert not weakly_pure(f, f)


def test_weak_purity_at_zero_is_exact_purity():
    f = _curated_inclusion()
    assert bool(weakly_pure_at(f, f, 0)) == bool(brute_pure_qmet(f, f)[0])


def test_tolerance_grid_for_the_line():
    f = _curated_inclusion()
    assert tolerance_grid([f.dom, f.cod]) == [3, 2, F(3, 2), 1, F(3, 4), F(1, 2), F(1, 4)]


def test_injectivity_and_orthogonality_examples():
    i0 = map_from_list(unit_space(), two_point(2), [0])
    X = two_point(1)
    assert all(is_E_injective(QMET, SI, X, [i0]))
    assert all(is_E_injective(QMET, SI, X, [QMET.identity(X)]))
    squash = map_from_list(two_point(2), two_point(1), [0, 1])
    assert is_orthogonal(QMET, unit_space(), squash)
    assert is_orthogonal(QMET, X, QMET.identity(X))
    assert not is_orthogonal(QMET, two_point(2), squash)


def test_dg_injectivity_fails_after_desuspension():
    B, h = suspension_instance()
    assert not is_E_injective(DG, "regepi-mono", shift(B, -1), [h])[0]


def test_split_examples():
    s = map_from_list(unit_space(), two_point(1), [0])
    assert is_E_split(QMET, None, s)
    assert is_E_split(QMET, None, QMET.identity(two_point(1)))
    assert not is_E_split(QMET, None, _curated_inclusion())
    assert is_E_split(DG, "regepi-mono", _protosplit())


def test_factorization_records_are_consistent():
    f = _curated_inclusion()
    P = p_factorization(QMET, SI, f, f)
    assert QMET.equal(QMET.compose(P.m, P.e), P.pre_L)
    Q = q_factorization(QMET, SI, f, f)
    assert QMET.equal(QMET.compose(Q.p2, Q.p1), Q.p)


def test_family_verdict_names_the_failing_map():
    f = _curated_inclusion()
    v = is_E_pure_family(QMET, SI, f, [QMET.identity(f.dom), f])
    assert not v and v.counterexample["test_map"] == 1


def test_transfer_searcher_reports_only():
    f = _curated_inclusion()
    assert search_bare_transfer(QMET, None, f, f, [f])["examined"] == 0
    rep = search_bare_transfer(QMET, None, QMET.identity(f.cod), f, [f, QMET.identity(f.dom)])
    assert rep["barely_for_g"] and rep["examined"] == 2 and rep["counterexample"] is None


@settings(max_examples=40)
@given(seeds)
def test_pure_matches_brute_force_lifting(seed):
    rng = random.Random(seed)
    f = gen.random_qmet_pair(rng, 3)
    g = gen.random_test_map(rng)
    assert bool(is_E_pure(QMET, SI, f, g)) == brute_pure_qmet(f, g)[0]
    QMET.clear_cache()


@settings(max_examples=40)
@given(seeds)
def test_pure_implies_barely_and_ordinary(seed):
    rng = random.Random(seed)
    f = gen.random_qmet_pair(rng, 3)
    g = gen.random_test_map(rng)
    pure = bool(is_E_pure(QMET, SI, f, g))
    assert pure == bool(is_barely_E_pure(QMET, SI, f, g))
    if pure:
        assert is_ordinarily_pure(QMET, f, g)
    QMET.clear_cache()


@settings(max_examples=25)
@given(seeds)
def test_three_way_agreement(seed):
    rng = random.Random(seed)
    f = gen.random_qmet_pair(rng, 3)
    g = gen.random_test_map(rng)
    assert three_way(f, [g]).agree
    QMET.clear_cache()


@settings(max_examples=40)
@given(seeds, st.sampled_from([F(1, 4), F(1, 2), 1, 2]))
def test_weak_purity_is_monotone(seed, q):
    rng = random.Random(seed)
    f = gen.random_qmet_pair(rng, 3)
    g = gen.random_test_map(rng)
    if weakly_pure_at(f, g, q):
        assert weakly_pure_at(f, g, 2 * q)
    QMET.clear_cache()
