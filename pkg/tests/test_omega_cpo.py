import itertools
import random

import pytest
from hypothesis import given, strategies as st

from purebench import generators as gen
from purebench.base import Map
from purebench.errors import ValidationError
from purebench.omega_cpo import (
    CPO,
    FLAVORS,
    FinPoset,
    antichain,
    chain_poset,
    check_omega_pushout_cocone,
    is_dense_cpo,
    is_embedding,
    monotone_maps,
    poset,
    pure_wrt_cpo,
)
from purebench.purity import is_E_pure

seeds = st.integers(min_value=0, max_value=10**6)


def _monotone_brute(X, Y):
    out = []
    for images in itertools.product(Y.points, repeat=len(X.points)):
        m = dict(zip(X.points, images))
        if all(Y.leq(m[a], m[b]) for a in X.points for b in X.points if X.leq(a, b)):
            out.append(images)
    return sorted(out, key=repr)


def _map(X, Y, images):
    return Map(X, Y, dict(zip(X.points, images)))


def test_poset_validation():
    with pytest.raises(ValidationError, match="antisymmetric"):
        FinPoset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(ValidationError, match="unknown point"):
        FinPoset(["a"], [("a", "z")])
    P = poset("abc", [("a", "b"), ("b", "c")])
    assert P.leq("a", "c")
    assert P.covers() == [("a", "b"), ("b", "c")]
    assert P.height() == 3


def test_monotone_maps_between_3_chains():
    # a 3-chain has C(5, 3) = 10 monotone endomaps
    assert len(monotone_maps(chain_poset(3), chain_poset(3))) == 10


def test_dense_and_embedding_examples():
    c1, c2, c3 = chain_poset(1), chain_poset(2), chain_poset(3)
    assert is_dense_cpo(CPO.identity(c2))
    assert not is_dense_cpo(_map(c1, c2, [c2.points[0]]))
    assert is_dense_cpo(_map(c3, c2, [c2.points[0], c2.points[1], c2.points[1]]))
    two = antichain(2)
    assert not is_embedding(_map(two, c2, list(c2.points)))
    assert is_embedding(_map(c1, c2, [c2.points[1]]))


def test_chain_embeddings_with_retractions_are_pure():
    c2, c3 = chain_poset(2), chain_poset(3)
    f = _map(c2, c3, [0, 2])
    for flavor in FLAVORS:
        assert pure_wrt_cpo(f, f, flavor)


def test_empty_chain_into_a_point_is_not_pure():
    # nonempty finite chain embeddings always retract, so the empty chain is the witness
    f = _map(chain_poset(0), chain_poset(1), [])
    for flavor in FLAVORS:
        v = pure_wrt_cpo(f, f, flavor)
        assert not v
        assert v.counterexample["u"] == [] and v.counterexample["premise_chain"] == [[]]


def test_identity_is_pure_in_every_flavor():
    P = poset("abc", [("a", "c"), ("b", "c")])
    g = _map(chain_poset(1), P, ["a"])
    for flavor in FLAVORS:
        assert pure_wrt_cpo(CPO.identity(P), g, flavor)


def test_unknown_flavor():
    P = chain_poset(2)
    with pytest.raises(ValidationError):
        pure_wrt_cpo(CPO.identity(P), CPO.identity(P), "sideways")


def test_pushout_cocone_and_chain_violation():
    A = chain_poset(1)
    B = chain_poset(2)
    g = _map(A, B, [B.points[0]])
    f = CPO.identity(A)
    D, gbar, fbar = CPO.pushout(g, f)
    rep = check_omega_pushout_cocone(g, f, (D, gbar, [fbar]))
    assert rep.ok
    E = chain_poset(3)
    comp = (E, _map(A, E, [E.points[1]]), [_map(B, E, [E.points[1], E.points[2]])])
    rep = check_omega_pushout_cocone(g, f, (D, gbar, [fbar]), [comp])
    assert rep.ok and rep.competitors[0]["unique"]
    # a sequence whose composites go down instead of up
    hi = _map(B, D, [fbar(B.points[1]), fbar(B.points[1])])
    bad = check_omega_pushout_cocone(g, f, (D, gbar, [hi, fbar]))
    assert not bad.ok and bad.offending_pair == (0, 1)


@given(seeds)
def test_monotone_enumeration_matches_brute_force(seed):
    rng = random.Random(seed)
    X = gen.random_poset(rng, max_points=4)
    Y = gen.random_poset(rng, max_points=4, prefix="y")
    assert sorted(monotone_maps(X, Y), key=repr) == _monotone_brute(X, Y)


@given(seeds)
def test_flavors_agree_with_factorization_route(seed):
    rng = random.Random(seed)
    L = gen.random_poset(rng, max_points=4, prefix="l")
    K = gen.random_poset(rng, max_points=3, prefix="k")
    f = gen.random_monotone_map(rng, K, L)
    A = gen.random_poset(rng, max_points=2, prefix="a")
    B = gen.random_poset(rng, max_points=3, prefix="b")
    g = gen.random_monotone_map(rng, A, B)
    verdicts = {bool(pure_wrt_cpo(f, g, fl)) for fl in FLAVORS}
    assert len(verdicts) == 1
    assert verdicts.pop() == bool(is_E_pure(CPO, "dense-embedding", f, g))


@given(seeds)
def test_dense_embedding_factorization(seed):
    rng = random.Random(seed)
    X = gen.random_poset(rng, max_points=4)
    Y = gen.random_poset(rng, max_points=4, prefix="y")
    f = gen.random_monotone_map(rng, X, Y)
    system = CPO.system("dense-embedding")
    e, I, m = system.factorize(f)
    assert CPO.equal(CPO.compose(m, e), f)
    assert is_dense_cpo(e) and is_embedding(m)
