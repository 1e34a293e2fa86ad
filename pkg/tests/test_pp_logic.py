import random

import pytest
from hypothesis import given, settings, strategies as st

from purebench import generators as gen
from purebench.errors import Unsupported, ValidationError
from purebench.omega_cpo import CPO
from purebench.pp_logic import (
    PPFormula,
    equation_formula,
    interpret,
    is_elementary,
    psi_g,
    reduce_conjunction,
    same_interpretation,
)
from purebench.props import _curated_inclusion
from purebench.purity import is_E_pure
from purebench.qmet import QMET, map_from_list, two_point, unit_space

seeds = st.integers(min_value=0, max_value=10**6)


def test_psi_g_is_the_image_of_precomposition():
    f = _curated_inclusion()
    K = f.cod
    i = interpret(QMET, K, psi_g(f, QMET))
    assert i.m.image() == set(QMET.precompose(f, K).image())


def test_identity_equation_names_the_diagonal():
    K = _curated_inclusion().cod
    ident = QMET.identity(K)
    i = interpret(QMET, K, equation_formula(ident, ident))
    homs = QMET.morphism_elements(K, K)
    assert sorted(i.m.image()) == sorted((h, h) for h in homs)


def test_mismatched_sorts_are_rejected():
    f = _curated_inclusion()
    K = f.cod
    with pytest.raises(ValidationError, match="different domains"):
        PPFormula(K, K, [(QMET.identity(K), f)])
    with pytest.raises(ValidationError, match="sort of y"):
        PPFormula(K, K, [(f, QMET.identity(f.dom))])


def test_identity_is_elementary():
    f = _curated_inclusion()
    assert is_elementary(QMET, QMET.identity(f.cod), psi_g(f, QMET))


def test_curated_map_is_not_elementary():
    f = _curated_inclusion()
    v = is_elementary(QMET, f, psi_g(f, QMET))
    assert not v
    assert v.counterexample == {"element": (0, 2), "image_below": (0, 2)}


def test_conjunction_reduction():
    K = _curated_inclusion().cod
    ident = QMET.identity(K)
    swap_free = map_from_list(K, K, [0, 0, 1])
    phi = PPFormula(K, K, [(ident, ident), (swap_free, swap_free)], exists_y=False)
    reduced = reduce_conjunction(QMET, phi)
    assert len(reduced.equations) == 1
    system = QMET.system("surjective-isometry")
    assert same_interpretation(system, interpret(QMET, K, phi), interpret(QMET, K, reduced))


def test_conjunction_reduction_needs_a_proper_system():
    K = two_point(1)
    ident = QMET.identity(K)
    phi = PPFormula(K, K, [(ident, ident)], exists_y=False)
    with pytest.raises(Unsupported):
        reduce_conjunction(QMET, phi, "iso-all")


def test_unit_psi_is_everything():
    g = map_from_list(unit_space(), two_point(1), [0])
    i = interpret(QMET, two_point(1), psi_g(g, QMET))
    assert i.m.image() == set(QMET.morphism_elements(unit_space(), two_point(1)))


@settings(max_examples=40)
@given(seeds)
def test_elementary_iff_pure_in_qmet(seed):
    rng = random.Random(seed)
    f = gen.random_qmet_pair(rng, 3)
    g = gen.random_test_map(rng)
    for system in ("surjective-isometry", "all-iso"):
        assert bool(is_elementary(QMET, f, psi_g(g, QMET), system)) == bool(is_E_pure(QMET, system, f, g))
    QMET.clear_cache()


@settings(max_examples=40)
@given(seeds)
def test_elementary_iff_pure_in_posets(seed):
    rng = random.Random(seed)
    K = gen.random_poset(rng, max_points=3, prefix="k")
    L = gen.random_poset(rng, max_points=4, prefix="l")
    f = gen.random_monotone_map(rng, K, L)
    A = gen.random_poset(rng, max_points=2, prefix="a")
    B = gen.random_poset(rng, max_points=3, prefix="b")
    g = gen.random_monotone_map(rng, A, B)
    phi = psi_g(g, CPO)
    assert bool(is_elementary(CPO, f, phi, "dense-embedding")) == bool(is_E_pure(CPO, "dense-embedding", f, g))
