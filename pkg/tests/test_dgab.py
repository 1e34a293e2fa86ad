import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from purebench import generators as gen
from purebench.dgab import (
    DG,
    Disk,
    FinAb,
    FinComplex,
    chain_map,
    chain_maps_brute,
    complex_from_data,
    cone_complex,
    disk_copower,
    disk_map,
    disk_power,
    factorize_dg,
    identity_map,
    is_E_injective_dg,
    is_E_pure_dg,
    is_E_split_dg,
    is_mono,
    is_ordinarily_injective_dg,
    is_ordinarily_pure_dg,
    is_regular_epi,
    is_split_dg,
    power_purity_check,
    proto_compose,
    shift,
    zero_complex,
)
from purebench.errors import ValidationError
from purebench.props import _protosplit, suspension_instance
from purebench.purity import is_E_pure

seeds = st.integers(min_value=0, max_value=10**6)


def _chain_map_count_brute(X, Y):
    """Count chain maps by trying every integer matrix entry per degree."""
    degs = list(X.degrees())
    per_degree = []
    for n in degs:
        src, tgt = X.group(n), Y.group(n)
        cells = [range(k) for k in tgt.factors for _ in src.factors]
        options = []
        for vals in itertools.product(*cells):
            M = tuple(tuple(vals[r * src.rank:(r + 1) * src.rank]) for r in range(tgt.rank))
            if src.is_hom_matrix(M, tgt):
                options.append(M)
        per_degree.append(options)
    count = 0
    for mats in itertools.product(*per_degree):
        try:
            chain_map(X, Y, dict(zip(degs, mats)))
        except ValidationError:
            continue
        count += 1
    return count


def test_validation_names_the_degree():
    with pytest.raises(ValidationError, match="degree 2 to degree 0"):
        FinComplex({0: [2], 1: [2], 2: [2]}, {1: [[1]], 2: [[1]]})
    with pytest.raises(ValidationError, match="wrong shape"):
        FinComplex({0: [2], 1: [2]}, {1: [[1, 1]]})
    with pytest.raises(ValidationError, match="not a homomorphism"):
        FinComplex({0: [2], 1: [3]}, {1: [[1]]})
    with pytest.raises(ValidationError, match="outside the window"):
        complex_from_data([0, 0], {"3": [2]})


def test_fin_ab_basics():
    G = FinAb([2, 3])
    assert G.order == 6 and G.rank == 2
    assert G.add((1, 2), (1, 2)) == (0, 1)
    assert G.neg((1, 1)) == (1, 2)
    assert len(G.elements()) == 6


def test_cone_and_shift():
    C = cone_complex(2)
    assert C.d(0, (1,)) == (1,)
    S = shift(C, 1)
    assert list(S.degrees()) == [0, 1]
    assert S.group(1).factors == (2,)
    Z3 = cone_complex(3)
    assert shift(Z3, 1).diff(1) == ((2,),)


def test_chain_maps_between_cones():
    C = cone_complex(2)
    assert len(chain_maps_brute(C, C)) == 2 == _chain_map_count_brute(C, C)


def test_chain_maps_out_of_disks_are_elements():
    X = FinComplex({0: [4], 1: [2]}, {1: [[2]]})
    assert len(DG.morphism_elements(Disk(1), X)) == X.group(1).order
    assert len(DG.morphism_elements(Disk(0), X)) == X.group(0).order


def test_hom_complex_sizes():
    H = DG.hom(cone_complex(2), cone_complex(2))
    assert [H.size(n) for n in range(-2, 3)] == [1, 2, 4, 2, 1]


def test_disk_power_and_copower_are_complexes():
    X = FinComplex({0: [4], 1: [2]}, {1: [[2]]})
    for n in (-1, 0, 1):
        assert not disk_power(n, X).differential_violations()
        assert not disk_copower(n, X).differential_violations()


def test_mono_epi_and_factorization():
    C = cone_complex(2)
    zero = chain_map(C, C, {0: [[0]], -1: [[0]]})
    assert not is_mono(zero) and not is_regular_epi(zero)
    ident = identity_map(C)
    assert is_mono(ident) and is_regular_epi(ident)
    e, I, m = factorize_dg(zero)
    assert DG.equal(DG.compose(m, e), zero)


def test_protosplit_is_E_split_but_not_split():
    s = _protosplit()
    assert not is_split_dg(s)
    v = is_E_split_dg(s)
    assert v and v.details["route1"]


def test_suspension_regression():
    B, h = suspension_instance()
    assert is_ordinarily_injective_dg(B, h)
    assert not is_ordinarily_injective_dg(shift(B, -1), h)
    assert not is_E_injective_dg(B, h)


def test_E_pure_not_ordinarily_pure_witness():
    s = _protosplit()
    f = chain_map(s.dom, zero_complex(), {})
    assert is_E_pure_dg(f, s)
    assert not is_ordinarily_pure_dg(f, s)


def test_disk_map_composition():
    C = cone_complex(2)
    y = disk_map(0, C, (1,))
    assert y.is_chain_map() and y.y_low == (1,)
    comp = proto_compose(identity_map(C), y)
    assert comp.payload() == y.payload()


@settings(max_examples=30)
@given(seeds)
def test_chain_map_enumeration_matches_brute_force(seed):
    rng = random.Random(seed)
    X, Y = gen.random_complex(rng, 2, 4), gen.random_complex(rng, 2, 4)
    assert len(chain_maps_brute(X, Y)) == _chain_map_count_brute(X, Y)


@settings(max_examples=30)
@given(seeds)
def test_hom_complex_differential_squares_to_zero(seed):
    rng = random.Random(seed)
    X, Y = gen.random_complex(rng, 2, 4), gen.random_complex(rng, 2, 4)
    assert DG.hom(X, Y).differential_violations() == []
    DG.clear_cache()


@settings(max_examples=30)
@given(seeds)
def test_graded_square_route_matches_generic_purity(seed):
    rng = random.Random(seed)
    K, L = gen.random_complex(rng, 2, 4), gen.random_complex(rng, 2, 4)
    A, B = gen.random_complex(rng, 1, 3), gen.random_complex(rng, 2, 3)
    f = gen.random_chain_map(rng, K, L)
    g = gen.random_chain_map(rng, A, B)
    assert bool(is_E_pure_dg(f, g)) == bool(is_E_pure(DG, "regepi-mono", f, g))
    assert power_purity_check(f, g).agree
    DG.clear_cache()
