"""Seeded random instances for the property suites.

Every generator takes a :class:`random.Random` so a suite is reproducible
from its seed.  Sizes stay inside the bounds the suites are tuned for:
metric spaces up to five points, posets up to six points, complexes spanning
at most four degrees with groups of order at most eight.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from .base import Map
from .dgab import FinAb, FinComplex, chain_maps_brute, hom_entry_choices, mat_mul
from .omega_cpo import FinPoset, monotone_maps
from .qmet import QMetSpace, nonexpanding_maps
from .quantale import INF, LAWVERE, ValueQuantale

__all__ = [
    "DISTANCE_CHOICES",
    "random_space",
    "random_subspace_map",
    "random_qmet_map",
    "random_qmet_pair",
    "random_test_map",
    "random_poset",
    "random_monotone_map",
    "random_complex",
    "random_chain_map",
    "random_quantale_table",
]

DISTANCE_CHOICES = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3), INF)


# -- metric spaces -------------------------------------------------------------


def _close(q: ValueQuantale, n: int, dist: list[list]) -> None:
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = q.plus(dist[i][k], dist[k][j])
                if q.lt(via, dist[i][j]):
                    dist[i][j] = via


def random_space(rng: random.Random, n: int | None = None, quantale: ValueQuantale = LAWVERE,
                 max_points: int = 5, prefix: str = "p") -> QMetSpace:
    """A random space: random edge weights closed under shortest paths."""
    if n is None:
        n = rng.randint(1, max_points)
    if quantale.is_finite():
        choices = [x for x in quantale.elements if x != quantale.zero]
    else:
        choices = list(DISTANCE_CHOICES)
    dist = [[quantale.zero if i == j else None for j in range(n)] for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        dist[i][j] = dist[j][i] = rng.choice(choices)
    _close(quantale, n, dist)
    pts = [f"{prefix}{i}" for i in range(n)]
    table = {(pts[i], pts[j]): dist[i][j] for i, j in itertools.combinations(range(n), 2)}
    return QMetSpace(quantale, pts, table)


def random_subspace_map(rng: random.Random, L: QMetSpace, k: int | None = None,
                        stretch: float = 0.5, prefix: str = "k") -> Map:
    """An injective nonexpanding map into ``L``; distances may grow in the domain."""
    if k is None:
        k = rng.randint(1, len(L.points))
    chosen = rng.sample(list(L.points), k)
    q = L.quantale
    dist = [[L.d(a, b) for b in chosen] for a in chosen]
    bigger = [x for x in (DISTANCE_CHOICES if not q.is_finite() else q.elements)]
    for i, j in itertools.combinations(range(k), 2):
        if rng.random() < stretch:
            ups = [x for x in bigger if q.leq(dist[i][j], x)]
            dist[i][j] = dist[j][i] = rng.choice(ups)
    _close(q, k, dist)
    pts = [f"{prefix}{i}" for i in range(k)]
    K = QMetSpace(q, pts, {(pts[i], pts[j]): dist[i][j] for i, j in itertools.combinations(range(k), 2)})
    return Map(K, L, dict(zip(pts, chosen)))


def random_qmet_map(rng: random.Random, X: QMetSpace, Y: QMetSpace) -> Map:
    """A uniformly chosen nonexpanding map ``X -> Y``."""
    maps = nonexpanding_maps(X, Y)
    if not maps:
        raise ValueError("no nonexpanding maps")
    return Map(X, Y, dict(zip(X.points, rng.choice(maps))))


def random_qmet_pair(rng: random.Random, max_points: int = 4) -> Map:
    """A map ``f: K -> L``: half the time an embedding-like map, else arbitrary."""
    L = random_space(rng, max_points=max_points, prefix="l")
    if rng.random() < 0.5:
        return random_subspace_map(rng, L)
    K = random_space(rng, max_points=max_points, prefix="k")
    return random_qmet_map(rng, K, L)


def random_test_map(rng: random.Random, max_a: int = 2, max_b: int = 3,
                    quantale: ValueQuantale = LAWVERE) -> Map:
    """A small test map ``g: A -> B``, often an embedding of ``A`` into ``B``."""
    B = random_space(rng, max_points=max_b, quantale=quantale, prefix="b")
    if rng.random() < 0.6:
        return random_subspace_map(rng, B, k=rng.randint(1, min(max_a, len(B.points))), prefix="a")
    A = random_space(rng, max_points=max_a, quantale=quantale, prefix="a")
    return random_qmet_map(rng, A, B)


# -- posets ----------------------------------------------------------------------


def random_poset(rng: random.Random, n: int | None = None, max_points: int = 6,
                 density: float = 0.35, prefix: str = "x") -> FinPoset:
    if n is None:
        n = rng.randint(1, max_points)
    pts = [f"{prefix}{i}" for i in range(n)]
    covers = [(pts[i], pts[j]) for i, j in itertools.combinations(range(n), 2) if rng.random() < density]
    return FinPoset(pts, covers)


def random_monotone_map(rng: random.Random, X: FinPoset, Y: FinPoset) -> Map:
    maps = monotone_maps(X, Y)
    return Map(X, Y, dict(zip(X.points, rng.choice(maps))))


# -- complexes ---------------------------------------------------------------------

_GROUPS = ((), (2,), (3,), (4,), (2, 2), (2, 4), (8,))


def _random_hom_matrix(rng, src: FinAb, tgt: FinAb) -> tuple:
    return tuple(
        tuple(rng.choice(list(hom_entry_choices(a, b))) for a in src.factors) for b in tgt.factors
    )


def random_complex(rng: random.Random, max_degrees: int = 3, max_order: int = 4,
                   lo: int | None = None, tries: int = 40) -> FinComplex:
    """A complex over at most ``max_degrees`` consecutive degrees with small groups."""
    span = rng.randint(1, max_degrees)
    if lo is None:
        lo = rng.randint(-1, 1)
    pool = [g for g in _GROUPS if _order(g) <= max_order]
    groups = {n: FinAb(rng.choice(pool)) for n in range(lo, lo + span)}
    diffs = {}
    for n in range(lo + 1, lo + span):
        below = diffs.get(n - 1)
        for _ in range(tries):
            M = _random_hom_matrix(rng, groups[n], groups[n - 1])
            if below is None:
                break
            DD = mat_mul(below, M, groups[n - 2].factors if n - 2 in groups else (), groups[n].rank)
            if not any(any(v for v in row) for row in DD):
                break
        else:
            M = tuple(tuple(0 for _ in groups[n].factors) for _ in groups[n - 1].factors)
        diffs[n] = M
    return FinComplex(groups, diffs, window=(lo, lo + span - 1))


def _order(factors: Sequence[int]) -> int:
    out = 1
    for k in factors:
        out *= k
    return out


def random_chain_map(rng: random.Random, X: FinComplex, Y: FinComplex) -> Map:
    maps = chain_maps_brute(X, Y)
    return rng.choice(maps)


# -- quantale tables ------------------------------------------------------------------


def random_quantale_table(rng: random.Random, max_size: int = 8) -> dict:
    """A random finite-table record; roughly half satisfy the laws.

    Valid candidates come from chains with truncated addition or ``max`` and
    from small products of chains; the rest are perturbed copies.
    """
    kind = rng.random()
    if kind < 0.5:
        n = rng.randint(1, max_size)
        names = [str(i) for i in range(n)]
        op = rng.choice(["add", "max"])
        table = {
            a: {b: names[min(i + j, n - 1)] if op == "add" else names[max(i, j)] for j, b in enumerate(names)}
            for i, a in enumerate(names)
        }
        leq = list(zip(names, names[1:]))
    else:
        m = rng.randint(1, 2)
        k = rng.randint(1, max(1, max_size // 2 if m == 2 else max_size))
        if m * k > max_size:
            k = max_size // m
        names = [f"{i}{j}" for i in range(m) for j in range(k)]
        leq = [(f"{i}{j}", f"{i2}{j2}") for i, j in itertools.product(range(m), range(k))
               for i2, j2 in itertools.product(range(m), range(k))
               if (i, j) != (i2, j2) and i <= i2 and j <= j2]
        table = {
            f"{i}{j}": {f"{i2}{j2}": f"{max(i, i2)}{min(j + j2, k - 1)}"
                        for i2, j2 in itertools.product(range(m), range(k))}
            for i, j in itertools.product(range(m), range(k))
        }
    zero = names[0]
    if rng.random() < 0.5 and len(names) > 1:
        a, b = rng.choice(names), rng.choice(names)
        table[a] = dict(table[a])
        table[a][b] = rng.choice(names)
        if rng.random() < 0.5:
            table[b] = dict(table[b])
            table[b][a] = table[a][b]
    if rng.random() < 0.15 and len(names) > 1:
        zero = rng.choice(names[1:])
    return {"kind": "finite-table", "elements": names, "leq": [list(p) for p in leq],
            "plus": table, "zero": zero}
