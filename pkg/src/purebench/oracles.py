"""Independent brute-force oracles used to cross-check the main routines.

None of these share code paths with the routines they check: quantale laws
are re-derived from the raw order relation, well-above from its subset
definition, pushouts by merging first and measuring afterwards, and liftings
by enumerating every morphism.
"""
from __future__ import annotations

import heapq
import itertools
from typing import Mapping

from .base import Map
from .qmet import nonexpanding_maps
from .quantale import INF

__all__ = [
    "table_laws_hold",
    "well_above_by_subsets",
    "well_above_interval_grid",
    "ordinary_pushout_distances",
    "brute_fills",
    "brute_pure_qmet",
    "brute_lifting_exists",
]


# -- quantales -------------------------------------------------------------------


def _raw_order(record: Mapping):
    els = list(record["elements"])
    rel = {(a, a) for a in els} | {tuple(p) for p in record.get("leq", [])}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return els, rel


def _glb(els, rel, S):
    lower = [x for x in els if all((x, s) in rel for s in S)]
    best = [x for x in lower if all((y, x) in rel for y in lower)]
    return best[0] if len(best) == 1 else None


def well_above_by_subsets(els, rel, a, b) -> bool:
    """``a >> b`` iff every ``S`` with ``meet S <= b`` has a member ``<= a``."""
    for r in range(len(els) + 1):
        for S in itertools.combinations(els, r):
            m = _glb(els, rel, S)
            if (m, b) in rel and not any((s, a) in rel for s in S):
                return False
    return True


def well_above_interval_grid(q, grid, a, b) -> bool:
    """``a >> b`` on an interval quantale, by enumerating test sets.

    The test sets are every finite subset of ``grid`` together with the open
    tails ``(c, inf]`` for ``c`` in the grid; a tail has meet ``c`` and holds
    values arbitrarily close to ``c``, so it contains some ``s <= a`` exactly
    when ``c < a``.
    """
    for r in range(len(grid) + 1):
        for S in itertools.combinations(grid, r):
            m = q.meet(S)
            if q.leq(m, b) and not any(q.leq(s, a) for s in S):
                return False
    for c in grid:
        if q.leq(c, b) and not q.lt(c, a):
            return False
    return True


def table_laws_hold(record: Mapping) -> bool:
    """Decide the value-quantale laws for a raw table record by enumeration."""
    els, rel = _raw_order(record)
    plus = record["plus"]
    zero = record["zero"]
    if any((a, b) in rel and (b, a) in rel and a != b for a in els for b in els):
        return False
    try:
        p = {(a, b): plus[a][b] for a in els for b in els}
    except (KeyError, TypeError):
        return False
    if any(v not in els for v in p.values()):
        return False
    subsets = [S for r in range(len(els) + 1) for S in itertools.combinations(els, r)]
    meets = {}
    for S in subsets:
        m = _glb(els, rel, S)
        if m is None:
            return False
        meets[S] = m
    if any((zero, x) not in rel for x in els):
        return False
    for a, b in itertools.product(els, els):
        if p[a, b] != p[b, a]:
            return False
    if any(p[a, zero] != a for a in els):
        return False
    for a, b, c in itertools.product(els, els, els):
        if p[p[a, b], c] != p[a, p[b, c]]:
            return False
    for x in els:
        for S in subsets:
            lhs = p[x, meets[S]]
            rhs = _glb(els, rel, [p[x, s] for s in S])
            if lhs != rhs:
                return False
    wa = {(a, b): well_above_by_subsets(els, rel, a, b) for a in els for b in els}
    for a in els:
        ups = tuple(x for x in els if wa[x, a])
        if _glb(els, rel, ups) != a:
            return False
    for a, b in itertools.product(els, els):
        if wa[a, zero] and wa[b, zero] and not wa[meets[tuple(x for x in els if x in (a, b))], zero]:
            return False
    return True


# -- pushouts --------------------------------------------------------------------


def ordinary_pushout_distances(g: Map, f: Map) -> dict:
    """Distances between the images of ``B + C`` in the pushout of ``g`` and ``f``.

    Points are merged first (``g(a) ~ f(a)``); distances are then shortest
    paths with Dijkstra over the merged classes.
    """
    B, C = g.cod, f.cod
    q = B.quantale
    verts = [("B", b) for b in B.points] + [("C", c) for c in C.points]
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in g.dom.points:
        x, y = find(("B", g(a))), find(("C", f(a)))
        if x != y:
            parent[x] = y
    classes = sorted({find(v) for v in verts}, key=repr)
    edges: dict = {c: {} for c in classes}

    def add(u, v, w):
        cu, cv = find(u), find(v)
        if cu == cv:
            return
        if cv not in edges[cu] or q.lt(w, edges[cu][cv]):
            edges[cu][cv] = w
            edges[cv][cu] = w

    for x, y in itertools.combinations(B.points, 2):
        add(("B", x), ("B", y), B.d(x, y))
    for x, y in itertools.combinations(C.points, 2):
        add(("C", x), ("C", y), C.d(x, y))

    def dijkstra(src):
        best = {src: q.zero}
        order = {c: i for i, c in enumerate(classes)}
        heap = [(_key(q.zero), order[src], src)]
        done = set()
        while heap:
            _, _, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v, w in edges[u].items():
                nd = q.plus(best[u], w)
                if v not in best or q.lt(nd, best[v]):
                    best[v] = nd
                    heapq.heappush(heap, (_key(nd), order[v], v))
        return best

    table = {c: dijkstra(c) for c in classes}
    out = {}
    for u, v in itertools.product(verts, verts):
        out[u, v] = table[find(u)].get(find(v), q.top)
    return out


def _key(x):
    return (1, 0) if x is INF else (0, x)


# -- fills and liftings ---------------------------------------------------------------


def brute_fills(base, e: Map, m: Map, u: Map, v: Map) -> list[Map]:
    """Every morphism ``d`` with ``d e = u`` and ``m d = v``."""
    return [
        d for d in base.morphisms(e.cod, u.cod)
        if base.equal(base.compose(d, e), u) and base.equal(base.compose(m, d), v)
    ]


def _maps(X, Y):
    return [Map(X, Y, dict(zip(X.points, t))) for t in nonexpanding_maps(X, Y)]


def brute_lifting_exists(f: Map, g: Map, u: Map) -> bool:
    """Is there a nonexpanding ``t`` with ``t g == u``?"""
    return any(all(t(g(a)) == u(a) for a in g.dom.points) for t in _maps(g.cod, f.dom))


def brute_pure_qmet(f: Map, g: Map) -> tuple[bool, tuple | None]:
    """Exact lifting against every strictly commuting square of metric maps."""
    vg = {tuple(v(g(a)) for a in g.dom.points) for v in _maps(g.cod, f.cod)}
    tg = {tuple(t(g(a)) for a in g.dom.points) for t in _maps(g.cod, f.dom)}
    for u in _maps(g.dom, f.dom):
        image = tuple(u(a) for a in g.dom.points)
        if tuple(f(x) for x in image) in vg and image not in tg:
            return False, image
    return True, None
