"""Finite quantale-valued metric spaces.

A :class:`QMetSpace` holds a quantale, a tuple of hashable point names and a
distance function.  Spaces loaded from data are validated eagerly; spaces
built by constructions (hom-spaces, subspaces, pair spaces) compute their
distances lazily and are correct by construction.

Morphisms are nonexpanding maps, represented by :class:`~purebench.base.Map`.
An element of the hom-space ``[X, Y]`` is the tuple of images of
``X.points`` in order.
"""
from __future__ import annotations

import itertools
from typing import Callable, Hashable, Mapping, Sequence

from .base import EnrichedBase, FactorizationSystem, Map, check_guard, remember
from .errors import CapabilityError, ValidationError
from .quantale import LAWVERE, ValueQuantale

__all__ = [
    "QMetSpace",
    "QMetBase",
    "QPushout",
    "UniversalReport",
    "QMET",
    "space",
    "unit_space",
    "two_point",
    "empty_space",
    "tensor",
    "internal_hom",
    "nonexpanding_maps",
    "hom_distance",
    "dense_at",
    "open_ball",
    "sim_at",
    "q_pushout",
    "q_commutes",
    "check_q_pushout_universal",
    "map_from_list",
]


def _point_key(p):
    return (type(p).__name__, repr(p))


class QMetSpace:
    def __init__(
        self,
        quantale: ValueQuantale,
        points: Sequence[Hashable],
        distance: Callable | Mapping,
        name: str | None = None,
        validate: bool = True,
    ):
        self.quantale = quantale
        self.points = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise ValidationError("duplicate point names")
        self.name = name
        self._index = {p: i for i, p in enumerate(self.points)}
        if callable(distance):
            self._fn = distance
            self._table: dict = {}
        else:
            self._fn = None
            self._table = {}
            for (x, y), v in distance.items():
                v = quantale.check(v)
                self._table[x, y] = v
                self._table[y, x] = v
            for x in self.points:
                self._table.setdefault((x, x), quantale.zero)
        if validate:
            self.validate()

    def __repr__(self):
        label = self.name or f"{len(self.points)}pt"
        return f"<QMetSpace {label}>"

    def __len__(self):
        return len(self.points)

    def elements(self):
        return self.points

    def index(self, p) -> int:
        return self._index[p]

    def __contains__(self, p):
        return p in self._index

    def d(self, x, y):
        try:
            return self._table[x, y]
        except KeyError:
            if self._fn is None:
                if x not in self._index or y not in self._index:
                    raise ValidationError(f"{x!r} or {y!r} is not a point of {self!r}")
                raise ValidationError(f"no distance recorded for ({x!r}, {y!r})")
            v = self._table[x, y] = self._fn(x, y)
            self._table[y, x] = v
            return v

    distance = d

    def pair(self, x, y):
        return (x, y)

    def axiom_violations(self, stop_at_first: bool = False) -> list[str]:
        q = self.quantale
        out = []
        pts = self.points
        for x in pts:
            if self.d(x, x) != q.zero:
                out.append(f"d({x!r},{x!r}) = {q.format(self.d(x, x))} is not zero")
                if stop_at_first:
                    return out
        for x, y in itertools.combinations(pts, 2):
            if self.d(x, y) != self.d(y, x):
                out.append(f"d({x!r},{y!r}) != d({y!r},{x!r})")
                if stop_at_first:
                    return out
            if self.d(x, y) == q.zero:
                out.append(f"distinct points {x!r} and {y!r} are at distance zero")
                if stop_at_first:
                    return out
        for x, y, z in itertools.product(pts, pts, pts):
            if not q.leq(self.d(x, z), q.plus(self.d(x, y), self.d(y, z))):
                out.append(f"triangle inequality fails for ({x!r}, {y!r}, {z!r})")
                if stop_at_first:
                    return out
        return out

    def validate(self) -> "QMetSpace":
        problems = self.axiom_violations(stop_at_first=True)
        if problems:
            raise ValidationError(problems[0])
        return self

    def distances(self) -> set:
        return {self.d(x, y) for x in self.points for y in self.points}

    def table(self) -> dict:
        return {(x, y): self.d(x, y) for x in self.points for y in self.points}

    def to_json(self) -> dict:
        q = self.quantale
        pts = list(self.points)
        rows = [[q.format(self.d(pts[i], pts[j])) for j in range(i + 1, len(pts))] for i in range(len(pts))]
        return {"points": [str(p) if not isinstance(p, (str, int)) else p for p in pts], "distances": rows}


def space(
    points: Sequence[Hashable],
    distances: Mapping | Sequence,
    quantale: ValueQuantale = LAWVERE,
    name: str | None = None,
) -> QMetSpace:
    """Build a space from a ``{(x, y): d}`` mapping or an upper-triangular table.

    The upper-triangular form lists, for each point ``i``, the distances to
    points ``i+1, i+2, ...``.

    >>> X = space([0, 1, 2], [[1, 2], [1], []])
    >>> X.d(0, 2)
    Fraction(2, 1)
    """
    points = list(points)
    if isinstance(distances, Mapping):
        table = {k: quantale.parse(v) for k, v in distances.items()}
    else:
        table = {}
        rows = list(distances)
        if len(rows) not in (len(points), max(len(points) - 1, 0)):
            raise ValidationError("upper-triangular table has the wrong number of rows")
        for i, row in enumerate(rows):
            row = list(row)
            if len(row) != len(points) - i - 1:
                raise ValidationError(f"row {i} of the distance table has the wrong length")
            for j, v in enumerate(row):
                table[points[i], points[i + 1 + j]] = quantale.parse(v)
    for x, y in itertools.combinations(points, 2):
        if (x, y) not in table and (y, x) not in table:
            raise ValidationError(f"missing distance between {x!r} and {y!r}")
    return QMetSpace(quantale, points, table, name=name)


def unit_space(quantale: ValueQuantale = LAWVERE) -> QMetSpace:
    return QMetSpace(quantale, [0], {}, name="1")


def empty_space(quantale: ValueQuantale = LAWVERE) -> QMetSpace:
    return QMetSpace(quantale, [], {}, name="0")


def two_point(eps, quantale: ValueQuantale = LAWVERE) -> QMetSpace:
    """The space ``{0, 1}`` with the two points at distance ``eps``."""
    e = quantale.parse(eps)
    return QMetSpace(quantale, [0, 1], {(0, 1): e}, name=f"2_{quantale.format(e)}")


def map_from_list(dom: QMetSpace, cod: QMetSpace, images: Sequence, check: bool = True) -> Map:
    """The map sending ``dom.points[i]`` to ``images[i]``."""
    if len(images) != len(dom.points):
        raise ValidationError("assignment length does not match the domain")
    for y in images:
        if y not in cod:
            raise ValidationError(f"{y!r} is not a point of the codomain")
    f = Map(dom, cod, dict(zip(dom.points, images)))
    if check and not QMET.is_morphism(f):
        raise ValidationError(f"assignment {list(images)} is not nonexpanding")
    return f


def nonexpanding_maps(X: QMetSpace, Y: QMetSpace, limit: int | None = None) -> list[tuple]:
    """All nonexpanding maps ``X -> Y`` as image tuples, by backtracking."""
    q = X.quantale
    xs = X.points
    ys = Y.points
    out: list[tuple] = []
    cap = limit
    if not xs:
        return [()]
    current: list = []

    def extend(i):
        if i == len(xs):
            out.append(tuple(current))
            if cap is not None and len(out) > cap:
                raise CapabilityError(f"more than {cap} nonexpanding maps {X!r} -> {Y!r} (hom-size guard)")
            return
        x = xs[i]
        for y in ys:
            ok = True
            for j in range(i):
                if not q.leq(Y.d(current[j], y), X.d(xs[j], x)):
                    ok = False
                    break
            if ok:
                current.append(y)
                extend(i + 1)
                current.pop()

    from .base import hom_guard

    if cap is None:
        cap = hom_guard()
    extend(0)
    return out


class QMetBase(EnrichedBase):
    name = "qmet"

    def __init__(self):
        super().__init__()
        self._homs: dict = {}
        self.register_system(FactorizationSystem(self, "surjective-isometry", "image"))
        self.register_system(FactorizationSystem(self, "all-iso", "all-iso"))
        self.register_system(FactorizationSystem(self, "iso-all", "iso-all"))

    def clear_cache(self):
        self._homs.clear()

    def hom(self, A: QMetSpace, B: QMetSpace) -> QMetSpace:
        key = (id(A), id(B))
        hit = self._homs.get(key)
        if hit is not None and hit[0] is A and hit[1] is B:
            return hit[2]
        if A.quantale != B.quantale and A.quantale is not B.quantale:
            raise ValidationError("spaces over different quantales")
        q = A.quantale
        pts = nonexpanding_maps(A, B)
        check_guard(len(pts), f"hom({A!r}, {B!r})")

        def dist(f, g):
            return q.join(B.d(a, b) for a, b in zip(f, g))

        H = QMetSpace(q, pts, dist, name=f"[{A.name or len(A)},{B.name or len(B)}]", validate=False)
        remember(self._homs, key, (A, B, H))
        return H

    def map_of(self, A, B, element) -> Map:
        return Map(A, B, dict(zip(A.points, element)))

    def element_of(self, f: Map):
        return tuple(f(a) for a in f.dom.points)

    def morphisms(self, A, B) -> list[Map]:
        return [self.map_of(A, B, e) for e in self.hom(A, B).points]

    def is_morphism(self, f: Map) -> bool:
        q = f.dom.quantale
        pts = f.dom.points
        for x, y in itertools.combinations(pts, 2):
            if not q.leq(f.cod.d(f(x), f(y)), f.dom.d(x, y)):
                return False
        return all(f(x) in f.cod for x in pts)

    def is_embedding(self, f: Map) -> bool:
        pts = f.dom.points
        if not self.is_injective(f):
            return False
        return all(f.cod.d(f(x), f(y)) == f.dom.d(x, y) for x, y in itertools.combinations(pts, 2))

    def precompose(self, g: Map, X) -> Map:
        A, B = g.dom, g.cod
        idx = [B.index(g(a)) for a in A.points]
        return Map(self.hom(B, X), self.hom(A, X), lambda phi: tuple(phi[i] for i in idx))

    def postcompose(self, A, f: Map) -> Map:
        return Map(self.hom(A, f.dom), self.hom(A, f.cod), lambda phi: tuple(f(y) for y in phi))

    def subobject(self, X: QMetSpace, elements) -> tuple:
        keep = set(elements)
        pts = [p for p in X.points if p in keep]
        S = QMetSpace(X.quantale, pts, X.d, validate=False)
        return S, Map(S, X, lambda p: p, name="incl")

    def pair_object(self, A, B, elements) -> tuple:
        q = A.quantale
        pts = list(elements)

        def dist(u, v):
            return q.join((A.d(u[0], v[0]), B.d(u[1], v[1])))

        P = QMetSpace(q, pts, dist, validate=False)
        return P, Map(P, A, lambda p: p[0]), Map(P, B, lambda p: p[1])

    def pushout(self, g: Map, f: Map) -> tuple:
        po = q_pushout(g, f, g.dom.quantale.zero)
        return po.D, po.gbar, po.fbar

    def coproduct(self, A, B) -> tuple:
        """Disjoint union with the two summands infinitely far apart."""
        q = A.quantale
        pts = [(0, a) for a in A.points] + [(1, b) for b in B.points]

        def dist(x, y):
            if x[0] != y[0]:
                return q.top
            return (A if x[0] == 0 else B).d(x[1], y[1])

        S = QMetSpace(q, pts, dist, validate=False)
        return S, Map(A, S, lambda a: (0, a)), Map(B, S, lambda b: (1, b))


QMET = QMetBase()


def tensor(X: QMetSpace, Y: QMetSpace) -> QMetSpace:
    """Points ``X x Y`` with summed distances."""
    if X.quantale != Y.quantale:
        raise ValidationError("tensor of spaces over different quantales")
    q = X.quantale
    pts = [(x, y) for x in X.points for y in Y.points]
    return QMetSpace(q, pts, lambda u, v: q.plus(X.d(u[0], v[0]), Y.d(u[1], v[1])), validate=False)


def internal_hom(X: QMetSpace, Y: QMetSpace) -> QMetSpace:
    return QMET.hom(X, Y)


def hom_distance(f: Map, g: Map):
    q = f.cod.quantale
    return q.join(f.cod.d(f(x), g(x)) for x in f.dom.points)


def sim_at(f: Map, g: Map, q_value) -> bool:
    """``f ~_q g``: the hom-distance is at most ``q``."""
    q = f.cod.quantale
    return q.leq(hom_distance(f, g), q.check(q_value))


def dense_at(f: Map, q_value) -> bool:
    q = f.cod.quantale
    tol = q.check(q_value)
    image = f.image()
    return all(any(q.well_above(tol, f.cod.d(x, y)) for x in image) for y in f.cod.points)


def open_ball(X: QMetSpace, x, q_value) -> set:
    tol = X.quantale.check(q_value)
    return {y for y in X.points if X.quantale.well_above(tol, X.d(x, y))}


class QPushout:
    """A q-pushout ``D`` of ``g: A -> B`` and ``f: A -> C`` with legs

    ``fbar: B -> D`` and ``gbar: C -> D`` such that ``fbar g ~_q gbar f``.
    """

    def __init__(self, g: Map, f: Map, q_value, D: QMetSpace, gbar: Map, fbar: Map):
        self.g = g
        self.f = f
        self.q = q_value
        self.D = D
        self.gbar = gbar
        self.fbar = fbar

    def __iter__(self):
        return iter((self.D, self.gbar, self.fbar))

    def commutes(self) -> bool:
        return q_commutes(self.g, self.f, self.fbar, self.gbar, self.q)


def q_commutes(g: Map, f: Map, top: Map, bottom: Map, q_value) -> bool:
    """``top o g ~_q bottom o f`` for ``top: B -> E``, ``bottom: C -> E``."""
    E = top.cod
    q = E.quantale
    gap = q.join(E.d(top(g(a)), bottom(f(a))) for a in g.dom.points)
    return q.leq(gap, q_value)


def _relax(q, dist: list[list], n: int) -> None:
    changed = True
    while changed:
        changed = False
        for k in range(n):
            dk = dist[k]
            for i in range(n):
                dik = dist[i][k]
                di = dist[i]
                for j in range(n):
                    cand = q.plus(dik, dk[j])
                    cur = di[j]
                    new = q.meet((cur, cand))
                    if new != cur:
                        di[j] = new
                        changed = True


def q_pushout(g: Map, f: Map, q_value) -> QPushout:
    """Shortest-path construction of the q-pushout of ``g`` along ``f``."""
    A, B, C = g.dom, g.cod, f.cod
    if f.dom is not A:
        raise ValidationError("g and f must share their domain")
    q = B.quantale
    tol = q.check(q_value)
    verts = [("B", b) for b in B.points] + [("C", c) for c in C.points]
    n = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    dist = [[q.top] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = q.zero
    for x, y in itertools.product(B.points, B.points):
        dist[pos["B", x]][pos["B", y]] = B.d(x, y)
    for x, y in itertools.product(C.points, C.points):
        dist[pos["C", x]][pos["C", y]] = C.d(x, y)
    for a in A.points:
        i, j = pos["B", g(a)], pos["C", f(a)]
        w = q.meet((dist[i][j], tol))
        dist[i][j] = dist[j][i] = w
    _relax(q, dist, n)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] == q.zero:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    classes: dict[int, list] = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    label = {}
    rep = {}
    for root, members in classes.items():
        name = verts[members[0]] if len(members) == 1 else tuple(verts[m] for m in members)
        rep[name] = root
        for m in members:
            label[m] = name
    points = [label[r] for r in sorted(classes)]
    D = QMetSpace(q, points, lambda x, y: dist[rep[x]][rep[y]], name="D", validate=False)
    gbar = Map(C, D, {c: label[pos["C", c]] for c in C.points}, name="gbar")
    fbar = Map(B, D, {b: label[pos["B", b]] for b in B.points}, name="fbar")
    return QPushout(g, f, tol, D, gbar, fbar)


class UniversalReport:
    """Outcome of checking a competitor square against a q-pushout."""

    def __init__(self, mediators: list[Map], competitor_ok: bool, message: str = ""):
        self.mediators = mediators
        self.competitor_ok = competitor_ok
        self.message = message

    @property
    def unique(self) -> bool:
        return len(self.mediators) == 1

    @property
    def mediator(self) -> Map | None:
        return self.mediators[0] if self.unique else None

    def __bool__(self):
        return self.competitor_ok and self.unique

    def __repr__(self):
        return f"<UniversalReport mediators={len(self.mediators)} {self.message}>"


def check_q_pushout_universal(po: QPushout, top: Map, bottom: Map) -> UniversalReport:
    """Find every nonexpanding ``t: D -> E`` with ``t fbar = top`` and ``t gbar = bottom``.

    ``top: B -> E`` and ``bottom: C -> E`` must form a q-commutative square.
    """
    E = top.cod
    if not q_commutes(po.g, po.f, top, bottom, po.q):
        return UniversalReport([], False, "competitor square does not q-commute")
    D = po.D
    allowed: dict = {p: set(E.points) for p in D.points}
    for b in po.fbar.dom.points:
        allowed[po.fbar(b)] &= {top(b)}
    for c in po.gbar.dom.points:
        allowed[po.gbar(c)] &= {bottom(c)}
    found = []
    for images in itertools.product(*(sorted(allowed[p], key=_point_key) for p in D.points)):
        t = Map(D, E, dict(zip(D.points, images)))
        if QMET.is_morphism(t):
            found.append(t)
    msg = "unique mediator" if len(found) == 1 else f"{len(found)} mediators"
    return UniversalReport(found, True, msg)
