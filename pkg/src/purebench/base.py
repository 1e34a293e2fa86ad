"""Uniform interface over the three bases of enrichment.

Every object of every base has a finite, enumerable set of elements and every
morphism is a function on elements.  For metric spaces and posets the
elements are the points; for chain complexes they are ``(degree, payload)``
pairs.  Hom-objects are again objects of the same base, so the purity
constructions can be written once against :class:`EnrichedBase`.

Factorization systems come in two shapes:

* ``image`` systems, where E is "surjective" and M is the base's notion of
  embedding (isometry, order-embedding, degreewise injection);
* the trivial systems ``all-iso`` and ``iso-all``.
"""
from __future__ import annotations

import os
from typing import Callable, Iterable

from .errors import CapabilityError, ValidationError

DEFAULT_GUARD = 20000
_guard_override: int | None = None


HOM_CACHE_LIMIT = 512


def remember(cache: dict, key, value, limit: int = HOM_CACHE_LIMIT):
    """Store ``value`` under ``key``, evicting the oldest entries past ``limit``."""
    cache[key] = value
    while len(cache) > limit:
        del cache[next(iter(cache))]
    return value


def hom_guard() -> int:
    """Current hom-size guard; ``PURITY_GUARD`` in the environment wins."""
    if _guard_override is not None:
        return _guard_override
    env = os.environ.get("PURITY_GUARD")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"PURITY_GUARD must be an integer, got {env!r}")
    return DEFAULT_GUARD


def set_hom_guard(value: int | None) -> None:
    global _guard_override
    _guard_override = value


def check_guard(count: int, what: str) -> None:
    limit = hom_guard()
    if count > limit:
        raise CapabilityError(f"{what} would have {count} elements, above the guard of {limit}")


class Map:
    """A morphism given by a function on elements (memoized)."""

    __slots__ = ("dom", "cod", "_fn", "_cache", "name")

    def __init__(self, dom, cod, fn: Callable | dict, name: str | None = None):
        self.dom = dom
        self.cod = cod
        if isinstance(fn, dict):
            self._cache = dict(fn)
            self._fn = None
        else:
            self._cache = {}
            self._fn = fn
        self.name = name

    def __call__(self, x):
        try:
            return self._cache[x]
        except KeyError:
            if self._fn is None:
                raise ValidationError(f"{self!r} is undefined at {x!r}")
            y = self._fn(x)
            self._cache[x] = y
            return y

    def table(self) -> dict:
        return {x: self(x) for x in self.dom.elements()}

    def image(self) -> set:
        return {self(x) for x in self.dom.elements()}

    def __repr__(self):
        return f"<Map {self.name or ''} {self.dom!r} -> {self.cod!r}>"


class Pullback:
    """Result of a pullback: the object and both projections."""

    def __init__(self, obj, p1: Map, p2: Map):
        self.obj = obj
        self.p1 = p1
        self.p2 = p2

    def __iter__(self):
        return iter((self.obj, self.p1, self.p2))


class EnrichedBase:
    """Abstract base of enrichment.  Subclasses fill in the structure."""

    name: str = "abstract"

    def __init__(self):
        self._systems: dict[str, FactorizationSystem] = {}

    # -- structure supplied by subclasses ---------------------------------

    def hom(self, A, B):
        raise NotImplementedError

    def map_of(self, A, B, element) -> Map:
        """The morphism ``A -> B`` named by an element of ``hom(A, B)``."""
        raise NotImplementedError

    def element_of(self, f: Map):
        raise NotImplementedError

    def morphisms(self, A, B) -> list[Map]:
        raise NotImplementedError

    def morphism_elements(self, A, B) -> list:
        """Elements of ``hom(A, B)`` that name actual morphisms."""
        return list(self.hom(A, B).elements())

    def is_morphism(self, f: Map) -> bool:
        raise NotImplementedError

    def precompose(self, g: Map, X) -> Map:
        """``K(g, X): K(B, X) -> K(A, X)`` for ``g: A -> B``."""
        raise NotImplementedError

    def postcompose(self, A, f: Map) -> Map:
        """``K(A, f): K(A, K) -> K(A, L)`` for ``f: K -> L``."""
        raise NotImplementedError

    def subobject(self, X, elements: Iterable) -> tuple:
        """The sub-object on the given elements with the induced structure."""
        raise NotImplementedError

    def pair_object(self, A, B, elements: Iterable) -> tuple:
        """A sub-object of ``A x B`` carried by the given pairs, with projections."""
        raise NotImplementedError

    def is_embedding(self, f: Map) -> bool:
        raise NotImplementedError

    def pushout(self, g: Map, f: Map) -> tuple:
        raise NotImplementedError

    # -- generic concrete-category plumbing -------------------------------

    def identity(self, X) -> Map:
        return Map(X, X, lambda x: x, name="id")

    def compose(self, f: Map, g: Map) -> Map:
        """``f o g``."""
        if g.cod is not f.dom and not self.same_object(g.cod, f.dom):
            raise ValidationError("maps are not composable")
        return Map(g.dom, f.cod, lambda x: f(g(x)))

    def same_object(self, X, Y) -> bool:
        return X is Y or X == Y

    def equal(self, f: Map, g: Map) -> bool:
        return all(f(x) == g(x) for x in f.dom.elements())

    def elements(self, X) -> list:
        return list(X.elements())

    def is_surjective(self, f: Map) -> bool:
        return f.image() >= set(f.cod.elements())

    def implicit_preimage(self, m: Map, w):
        """A preimage of ``w`` that element enumeration may omit, or ``None``.

        Graded bases only enumerate degrees inside a window; the zero element
        of any other degree still has the zero as its preimage.
        """
        return None

    def image_gaps(self, f: Map) -> list:
        """Elements of the codomain that ``f`` does not reach."""
        img = f.image()
        return [y for y in f.cod.elements() if y not in img]

    def is_injective(self, f: Map) -> bool:
        els = list(f.dom.elements())
        return len({f(x) for x in els}) == len(els)

    def preimages(self, f: Map) -> dict:
        out: dict = {}
        for x in f.dom.elements():
            out.setdefault(f(x), []).append(x)
        return out

    def inverse(self, f: Map) -> Map | None:
        """The set-theoretic inverse if ``f`` is bijective and it is a morphism."""
        if not (self.is_injective(f) and self.is_surjective(f)):
            return None
        back = {f(x): x for x in f.dom.elements()}
        inv = self.complete_map(f.cod, f.dom, back)
        return inv if self.is_morphism(inv) else None

    def complete_map(self, dom, cod, table: dict) -> Map:
        return Map(dom, cod, table)

    def is_iso(self, f: Map) -> bool:
        return self.inverse(f) is not None

    def pullback(self, f: Map, g: Map) -> Pullback:
        """Pullback of ``f: A -> C`` and ``g: B -> C``."""
        if not self.same_object(f.cod, g.cod):
            raise ValidationError("pullback needs a common codomain")
        by_image: dict = {}
        for b in g.dom.elements():
            by_image.setdefault(g(b), []).append(b)
        pairs = [(a, b) for a in f.dom.elements() for b in by_image.get(f(a), ())]
        P, p1, p2 = self.pair_object(f.dom, g.dom, pairs)
        return Pullback(P, p1, p2)

    def pair_into(self, P, x_map: Map, y_map: Map) -> Map:
        """The map into a pair object induced by two legs."""
        return Map(x_map.dom, P, lambda z: P.pair(x_map(z), y_map(z)))

    def product(self, A, B) -> tuple:
        pairs = [(a, b) for a in A.elements() for b in B.elements()]
        check_guard(len(pairs), "product")
        return self.pair_object(A, B, pairs)

    def image_factorization(self, f: Map) -> tuple:
        S, m = self.subobject(f.cod, f.image())
        e = Map(f.dom, S, lambda x: f(x))
        return e, S, m

    # -- factorization systems --------------------------------------------

    def system(self, name: str) -> "FactorizationSystem":
        try:
            return self._systems[name]
        except KeyError:
            raise ValidationError(
                f"base {self.name} has no factorization system {name!r}; "
                f"available: {sorted(self._systems)}"
            ) from None

    def systems(self) -> dict:
        return dict(self._systems)

    def register_system(self, system: "FactorizationSystem") -> None:
        self._systems[system.name] = system

    @property
    def default_system(self) -> "FactorizationSystem":
        return next(iter(self._systems.values()))


class FactorizationSystem:
    """A named (E, M) pair with a factorize procedure and diagonal fill-ins.

    ``shape`` is ``"image"`` (E surjective, M the base's embeddings),
    ``"all-iso"`` (E everything, M isomorphisms) or ``"iso-all"``.
    """

    def __init__(self, base: EnrichedBase, name: str, shape: str):
        if shape not in ("image", "all-iso", "iso-all"):
            raise ValidationError(f"unknown factorization shape {shape!r}")
        self.base = base
        self.name = name
        self.shape = shape

    def __repr__(self):
        return f"<FactorizationSystem {self.base.name}:{self.name}>"

    @property
    def proper(self) -> bool:
        """E consists of epis and M of monos."""
        return self.shape == "image"

    @property
    def pullback_stable(self) -> bool:
        """E is stable under pullback (surjections and all maps are)."""
        return self.shape in ("image", "all-iso")

    @property
    def contains_isos(self) -> bool:
        return True

    def in_E(self, f: Map) -> bool:
        if self.shape == "image":
            return self.base.is_surjective(f)
        if self.shape == "all-iso":
            return True
        return self.base.is_iso(f)

    def in_M(self, f: Map) -> bool:
        if self.shape == "image":
            return self.base.is_embedding(f)
        if self.shape == "all-iso":
            return self.base.is_iso(f)
        return True

    def factorize(self, f: Map) -> tuple:
        """Return ``(e, mid, m)`` with ``m o e == f``."""
        if self.shape == "image":
            return self.base.image_factorization(f)
        if self.shape == "all-iso":
            return f, f.cod, self.base.identity(f.cod)
        return self.base.identity(f.dom), f.dom, f

    def fill(self, e: Map, m: Map, u: Map, v: Map) -> Map | None:
        """The diagonal ``d`` of a square ``m o u = v o e`` with ``d o e = u``, ``m o d = v``.

        Returns ``None`` when no morphism fills the square.
        """
        base = self.base
        if base.is_surjective(e):
            table: dict = {}
            for x in e.dom.elements():
                y = e(x)
                if y in table and table[y] != u(x):
                    return None
                table[y] = u(x)
            d = base.complete_map(e.cod, u.cod, table)
        elif base.is_injective(m):
            back = {m(z): z for z in m.dom.elements()}
            table = {}
            for y in e.cod.elements():
                w = v(y)
                if w not in back:
                    w = base.implicit_preimage(m, w)
                    if w is None:
                        return None
                    table[y] = w
                else:
                    table[y] = back[w]
            d = base.complete_map(e.cod, u.cod, table)
        else:
            return None
        if not base.is_morphism(d):
            return None
        if not base.equal(base.compose(d, e), u) or not base.equal(base.compose(m, d), v):
            return None
        return d

    def same_subobject(self, m1: Map, m2: Map) -> bool:
        """Whether two M-maps into the same object present the same subobject."""
        if not self.base.same_object(m1.cod, m2.cod):
            return False
        return self._compare(m1, m2) is not None and self._compare(m2, m1) is not None

    def _compare(self, m1: Map, m2: Map) -> Map | None:
        """A morphism ``c`` with ``m2 o c == m1``, if one exists."""
        base = self.base
        if base.is_injective(m2):
            back = {m2(z): z for z in m2.dom.elements()}
            table = {}
            for y in m1.dom.elements():
                w = m1(y)
                if w not in back:
                    w = base.implicit_preimage(m2, w)
                    if w is None:
                        return None
                    table[y] = w
                else:
                    table[y] = back[w]
            c = base.complete_map(m1.dom, m2.dom, table)
            return c if base.is_morphism(c) else None
        for c in base.morphisms(m1.dom, m2.dom):
            if base.equal(base.compose(m2, c), m1):
                return c
        return None
