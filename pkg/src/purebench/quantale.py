"""Value quantales with exact, finitely decidable operations.

Three kinds are provided:

* ``lawvere``     -- ``[0, inf]`` with the usual order and (saturating) addition,
* ``ultrametric`` -- ``[0, inf]`` with the usual order and ``max`` as the monoid,
* ``finite-table`` -- a user supplied finite lattice with a monoid table.

Interval elements are :class:`fractions.Fraction` values or the tagged
:data:`INF`; no floating point is used anywhere.  Finite-table elements are
names (strings).

The well-above relation uses the orientation

    a >> b  iff  for every S with meet(S) <= b there is s in S with s <= a,

under which ``q >> 0`` means "q is a strictly positive tolerance" on the
intervals.  On a finite lattice this is equivalent to
``meet{s : not s <= a}`` not being ``<= b``, which is what is computed.
Every finite value quantale has ``0 >> 0``, so over finite tables a tolerance
of ``0`` is always admissible and density degenerates to surjectivity.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import total_ordering
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import CapabilityError, ValidationError

__all__ = [
    "INF",
    "Infinity",
    "ValueQuantale",
    "IntervalQuantale",
    "FiniteQuantale",
    "LAWVERE",
    "ULTRAMETRIC",
    "parse_value",
    "format_value",
    "chain_quantale",
    "shipped_quantales",
]


@total_ordering
class Infinity:
    """The top element of ``[0, inf]``; compares above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("purebench-inf")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()


def parse_value(text) -> Fraction | Infinity:
    """Parse ``"p/q"``, an integer, or ``"inf"`` into an extended rational."""
    if text is INF:
        return INF
    if isinstance(text, Fraction):
        value = text
    elif isinstance(text, int) and not isinstance(text, bool):
        value = Fraction(text)
    elif isinstance(text, str):
        s = text.strip().lower()
        if s in ("inf", "infinity", "+inf"):
            return INF
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not an extended rational: {text!r}") from exc
    else:
        raise ValidationError(f"not an extended rational: {text!r}")
    if value < 0:
        raise ValidationError(f"distances must be nonnegative, got {text!r}")
    return value


def format_value(value) -> str:
    if value is INF:
        return "inf"
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


class ValueQuantale:
    """Common interface; see the concrete subclasses."""

    kind: str
    zero: Hashable
    top: Hashable

    def check(self, a) -> Hashable:
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def plus(self, a, b):
        raise NotImplementedError

    def meet(self, items: Iterable):
        raise NotImplementedError

    def join(self, items: Iterable):
        raise NotImplementedError

    def well_above(self, a, b) -> bool:
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def lt(self, a, b) -> bool:
        return self.leq(a, b) and a != b

    def parse(self, text):
        return self.check(text)

    def format(self, a) -> str:
        return str(a)

    def to_json(self) -> dict:
        raise NotImplementedError


class IntervalQuantale(ValueQuantale):
    """``[0, inf]`` with addition (``lawvere``) or ``max`` (``ultrametric``)."""

    def __init__(self, kind: str):
        if kind not in ("lawvere", "ultrametric"):
            raise ValidationError(f"unknown interval quantale kind {kind!r}")
        self.kind = kind
        self.zero = Fraction(0)
        self.top = INF

    def __repr__(self):
        return f"IntervalQuantale({self.kind!r})"

    def __eq__(self, other):
        return isinstance(other, IntervalQuantale) and other.kind == self.kind

    def __hash__(self):
        return hash(("interval", self.kind))

    def check(self, a):
        return parse_value(a)

    def parse(self, text):
        return parse_value(text)

    def format(self, a) -> str:
        return format_value(a)

    def leq(self, a, b) -> bool:
        return a <= b

    def plus(self, a, b):
        if self.kind == "ultrametric":
            return max(a, b)
        if a is INF or b is INF:
            return INF
        return a + b

    def meet(self, items):
        return min(items, default=INF)

    def join(self, items):
        return max(items, default=self.zero)

    def well_above(self, a, b) -> bool:
        return b is not INF and a > b

    def strictly_positive_cone(self, distances: Iterable | None = None) -> list:
        """Tolerance test grid for an instance with the given distances.

        The positive values are not enumerable, so callers pass the distances
        that occur in the instance; the grid holds every nonzero finite
        distance and the midpoint between each pair of consecutive distinct
        values (including ``0``).  Sorted descending.
        """
        if distances is None:
            raise CapabilityError(
                f"the {self.kind} quantale has no finite set of tolerances; "
                "pass the instance distances to build a test grid"
            )
        values = sorted({parse_value(d) for d in distances if d is not INF} | {Fraction(0)})
        grid = {v for v in values if v != 0}
        grid.update((lo + hi) / 2 for lo, hi in zip(values, values[1:]))
        return sorted(grid, reverse=True)

    def to_json(self) -> dict:
        return {"kind": self.kind}


LAWVERE = IntervalQuantale("lawvere")
ULTRAMETRIC = IntervalQuantale("ultrametric")


def _closure(elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> set:
    rel = {(a, a) for a in elements}
    rel.update(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


class FiniteQuantale(ValueQuantale):
    """A finite lattice with a commutative monoid table.

    The constructor only checks that the relation is a lattice order and that
    the tables are total; :meth:`law_violations` / :meth:`validate` check the
    full set of value-quantale laws exhaustively.
    """

    kind = "finite-table"

    def __init__(
        self,
        elements: Sequence[str],
        leq_pairs: Iterable[tuple[str, str]],
        plus_table: Mapping[str, Mapping[str, str]],
        zero: str,
        name: str | None = None,
    ):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValidationError("duplicate quantale element names")
        if not self.elements:
            raise ValidationError("a quantale needs at least one element")
        self.name = name
        known = self._known = frozenset(self.elements)
        pairs = [tuple(p) for p in leq_pairs]
        for a, b in pairs:
            if a not in known or b not in known:
                raise ValidationError(f"order pair ({a!r}, {b!r}) mentions an unknown element")
        self._leq = _closure(self.elements, pairs)
        for a, b in itertools.combinations(self.elements, 2):
            if (a, b) in self._leq and (b, a) in self._leq:
                raise ValidationError(f"order is not antisymmetric: {a!r} and {b!r}")
        if zero not in known:
            raise ValidationError(f"zero {zero!r} is not an element")
        self.zero = zero
        self._plus = {}
        for a in self.elements:
            row = plus_table.get(a)
            if row is None:
                raise ValidationError(f"plus table has no row for {a!r}")
            for b in self.elements:
                c = row.get(b)
                if c not in known:
                    raise ValidationError(f"plus({a!r}, {b!r}) = {c!r} is not an element")
                self._plus[a, b] = c
        self._meet2 = {}
        self._join2 = {}
        for a in self.elements:
            for b in self.elements:
                self._meet2[a, b] = self._bound(a, b, lower=True)
                self._join2[a, b] = self._bound(a, b, lower=False)
        self.bottom = self._extreme(lower=True)
        self.top = self._extreme(lower=False)
        self._above = {
            a: self.meet(s for s in self.elements if not self.leq(s, a)) for a in self.elements
        }

    def _bound(self, a, b, lower):
        if lower:
            cands = [c for c in self.elements if (c, a) in self._leq and (c, b) in self._leq]
            best = [c for c in cands if all((d, c) in self._leq for d in cands)]
            what = "meet"
        else:
            cands = [c for c in self.elements if (a, c) in self._leq and (b, c) in self._leq]
            best = [c for c in cands if all((c, d) in self._leq for d in cands)]
            what = "join"
        if len(best) != 1:
            raise ValidationError(f"not a lattice: {a!r} and {b!r} have no {what}")
        return best[0]

    def _extreme(self, lower):
        for c in self.elements:
            if all(((c, d) if lower else (d, c)) in self._leq for d in self.elements):
                return c
        raise ValidationError("not a lattice: no " + ("bottom" if lower else "top"))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteQuantale{label} {list(self.elements)}>"

    def is_finite(self) -> bool:
        return True

    def check(self, a):
        if a not in self._known:
            raise ValidationError(f"unknown quantale element {a!r}")
        return a

    def leq(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        return (a, b) in self._leq

    def plus(self, a, b):
        return self._plus[self.check(a), self.check(b)]

    def meet(self, items):
        out = self.top
        for x in items:
            out = self._meet2[out, self.check(x)]
        return out

    def join(self, items):
        out = self.bottom
        for x in items:
            out = self._join2[out, self.check(x)]
        return out

    def well_above(self, a, b) -> bool:
        self.check(b)
        return not self.leq(self._above[self.check(a)], b)

    def strictly_positive_cone(self, distances=None) -> list:
        return [x for x in self.elements if self.well_above(x, self.zero)]

    def well_above_up(self, a) -> list:
        """The set of elements well above ``a``."""
        return [x for x in self.elements if self.well_above(x, a)]

    # -- law checking -----------------------------------------------------

    def law_violations(self, stop_at_first: bool = False) -> list[str]:
        """Exhaustively check the quantale and value-quantale laws."""
        out: list[str] = []

        def bad(msg):
            out.append(msg)
            return stop_at_first

        els = self.elements
        if self.bottom != self.zero:
            if bad(f"zero {self.zero!r} is not the least element"):
                return out
        for a, b in itertools.product(els, els):
            if self._plus[a, b] != self._plus[b, a]:
                if bad(f"plus not commutative at ({a!r}, {b!r})"):
                    return out
        for a in els:
            if self._plus[a, self.zero] != a:
                if bad(f"zero is not a unit for {a!r}"):
                    return out
        for a, b, c in itertools.product(els, els, els):
            if self._plus[self._plus[a, b], c] != self._plus[a, self._plus[b, c]]:
                if bad(f"plus not associative at ({a!r}, {b!r}, {c!r})"):
                    return out
        for x in els:
            for r in range(len(els) + 1):
                for subset in itertools.combinations(els, r):
                    lhs = self._plus[x, self.meet(subset)]
                    rhs = self.meet(self._plus[x, y] for y in subset)
                    if lhs != rhs:
                        if bad(f"plus does not distribute over meets at x={x!r}, S={list(subset)}"):
                            return out
        for a in els:
            if self.meet(self.well_above_up(a)) != a:
                if bad(f"{a!r} is not the meet of the elements well above it"):
                    return out
        for a, b in itertools.product(els, els):
            if (
                self.well_above(a, self.zero)
                and self.well_above(b, self.zero)
                and not self.well_above(self._meet2[a, b], self.zero)
            ):
                if bad(f"meet of {a!r} and {b!r} is not well above zero"):
                    return out
        return out

    def validate(self) -> "FiniteQuantale":
        problems = self.law_violations(stop_at_first=True)
        if problems:
            raise ValidationError(problems[0])
        return self

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "kind": "finite-table",
            "elements": list(self.elements),
            "leq": [[a, b] for a in self.elements for b in self.elements if a != b and (a, b) in self._leq],
            "plus": {a: {b: self._plus[a, b] for b in self.elements} for a in self.elements},
            "zero": self.zero,
        }

    @classmethod
    def from_json(cls, data: Mapping, name: str | None = None, validate: bool = True) -> "FiniteQuantale":
        try:
            elements = list(data["elements"])
            leq = [tuple(p) for p in data.get("leq", [])]
            plus = data["plus"]
            zero = data["zero"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed finite quantale record: {exc}") from exc
        if isinstance(plus, list):
            plus = {a: dict(zip(elements, row)) for a, row in zip(elements, plus)}
        q = cls(elements, leq, plus, zero, name=name)
        return q.validate() if validate else q


def quantale_from_json(data: Mapping, name: str | None = None, validate: bool = True) -> ValueQuantale:
    kind = data.get("kind")
    if kind in ("lawvere", "ultrametric"):
        return IntervalQuantale(kind)
    if kind == "finite-table":
        return FiniteQuantale.from_json(data, name=name, validate=validate)
    raise ValidationError(f"unknown quantale kind {kind!r}")


def chain_quantale(n: int, plus: str = "add", name: str | None = None) -> FiniteQuantale:
    """The chain ``0 < 1 < ... < n-2 < inf`` with saturating addition or max.

    >>> q = chain_quantale(3)
    >>> q.elements
    ('0', '1', 'inf')
    >>> q.plus('1', '1')
    'inf'
    """
    if n < 1:
        raise ValidationError("chain needs at least one element")
    names = [str(i) for i in range(n - 1)] + ["inf"]
    if n == 1:
        names = ["0"]
    rank = {x: i for i, x in enumerate(names)}
    top = len(names) - 1
    table = {}
    for a in names:
        table[a] = {}
        for b in names:
            if plus == "add":
                i = min(rank[a] + rank[b], top)
            elif plus == "max":
                i = max(rank[a], rank[b])
            else:
                raise ValidationError(f"unknown chain monoid {plus!r}")
            table[a][b] = names[i]
    pairs = list(zip(names, names[1:]))
    return FiniteQuantale(names, pairs, table, names[0], name=name or f"chain{n}-{plus}").validate()


def shipped_quantales() -> dict[str, FiniteQuantale]:
    """The finite-table quantales that ship with the package."""
    out = {}
    for n in (2, 3, 4, 5):
        for op in ("add", "max"):
            q = chain_quantale(n, op)
            out[q.name] = q
    return out


def iter_subsets(items: Sequence) -> Iterator[tuple]:
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)
