"""Self-describing outcome of a purity-style check."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class PurityVerdict:
    """Boolean outcome plus either a witness or a counterexample.

    ``witness`` and ``counterexample`` hold plain data (dicts of
    JSON-friendly values where possible) so a report can be re-checked
    without repeating the search.
    """

    outcome: bool
    kind: str = ""
    witness: Any = None
    counterexample: Any = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.outcome

    def __post_init__(self):
        if self.outcome and self.counterexample is not None:
            raise ValueError("a positive verdict cannot carry a counterexample")
        if not self.outcome and self.witness is not None:
            raise ValueError("a negative verdict cannot carry a witness")

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "kind": self.kind,
            "witness": _jsonable(self.witness),
            "counterexample": _jsonable(self.counterexample),
            "details": _jsonable(self.details),
        }


def _jsonable(x):
    from fractions import Fraction

    from .quantale import INF

    if x is None or isinstance(x, (bool, int, str)):
        return x
    if x is INF:
        return "inf"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {_key(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = list(x)
        if isinstance(x, (set, frozenset)):
            items = sorted(items, key=repr)
        return [_jsonable(v) for v in items]
    return repr(x)


def _key(k):
    if isinstance(k, str):
        return k
    return repr(k)
