"""Loading and writing the JSON instance format.

An instance file is a single JSON object::

    {
      "version": "purebench-instance/1",
      "quantales": {"Q3": {"kind": "finite-table", ...}},
      "objects": {
        "K": {"base": "qmet", "quantale": "lawvere", "points": [0, 2], "distances": [["2"], []]},
        "P": {"base": "omega-cpo", "points": ["a", "b"], "covers": [["a", "b"]]},
        "X": {"base": "dg-fin", "window": [0, 1], "groups": {"0": [2]}, "differentials": {}}
      },
      "morphisms": {"f": {"dom": "K", "cod": "L", "images": [0, 2]}},
      "systems": {"S": {"base": "qmet", "name": "surjective-isometry"}},
      "families": {"G": ["g"]},
      "formulas": {"phi": {"sort_x": "A", "sort_y": "B", "equations": [["id_A", "g"]], "exists_y": true}},
      "checks": [{"id": "c1", "kind": "pure", "f": "f", "g": "g", "system": "S"}]
    }

Rationals are strings such as ``"3/2"``; infinity is ``"inf"``.  Metric and
poset maps give ``images`` in the order of the domain points, or a ``table``
keyed by the string form of each point.  Chain maps give ``components``
keyed by degree.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .base import Map
from .dgab import DG, FinComplex, chain_map, complex_from_data, identity_map
from .errors import ValidationError
from .omega_cpo import CPO, FinPoset
from .pp_logic import Equation, PPFormula
from .qmet import QMET, QMetSpace, space
from .quantale import LAWVERE, ULTRAMETRIC, ValueQuantale, quantale_from_json, shipped_quantales

__all__ = [
    "VERSION",
    "CHECK_KINDS",
    "Instance",
    "CheckRequest",
    "load_instance",
    "parse_instance",
    "base_named",
    "object_record",
    "morphism_record",
]

VERSION = "purebench-instance/1"
CHECK_KINDS = ("pure", "barely", "weakly", "injective", "orthogonal", "split", "elementary")
BASE_NAMES = {"qmet": QMET, "omega-cpo": CPO, "dg-fin": DG}


def base_named(name: str):
    try:
        return BASE_NAMES[name]
    except KeyError:
        raise ValidationError(f"unknown base {name!r}; expected one of {', '.join(BASE_NAMES)}") from None


def base_of(obj):
    if isinstance(obj, QMetSpace):
        return QMET
    if isinstance(obj, FinPoset):
        return CPO
    if isinstance(obj, FinComplex):
        return DG
    raise ValidationError(f"{obj!r} does not belong to a known base")


@dataclass
class CheckRequest:
    id: str
    kind: str
    f: str
    g: str | None = None
    system: str | None = None
    tolerance: str | None = None
    formula: str | None = None


@dataclass
class Instance:
    quantales: dict = field(default_factory=dict)
    objects: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    formulas: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    raw: dict = field(default_factory=dict)

    def object(self, ref: str):
        try:
            return self.objects[ref]
        except KeyError:
            raise ValidationError(f"unknown object id {ref!r}") from None

    def morphism(self, ref: str) -> Map:
        try:
            return self.morphisms[ref]
        except KeyError:
            raise ValidationError(f"unknown morphism id {ref!r}") from None

    def family(self, ref: str) -> list[Map]:
        """A family id, or a single morphism id read as a one-member family."""
        if ref in self.families:
            return self.families[ref]
        return [self.morphism(ref)]

    def system(self, base, ref: str | None):
        """Resolve a system id from the file, or a system name of ``base``."""
        if ref is None:
            return base.default_system
        if ref in self.systems:
            b, name = self.systems[ref]
            if b is not base:
                raise ValidationError(f"system {ref!r} belongs to base {b.name}, not {base.name}")
            return base.system(name)
        return base.system(ref)


# -- parsing -----------------------------------------------------------------


def load_instance(path: str | Path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_instance(data)


def parse_instance(data: Mapping) -> Instance:
    if not isinstance(data, Mapping):
        raise ValidationError("an instance file must hold a JSON object")
    version = data.get("version")
    if version != VERSION:
        raise ValidationError(f"unsupported version tag {version!r}; expected {VERSION!r}")
    inst = Instance(raw=dict(data))
    for qid, rec in (data.get("quantales") or {}).items():
        inst.quantales[qid] = _context(f"quantale {qid!r}", quantale_from_json, rec, name=qid)
    for oid, rec in (data.get("objects") or {}).items():
        inst.objects[oid] = _context(f"object {oid!r}", _parse_object, inst, rec, oid)
    for mid, rec in (data.get("morphisms") or {}).items():
        inst.morphisms[mid] = _context(f"morphism {mid!r}", _parse_morphism, inst, rec, mid)
    for sid, rec in (data.get("systems") or {}).items():
        base = base_named(rec.get("base", ""))
        name = rec.get("name")
        _context(f"system {sid!r}", base.system, name)
        inst.systems[sid] = (base, name)
    for fid, refs in (data.get("families") or {}).items():
        if not isinstance(refs, list) or not refs:
            raise ValidationError(f"family {fid!r} must be a nonempty list of morphism ids")
        inst.families[fid] = [inst.morphism(r) for r in refs]
    for pid, rec in (data.get("formulas") or {}).items():
        inst.formulas[pid] = _context(f"formula {pid!r}", _parse_formula, inst, rec, pid)
    for i, rec in enumerate(data.get("checks") or []):
        inst.checks.append(_context(f"check #{i}", _parse_check, inst, rec, i))
    return inst


def _context(label, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except ValidationError as exc:
        raise ValidationError(f"{label}: {exc}") from exc


def _quantale(inst: Instance, ref) -> ValueQuantale:
    if ref in (None, "lawvere"):
        return LAWVERE
    if ref == "ultrametric":
        return ULTRAMETRIC
    if ref in inst.quantales:
        return inst.quantales[ref]
    shipped = shipped_quantales()
    if ref in shipped:
        return shipped[ref]
    raise ValidationError(f"unknown quantale {ref!r}")


def _parse_object(inst: Instance, rec: Mapping, oid: str):
    base = rec.get("base")
    if base == "qmet":
        q = _quantale(inst, rec.get("quantale"))
        return space(rec["points"], rec.get("distances", []), quantale=q, name=oid)
    if base == "omega-cpo":
        return FinPoset(rec["points"], [tuple(c) for c in rec.get("covers", [])], name=oid)
    if base == "dg-fin":
        groups = rec.get("groups", {})
        window = rec.get("window")
        if window is None:
            degs = [int(n) for n in groups] or [0]
            window = (min(degs), max(degs))
        return complex_from_data(window, groups, rec.get("differentials"), name=oid)
    raise ValidationError(f"unknown base {base!r}")


def _point_lookup(X) -> dict:
    return {str(p): p for p in X.points}


def _parse_morphism(inst: Instance, rec: Mapping, mid: str) -> Map:
    if rec.get("identity") is not None:
        X = inst.object(rec["identity"])
        return identity_map(X) if isinstance(X, FinComplex) else base_of(X).identity(X)
    A, B = inst.object(rec["dom"]), inst.object(rec["cod"])
    base = base_of(A)
    if base_of(B) is not base:
        raise ValidationError("domain and codomain live in different bases")
    if base is DG:
        return chain_map(A, B, rec.get("components", {}), name=mid)
    lookup = _point_lookup(B)
    if "images" in rec:
        images = list(rec["images"])
        if len(images) != len(A.points):
            raise ValidationError(f"expected {len(A.points)} images, got {len(images)}")
        table = dict(zip(A.points, images))
    elif "table" in rec:
        src = _point_lookup(A)
        table = {}
        for k, v in rec["table"].items():
            if k not in src:
                raise ValidationError(f"{k!r} is not a point of the domain")
            table[src[k]] = v
        missing = [p for p in A.points if p not in table]
        if missing:
            raise ValidationError(f"no image given for {missing[0]!r}")
    else:
        raise ValidationError("a map needs 'images' or 'table'")
    for p, v in list(table.items()):
        if v not in B:
            if str(v) in lookup:
                table[p] = lookup[str(v)]
            else:
                raise ValidationError(f"image {v!r} of {p!r} is not a point of the codomain")
    m = Map(A, B, table, name=mid)
    if not base.is_morphism(m):
        what = "nonexpanding" if base is QMET else "monotone"
        raise ValidationError(f"the map is not {what}")
    return m


def _parse_formula(inst: Instance, rec: Mapping, pid: str) -> PPFormula:
    eqs = [Equation(inst.morphism(a), inst.morphism(b)) for a, b in rec.get("equations", [])]
    return PPFormula(inst.object(rec["sort_x"]), inst.object(rec["sort_y"]), eqs,
                     bool(rec.get("exists_y", True)), name=pid)


def _parse_check(inst: Instance, rec: Mapping, i: int) -> CheckRequest:
    kind = rec.get("kind")
    if kind not in CHECK_KINDS:
        raise ValidationError(f"unknown check kind {kind!r}")
    req = CheckRequest(str(rec.get("id", f"check{i}")), kind, rec.get("f"), rec.get("g"),
                       rec.get("system"), rec.get("tolerance"), rec.get("formula"))
    if req.f is None:
        raise ValidationError("missing 'f'")
    return req


# -- writing -----------------------------------------------------------------


def object_record(X) -> dict:
    """The instance-file record of a loaded object."""
    if isinstance(X, QMetSpace):
        q = X.quantale
        rec = {"base": "qmet", **X.to_json()}
        rec["quantale"] = q.kind if q.kind in ("lawvere", "ultrametric") else (q.name or "finite")
        return rec
    if isinstance(X, FinPoset):
        return {"base": "omega-cpo", **X.to_json()}
    if isinstance(X, FinComplex):
        return {"base": "dg-fin", **X.to_json()}
    raise ValidationError(f"cannot serialize {X!r}")


def morphism_record(f: Map, dom_id: str, cod_id: str) -> dict:
    if isinstance(f.dom, FinComplex):
        return {"dom": dom_id, "cod": cod_id, "components": f.to_json()["components"]}
    return {"dom": dom_id, "cod": cod_id, "images": [f(p) for p in f.dom.points]}


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False)
