"""Command-line front door.

Exit codes: 0 when every verdict is true (or the file is valid), 1 when a
verdict is false, 2 on any error (I/O, parse, validation, guard).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from .base import set_hom_guard
from .errors import PurityError, ValidationError
from .instances import CHECK_KINDS, CheckRequest, Instance, base_of, load_instance
from .pp_logic import is_elementary, psi_g
from .props import SUITES, run_suite
from .purity import (
    is_barely_E_pure,
    is_E_injective,
    is_E_pure,
    is_E_split,
    is_orthogonal,
    weakly_pure,
    weakly_pure_at,
)
from .qmet import QMET, QMetSpace, check_q_pushout_universal, q_pushout
from .verdict import PurityVerdict, _jsonable

__all__ = ["main", "run_check", "recheck_request", "cmd_validate", "cmd_check", "cmd_qpushout", "cmd_verify"]

REPORT_VERSION = "purebench-report/1"


# -- evaluating one request --------------------------------------------------


def _over_family(kind, family, test) -> PurityVerdict:
    if len(family) == 1:
        return test(family[0])
    for i, g in enumerate(family):
        v = test(g)
        if not v:
            return PurityVerdict(False, kind, counterexample={"test_map": i, "detail": v.counterexample})
    return PurityVerdict(True, kind, witness={"test_maps": len(family)})


def run_check(inst: Instance, req: CheckRequest) -> PurityVerdict:
    """Evaluate one check request against a loaded instance."""
    kind = req.kind
    if kind in ("injective", "orthogonal"):
        X = inst.object(req.f)
        base = base_of(X)
        family = inst.family(_need(req.g, "g"))
        if kind == "injective":
            system = inst.system(base, req.system)
            verdicts = is_E_injective(base, system, X, family)
            bad = next((i for i, v in enumerate(verdicts) if not v), None)
            if bad is not None:
                return PurityVerdict(False, kind, counterexample={"test_map": bad, "detail": verdicts[bad].counterexample})
            return PurityVerdict(True, kind, witness={"test_maps": len(family)})
        bad = next((i for i, h in enumerate(family) if not is_orthogonal(base, X, h)), None)
        if bad is not None:
            return PurityVerdict(False, kind, counterexample={"test_map": bad})
        return PurityVerdict(True, kind, witness={"test_maps": len(family)})

    f = inst.morphism(req.f)
    base = base_of(f.dom)
    system = inst.system(base, req.system)
    if kind == "split":
        ok = is_E_split(base, system, f)
        return PurityVerdict(ok, kind, witness={"system": system.name} if ok else None,
                             counterexample=None if ok else {"reason": "restriction along the map is not in E"})
    if kind == "elementary":
        if req.formula is not None:
            if req.formula not in inst.formulas:
                raise ValidationError(f"unknown formula id {req.formula!r}")
            return is_elementary(base, f, inst.formulas[req.formula], system)
        family = inst.family(_need(req.g, "g"))
        return _over_family(kind, family, lambda g: is_elementary(base, f, psi_g(g, base), system))
    family = inst.family(_need(req.g, "g"))
    if kind == "pure":
        return _over_family(kind, family, lambda g: is_E_pure(base, system, f, g))
    if kind == "barely":
        return _over_family(kind, family, lambda g: is_barely_E_pure(base, system, f, g))
    if kind == "weakly":
        if base is not QMET:
            raise ValidationError("weak purity is only defined over the metric base")
        if req.tolerance is not None:
            q = f.dom.quantale.parse(req.tolerance)
            return _over_family(kind, family, lambda g: weakly_pure_at(f, g, q))
        return _over_family(kind, family, lambda g: weakly_pure(f, g))
    raise ValidationError(f"unknown check kind {kind!r}")


def _need(value, what):
    if value is None:
        raise ValidationError(f"this check needs '{what}'")
    return value


# -- re-verifying reported verdicts --------------------------------------------


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


def recheck_request(inst: Instance, req: CheckRequest, verdict: dict) -> bool:
    """Confirm a reported verdict.

    Lift witnesses and metric counterexamples are checked directly from the
    reported data; verdicts without structured data are re-evaluated.
    """
    outcome = verdict["outcome"]
    kind = req.kind
    if kind in ("pure", "barely", "weakly") and req.g is not None:
        f = inst.morphism(req.f)
        family = inst.family(req.g)
        base = base_of(f.dom)
        data = verdict.get("witness") if outcome else verdict.get("counterexample")
        if len(family) > 1 and not outcome and isinstance(data, dict) and "test_map" in data:
            g = family[data["test_map"]]
            sub = {"outcome": False, "counterexample": data["detail"]}
            return _recheck_single(inst, req, f, g, base, sub)
        if len(family) == 1:
            return _recheck_single(inst, req, f, family[0], base, verdict)
    return bool(run_check(inst, req)) == outcome


def _recheck_single(inst, req, f, g, base, verdict) -> bool:
    outcome = verdict["outcome"]
    K, L = f.dom, f.cod
    A, B = g.dom, g.cod
    if req.kind in ("pure", "barely") and outcome:
        lifts = (verdict.get("witness") or {}).get("lifts")
        if lifts is not None:
            pre_K = base.precompose(g, K)
            homBK = set(base.hom(B, K).elements())
            return all(_tuplify(t) in homBK and pre_K(_tuplify(t)) == _tuplify(u) for u, t in lifts)
    if req.kind == "pure" and not outcome and base is QMET:
        cx = verdict.get("counterexample") or {}
        if "u" in cx and cx.get("v") is not None:
            u, v = _tuplify(cx["u"]), _tuplify(cx["v"])
            um, vm = QMET.map_of(A, K, u), QMET.map_of(B, L, v)
            if not (QMET.is_morphism(um) and QMET.is_morphism(vm)):
                return False
            if QMET.element_of(QMET.compose(f, um)) != QMET.element_of(QMET.compose(vm, g)):
                return False
            pre_K = QMET.precompose(g, K)
            return all(pre_K(t) != u for t in QMET.hom(B, K).points)
    if req.kind == "weakly" and not outcome and base is QMET:
        cx = verdict.get("counterexample") or {}
        if "u" in cx:
            Q = K.quantale
            q = Q.parse(cx["q"])
            u, v = _tuplify(cx["u"]), _tuplify(cx["v"])
            H_AL, H_AK = QMET.hom(A, L), QMET.hom(A, K)
            fu = QMET.postcompose(A, f)(u)
            if not Q.leq(H_AL.d(fu, QMET.precompose(g, L)(v)), q):
                return False
            pre_K = QMET.precompose(g, K)
            bound = Q.plus(q, q)
            return not any(Q.leq(H_AK.d(pre_K(t), u), bound) for t in QMET.hom(B, K).points)
    return bool(run_check(inst, req)) == outcome


# -- reports --------------------------------------------------------------------


def _request_record(req: CheckRequest, verdict: PurityVerdict | None, error: str | None, elapsed: float) -> dict:
    rec = {"id": req.id, "kind": req.kind, "f": req.f, "g": req.g, "system": req.system,
           "tolerance": req.tolerance, "formula": req.formula, "seconds": round(elapsed, 4)}
    if error is not None:
        rec["error"] = error
    else:
        rec["verdict"] = verdict.to_json()
    return rec


def _text_line(rec: dict) -> str:
    head = f"{rec['id']}: {rec['kind']} f={rec['f']}" + (f" g={rec['g']}" if rec["g"] else "")
    if rec.get("tolerance"):
        head += f" q={rec['tolerance']}"
    if "error" in rec:
        return f"{head}: ERROR {rec['error']}"
    v = rec["verdict"]
    tail = v["witness"] if v["outcome"] else v["counterexample"]
    label = "true" if v["outcome"] else "false"
    return f"{head}: {label}" + (f"  {json.dumps(tail)}" if tail else "")


def _emit(report: dict, json_path: str | None, lines: Sequence[str]) -> None:
    if json_path:
        Path(json_path).write_text(json.dumps(report, indent=2))
    for line in lines:
        print(line)


def _exit_code(records) -> int:
    if any("error" in r for r in records):
        return 2
    return 0 if all(r["verdict"]["outcome"] for r in records) else 1


# -- subcommands --------------------------------------------------------------------


def cmd_validate(path: str) -> int:
    try:
        inst = load_instance(path)
    except PurityError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 2
    counts = ", ".join(f"{len(getattr(inst, k))} {k}" for k in ("quantales", "objects", "morphisms", "checks"))
    print(f"valid: {counts}")
    return 0


def cmd_check(path: str, kind: str | None = None, f: str | None = None, g: str | None = None,
              system: str | None = None, tolerance: str | None = None, formula: str | None = None,
              json_path: str | None = None) -> int:
    """Run one request from the command line, or every request in the file."""
    try:
        inst = load_instance(path)
        if kind is None:
            requests = sorted(inst.checks, key=lambda r: r.id)
        else:
            if kind not in CHECK_KINDS:
                raise ValidationError(f"unknown check kind {kind!r}; expected one of {', '.join(CHECK_KINDS)}")
            requests = [CheckRequest("cli", kind, _need(f, "f"), g, system, tolerance, formula)]
    except PurityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not requests:
        print("error: no check requests given", file=sys.stderr)
        return 2
    records = []
    start = time.perf_counter()
    for req in requests:
        t0 = time.perf_counter()
        try:
            v = run_check(inst, req)
            records.append(_request_record(req, v, None, time.perf_counter() - t0))
        except PurityError as exc:
            records.append(_request_record(req, None, f"{type(exc).__name__}: {exc}", time.perf_counter() - t0))
    report = {"version": REPORT_VERSION, "instance": str(path), "requests": records,
              "timing": {"seconds": round(time.perf_counter() - start, 4)}}
    _emit(report, json_path, [_text_line(r) for r in records])
    return _exit_code(records)


def cmd_recheck(report_path: str, instance_path: str | None = None) -> int:
    """Parse a check report and confirm every verdict from its reported data."""
    try:
        report = json.loads(Path(report_path).read_text())
        if report.get("version") != REPORT_VERSION:
            raise ValidationError(f"unsupported report version {report.get('version')!r}")
        inst = load_instance(instance_path or report["instance"])
        bad = []
        for rec in report["requests"]:
            if "error" in rec:
                continue
            req = CheckRequest(rec["id"], rec["kind"], rec["f"], rec.get("g"), rec.get("system"),
                               rec.get("tolerance"), rec.get("formula"))
            ok = recheck_request(inst, req, rec["verdict"])
            print(f"{rec['id']}: {'confirmed' if ok else 'NOT CONFIRMED'}")
            if not ok:
                bad.append(rec["id"])
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PurityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 1 if bad else 0


def _space_lines(D: QMetSpace) -> list[str]:
    pts = list(D.points)
    out = [f"  points: {', '.join(map(repr, pts))}"]
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            out.append(f"  d({x!r}, {y!r}) = {D.quantale.format(D.d(x, y))}")
    return out


def cmd_qpushout(path: str, g_id: str, f_id: str, q_text: str, competitor: Sequence[str] | None = None,
                 json_path: str | None = None) -> int:
    try:
        inst = load_instance(path)
        g, f = inst.morphism(g_id), inst.morphism(f_id)
        if base_of(g.dom) is not QMET or base_of(f.dom) is not QMET:
            raise ValidationError("q-pushouts are computed over the metric base only")
        q = g.dom.quantale.parse(q_text)
        po = q_pushout(g, f, q)
        fmt = g.dom.quantale.format
        lines = [f"q-pushout of {g_id} and {f_id} at q = {fmt(q)}"] + _space_lines(po.D)
        lines.append("  leg on the codomain of g: " + ", ".join(f"{b!r}->{po.fbar(b)!r}" for b in po.fbar.dom.points))
        lines.append("  leg on the codomain of f: " + ", ".join(f"{c!r}->{po.gbar(c)!r}" for c in po.gbar.dom.points))
        report = {"version": REPORT_VERSION, "q": fmt(q), "points": _jsonable(list(po.D.points)),
                  "distances": po.D.to_json()["distances"],
                  "fbar": _jsonable([po.fbar(b) for b in po.fbar.dom.points]),
                  "gbar": _jsonable([po.gbar(c) for c in po.gbar.dom.points])}
        code = 0
        if competitor:
            top, bottom = inst.morphism(competitor[0]), inst.morphism(competitor[1])
            res = check_q_pushout_universal(po, top, bottom)
            if res:
                t = res.mediator
                lines.append("  mediating map: " + ", ".join(f"{p!r}->{t(p)!r}" for p in po.D.points))
                report["mediator"] = _jsonable([t(p) for p in po.D.points])
            else:
                lines.append(f"  violation: {res.message}")
                report["violation"] = res.message
                code = 1
    except PurityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, json_path, lines)
    return code


def cmd_verify(suites: Sequence[str], seed: int = 0, cases: int = 50, json_path: str | None = None) -> int:
    names = list(SUITES) if not suites or list(suites) == ["all"] else list(suites)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        print(f"error: unknown suite {unknown[0]!r}; known suites: {', '.join(SUITES)}", file=sys.stderr)
        return 2
    reports = []
    lines = []
    start = time.perf_counter()
    for name in names:
        try:
            rep = run_suite(name, seed, cases)
        except PurityError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        reports.append(rep)
        lines.extend(rep.lines())
    out = {"version": REPORT_VERSION, "suites": [r.to_json() for r in reports],
           "timing": {"seconds": round(time.perf_counter() - start, 3)}}
    _emit(out, json_path, lines)
    if any(r.errors for r in reports):
        return 2
    return 0 if all(r.ok for r in reports) else 1


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="purebench", description="Enriched purity workbench")
    p.add_argument("--guard", type=int, default=None, help="hom-size guard (overrides PURITY_GUARD)")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("validate", help="load and validate an instance file")
    v.add_argument("file")

    c = sub.add_parser("check", help="run a purity-style check (or every check in the file)")
    c.add_argument("file")
    c.add_argument("kind", nargs="?", choices=CHECK_KINDS)
    c.add_argument("f", nargs="?", help="morphism id (object id for injective/orthogonal)")
    c.add_argument("g", nargs="?", help="test morphism or family id")
    c.add_argument("--system")
    c.add_argument("--tolerance")
    c.add_argument("--formula")
    c.add_argument("--json", dest="json_path")

    q = sub.add_parser("qpushout", help="build a q-pushout and optionally test a competitor")
    q.add_argument("file")
    q.add_argument("g")
    q.add_argument("f")
    q.add_argument("q")
    q.add_argument("--competitor", nargs=2, metavar=("TOP", "BOTTOM"))
    q.add_argument("--json", dest="json_path")

    r = sub.add_parser("verify", help="run property suites")
    r.add_argument("suites", nargs="*", help="suite names, or 'all'")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--cases", type=int, default=50)
    r.add_argument("--json", dest="json_path")

    k = sub.add_parser("recheck", help="confirm the verdicts of a JSON check report")
    k.add_argument("report")
    k.add_argument("--instance")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.guard is not None:
        set_hom_guard(args.guard)
    try:
        if args.cmd == "validate":
            return cmd_validate(args.file)
        if args.cmd == "check":
            return cmd_check(args.file, args.kind, args.f, args.g, args.system, args.tolerance,
                             args.formula, args.json_path)
        if args.cmd == "qpushout":
            return cmd_qpushout(args.file, args.g, args.f, args.q, args.competitor, args.json_path)
        if args.cmd == "verify":
            return cmd_verify(args.suites, args.seed, args.cases, args.json_path)
        if args.cmd == "recheck":
            return cmd_recheck(args.report, args.instance)
    finally:
        if args.guard is not None:
            set_hom_guard(None)
    return 2


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
