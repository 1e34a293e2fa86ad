"""Seeded property suites.

Each suite draws ``cases`` random instances from a seeded generator, runs a
fixed list of named assertions on each, and also runs a handful of curated
regression instances.  A failing random instance is shrunk by deleting
points (metric spaces) or degrees (complexes) while the assertion keeps
failing, and the smallest failing instance is reported.

Every assertion carries a short ``claim`` naming the statement it exercises.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import generators as gen
from . import oracles
from .base import Map
from .dgab import (
    DG, FinComplex, GradedMap, chain_map, cone_complex, copower_map, disk_map, is_E_injective_dg,
    is_E_pure_dg, is_E_split_dg, is_ordinarily_injective_dg, is_ordinarily_pure_dg, is_split_dg,
    power_purity_check, shift, effective_window,
)
from .errors import PurityError, ValidationError
from .omega_cpo import CPO, FLAVORS, check_omega_pushout_cocone, is_dense_cpo, pure_wrt_cpo
from .pp_logic import Equation, PPFormula, interpret, is_elementary, psi_g, reduce_conjunction, same_interpretation
from .purity import (
    is_barely_E_pure, is_E_injective, is_E_pure, is_E_split, is_orthogonal,
    product_map, three_way, tolerance_grid, weakly_pure_at,
)
from .qmet import (
    QMET, QMetSpace, check_q_pushout_universal, map_from_list, q_commutes, q_pushout, space, tensor,
    two_point, nonexpanding_maps,
)
from .quantale import INF, FiniteQuantale, shipped_quantales

__all__ = ["SUITES", "Suite", "SuiteReport", "AssertionResult", "run_suite", "suite_names"]


# -- reports -------------------------------------------------------------------


@dataclass
class AssertionResult:
    name: str
    claim: str
    passed: int = 0
    failed: int = 0
    counterexample: object = None

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {"name": self.name, "claim": self.claim, "passed": self.passed, "failed": self.failed,
                "counterexample": self.counterexample}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int
    assertions: dict = field(default_factory=dict)
    elapsed: float = 0.0
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and all(a.ok for a in self.assertions.values())

    def record(self, name: str, claim: str, ok: bool, detail=None) -> None:
        res = self.assertions.setdefault(name, AssertionResult(name, claim))
        if ok:
            res.passed += 1
        else:
            res.failed += 1
            if res.counterexample is None:
                res.counterexample = detail

    def lines(self) -> list[str]:
        head = f"{self.suite} seed={self.seed} cases={self.cases}: {'PASS' if self.ok else 'FAIL'} ({self.elapsed:.1f}s)"
        out = [head]
        for a in self.assertions.values():
            mark = "ok  " if a.ok else "FAIL"
            out.append(f"  [{mark}] {a.name}: {a.passed} passed, {a.failed} failed  -- {a.claim}")
            if not a.ok:
                out.append(f"         counterexample: {a.counterexample}")
        for e in self.errors:
            out.append(f"  [ERR ] {e}")
        return out

    def to_json(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "cases": self.cases, "ok": self.ok,
                "elapsed": round(self.elapsed, 3), "errors": list(self.errors),
                "assertions": [a.to_json() for a in self.assertions.values()]}


# -- suite plumbing --------------------------------------------------------------

Check = tuple  # (assertion name, ok, detail)


@dataclass
class Suite:
    name: str
    description: str
    claims: dict                                  # assertion name -> claim
    generate: Callable[[random.Random, int], dict]
    check: Callable[[dict], list]
    curated: Callable[[], Iterable[dict]] = lambda: ()
    shrink: Callable[[dict], Iterable[dict]] | None = None


def _describe(inst: dict) -> dict:
    from .verdict import _jsonable

    out = {}
    for k, v in inst.items():
        if isinstance(v, Map):
            out[k] = _describe_map(v)
        elif isinstance(v, (list, tuple)) and v and isinstance(v[0], Map):
            out[k] = [_describe_map(m) for m in v]
        elif k.startswith("_"):
            continue
        else:
            out[k] = _jsonable(v)
    return out


def _describe_map(f: Map):
    from .verdict import _jsonable

    def obj(X):
        if hasattr(X, "to_json"):
            try:
                return X.to_json()
            except Exception:  # pragma: no cover - descriptive only
                return repr(X)
        return repr(X)

    if isinstance(f, GradedMap):
        return {"dom": obj(f.dom), "cod": obj(f.cod), "degree": f.degree,
                "matrices": {str(k): [list(r) for r in v] for k, v in f.comps.items()}}
    try:
        table = {repr(x): repr(f(x)) for x in f.dom.elements()}
    except Exception:
        table = repr(f)
    return {"dom": obj(f.dom), "cod": obj(f.cod), "table": _jsonable(table)}


def _minimize(suite: Suite, inst: dict, name: str) -> dict:
    if suite.shrink is None:
        return inst
    current = inst
    for _ in range(50):
        for smaller in suite.shrink(current):
            try:
                results = suite.check(smaller)
            except Exception:
                continue
            if any(n == name and not ok for n, ok, _ in results):
                current = smaller
                break
        else:
            return current
    return current


def run_suite(name: str, seed: int = 0, cases: int = 50) -> SuiteReport:
    """Run the named suite on ``cases`` random instances plus its curated ones."""
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValidationError(f"unknown suite {name!r}; known suites: {', '.join(SUITES)}") from None
    report = SuiteReport(name, seed, cases)
    start = time.perf_counter()
    rng = random.Random(seed)
    for inst in suite.curated():
        _run_case(suite, report, inst, curated=True)
    for i in range(cases):
        inst = suite.generate(rng, i)
        _run_case(suite, report, inst, curated=False)
        _clear_caches()
    report.elapsed = time.perf_counter() - start
    return report


def _clear_caches():
    for b in (QMET, CPO, DG):
        b.clear_cache()


def _run_case(suite, report, inst, curated):
    try:
        results = suite.check(inst)
    except PurityError as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
        return
    for n, ok, detail in results:
        prior = report.assertions.get(n)
        if not ok and (prior is None or prior.counterexample is None):
            small = inst if curated else _minimize(suite, inst, n)
            detail = {"detail": detail, "instance": _describe(small), "curated": curated}
        report.record(n, suite.claims.get(n, suite.claims.get(n.split("[")[0], n)), ok, detail)


def suite_names() -> list[str]:
    return list(SUITES)


# -- shrinking -------------------------------------------------------------------


def _restrict_space(X: QMetSpace, keep) -> QMetSpace:
    pts = [p for p in X.points if p in keep]
    return QMetSpace(X.quantale, pts, lambda a, b: X.d(a, b), name=X.name, validate=False)


def shrink_qmet_f(inst: dict) -> Iterable[dict]:
    """Delete a point from the domain of ``f``, or an unused point of its codomain."""
    f = inst["f"]
    K, L = f.dom, f.cod
    if len(K.points) > 1:
        for p in K.points:
            K2 = _restrict_space(K, set(K.points) - {p})
            yield {**inst, "f": Map(K2, L, {x: f(x) for x in K2.points})}
    used = f.image()
    for p in L.points:
        if p not in used and len(L.points) > 1:
            L2 = _restrict_space(L, set(L.points) - {p})
            yield {**inst, "f": Map(K, L2, {x: f(x) for x in K.points})}


def _drop_degree(X: FinComplex, n: int) -> FinComplex:
    groups = {k: X.group(k) for k in X.degrees() if k != n and X.group(k).rank}
    diffs = {k: X.diff(k) for k in X.degrees() if k not in (n, n + 1) and k in groups and k - 1 in groups}
    return FinComplex(groups, diffs, window=(X.lo, X.hi))


def shrink_dg_f(inst: dict) -> Iterable[dict]:
    """Delete one degree from both ends of ``f``."""
    f = inst["f"]
    K, L = f.dom, f.cod
    for n in sorted(set(K.degrees()) | set(L.degrees())):
        if not (K.group(n).rank or L.group(n).rank):
            continue
        K2, L2 = _drop_degree(K, n), _drop_degree(L, n)
        comps = {k: M for k, M in f.comps.items() if k != n and K2.group(k).rank}
        try:
            f2 = chain_map(K2, L2, {k: (M if L2.group(k).rank else ()) for k, M in comps.items()})
        except ValidationError:
            continue
        yield {**inst, "f": f2}


# -- instance helpers -----------------------------------------------------------------


def _qmet_pair(rng):
    return gen.random_qmet_pair(rng, 4), gen.random_test_map(rng)


def _cpo_pair(rng):
    K = gen.random_poset(rng, max_points=4, prefix="k")
    L = gen.random_poset(rng, max_points=4, prefix="l")
    A = gen.random_poset(rng, max_points=2, prefix="a")
    B = gen.random_poset(rng, max_points=3, prefix="b")
    return gen.random_monotone_map(rng, K, L), gen.random_monotone_map(rng, A, B)


def _dg_pair(rng):
    K, L = gen.random_complex(rng, 3, 4), gen.random_complex(rng, 3, 4)
    A, B = gen.random_complex(rng, 2, 4), gen.random_complex(rng, 2, 4)
    return gen.random_chain_map(rng, K, L), gen.random_chain_map(rng, A, B)


BASES = {"qmet": (QMET, _qmet_pair), "omega-cpo": (CPO, _cpo_pair), "dg-fin": (DG, _dg_pair)}
_ORDER = ("qmet", "omega-cpo", "dg-fin")


def _base_instance(rng, i):
    key = _ORDER[i % 3]
    base, make = BASES[key]
    f, g = make(rng)
    return {"base": key, "f": f, "g": g}


def _curated_inclusion():
    X = space([0, 1, 2], [[1, 2], [1]], name="line3")
    S = space([0, 2], [[2]], name="ends")
    return map_from_list(S, X, [0, 2])


def _shrink_by_base(inst):
    if inst.get("base") == "qmet":
        return shrink_qmet_f(inst)
    if inst.get("base") == "dg-fin":
        return shrink_dg_f(inst)
    return ()


def _ok(v) -> bool:
    return bool(v)


# -- quantale-laws ---------------------------------------------------------------------


def _ql_generate(rng, i):
    return {"record": gen.random_quantale_table(rng)}


def _ql_curated():
    for q in shipped_quantales().values():
        yield {"record": q.to_json()}


def _ql_check(inst):
    rec = inst["record"]
    try:
        q = FiniteQuantale.from_json(rec, validate=False)
    except ValidationError:
        q = None
    accepted = q is not None and not q.law_violations(stop_at_first=True)
    oracle = oracles.table_laws_hold(rec)
    out = [("validation-matches-oracle", accepted == oracle, {"accepted": accepted, "oracle": oracle})]
    if q is not None:
        els, rel = oracles._raw_order(rec)
        bad = [(a, b) for a in els for b in els
               if q.well_above(a, b) != oracles.well_above_by_subsets(els, rel, a, b)]
        out.append(("well-above-matches-subsets", not bad, {"pairs": bad[:3]}))
    return out


# -- factorization-laws ---------------------------------------------------------------------


def _random_object_map(base, rng):
    if base is QMET:
        X = gen.random_space(rng, max_points=3, prefix="x")
        Y = gen.random_space(rng, max_points=3, prefix="y")
        return gen.random_qmet_map(rng, X, Y)
    if base is CPO:
        X = gen.random_poset(rng, max_points=4, prefix="x")
        Y = gen.random_poset(rng, max_points=4, prefix="y")
        return gen.random_monotone_map(rng, X, Y)
    X, Y = gen.random_complex(rng, 2, 4), gen.random_complex(rng, 2, 4)
    return gen.random_chain_map(rng, X, Y)


def _fl_generate(rng, i):
    key = _ORDER[i % 3]
    base = BASES[key][0]
    h = _random_object_map(base, rng)
    h2 = _random_object_map(base, rng)
    return {"base": key, "h": h, "h2": h2, "_seed": rng.random()}


def _fl_check(inst):
    base = BASES[inst["base"]][0]
    h, h2 = inst["h"], inst["h2"]
    rng = random.Random(inst["_seed"])
    out = []
    for sname, system in base.systems().items():
        e, mid, m = system.factorize(h)
        out.append((f"recomposes[{sname}]", base.equal(base.compose(m, e), h), None))
        out.append((f"classes[{sname}]", system.in_E(e) and system.in_M(m), None))
        e2, mid2, m2 = system.factorize(h2)
        ds = base.morphisms(mid, mid2)
        if not ds:
            continue
        d = rng.choice(ds)
        u, v = base.compose(d, e), base.compose(m2, d)
        fill = system.fill(e, m2, u, v)
        brute = oracles.brute_fills(base, e, m2, u, v)
        ok = fill is not None and len(brute) == 1 and base.equal(fill, brute[0])
        out.append((f"unique-fill[{sname}]", ok, {"fills_found": len(brute)}))
    return out


# -- purity suites ------------------------------------------------------------------------


def _compose_instance(rng, i):
    key = _ORDER[i % 3]
    base = BASES[key][0]
    if base is QMET:
        M = gen.random_space(rng, max_points=4, prefix="m")
        f2 = gen.random_subspace_map(rng, M, prefix="l") if rng.random() < 0.7 else None
        if f2 is None:
            L = gen.random_space(rng, max_points=4, prefix="l")
            f2 = gen.random_qmet_map(rng, L, M)
        f1 = gen.random_subspace_map(rng, f2.dom) if rng.random() < 0.7 else \
            gen.random_qmet_map(rng, gen.random_space(rng, max_points=3), f2.dom)
        g = gen.random_test_map(rng)
        f3 = gen.random_qmet_pair(rng, 3)
        return {"base": key, "f1": f1, "f2": f2, "f3": f3, "g": g,
                "C": gen.random_space(rng, max_points=2, prefix="c")}
    elif base is CPO:
        K, L, M = (gen.random_poset(rng, max_points=4, prefix=p) for p in "klm")
        f1, f2 = gen.random_monotone_map(rng, K, L), gen.random_monotone_map(rng, L, M)
        _, g = _cpo_pair(rng)
        f3, _ = _cpo_pair(rng)
    else:
        K, L, M = (gen.random_complex(rng, 2, 4) for _ in range(3))
        f1, f2 = gen.random_chain_map(rng, K, L), gen.random_chain_map(rng, L, M)
        _, g = _dg_pair(rng)
        f3 = None
    return {"base": key, "f1": f1, "f2": f2, "f3": f3, "g": g}


def _pc_check(inst):
    base = BASES[inst["base"]][0]
    f1, f2, g, f3 = inst["f1"], inst["f2"], inst["g"], inst["f3"]
    out = []
    comp = base.compose(f2, f1)
    for sname, system in base.systems().items():
        p1, p2 = bool(is_E_pure(base, system, f1, g)), bool(is_E_pure(base, system, f2, g))
        if p1 and p2:
            out.append((f"composite-pure[{sname}]", bool(is_E_pure(base, system, comp, g)), None))
        if f3 is not None and system.shape != "iso-all":
            # binary products, for systems whose E is stable under products
            p3 = bool(is_E_pure(base, system, f3, g))
            if p1 and p3:
                prod = product_map(base, f1, f3)
                out.append((f"product-pure[{sname}]", bool(is_E_pure(base, system, prod, g)), None))
    if base is QMET and len(f1.dom.points) <= 3:
        C = inst["C"]
        for sname, system in base.systems().items():
            lhs = bool(is_E_pure(base, system, QMET.postcompose(C, f1), g))
            gC = _tensor_map(g, C)
            rhs = bool(is_E_pure(base, system, f1, gC))
            out.append((f"copower-transport[{sname}]", lhs == rhs, {"hom_side": lhs, "tensor_side": rhs}))
    return out


def _tensor_map(g: Map, C: QMetSpace) -> Map:
    A, B = tensor(g.dom, C), tensor(g.cod, C)
    return Map(A, B, lambda p: (g(p[0]), p[1]))


def _cancel_check(inst):
    base = BASES[inst["base"]][0]
    f1, f2, g = inst["f1"], inst["f2"], inst["g"]
    comp = base.compose(f2, f1)
    out = []
    for sname, system in base.systems().items():
        if not system.proper:
            continue
        if is_E_pure(base, system, comp, g):
            out.append((f"left-cancel[{sname}]", bool(is_E_pure(base, system, f1, g)), None))
    return out


_SHIFT_ORDER = ("iso-all", None, "all-iso")  # None: the base's image-shaped system


def _image_system(base):
    return next(s for s in base.systems().values() if s.shape == "image")


def _pib_check(inst):
    base = BASES[inst["base"]][0]
    f, g = inst["f"], inst["g"]
    out = []
    barely = {}
    for sname, system in base.systems().items():
        p = bool(is_E_pure(base, system, f, g))
        b = bool(is_barely_E_pure(base, system, f, g))
        barely[system.shape] = b
        out.append((f"pure-implies-barely[{sname}]", (not p) or b, {"pure": p, "barely": b}))
    chain = ("iso-all", "image", "all-iso")
    for lo, hi in zip(chain, chain[1:]):
        out.append((f"bare-shift[{lo}->{hi}]", (not barely[lo]) or barely[hi], None))
    return out


def _psc_check(inst):
    base = BASES[inst["base"]][0]
    f, g = inst["f"], inst["g"]
    out = []
    for sname, system in base.systems().items():
        if not system.pullback_stable:
            continue
        p = bool(is_E_pure(base, system, f, g))
        b = bool(is_barely_E_pure(base, system, f, g))
        out.append((f"pure-iff-barely[{sname}]", p == b, {"pure": p, "barely": b}))
    return out


# -- qmet-equivalence ------------------------------------------------------------------------


def _qe_generate(rng, i):
    f = gen.random_qmet_pair(rng, 4)
    family = [gen.random_test_map(rng) for _ in range(rng.randint(1, 2))]
    return {"base": "qmet", "f": f, "family": family}


def _qe_check(inst):
    tw = three_way(inst["f"], inst["family"])
    return [("three-way-agree", tw.agree, {"pure": tw.pure, "barely": tw.barely, "weakly": tw.weakly,
                                           "closed_family_size": tw.family_size})]


def _qe_curated_check(inst):
    f = inst["f"]
    out = _qe_check(inst)
    out.append(("curated-not-pure", not is_E_pure(QMET, "surjective-isometry", f, f), None))
    brute_ok, _ = oracles.brute_pure_qmet(f, f)
    out.append(("curated-not-pure-brute", not brute_ok, None))
    w = bool(weakly_pure_at(f, f, Fraction(1, 2)))
    out.append(("curated-weak-half-matches-search", w == _brute_weak(f, f, Fraction(1, 2)), {"weakly": w}))
    out.append(("curated-weak-at-one", bool(weakly_pure_at(f, f, 1)), None))
    return out


def _brute_weak(f, g, q):
    """Weak purity at ``q`` by enumerating every map involved."""
    Q = f.dom.quantale
    maps = lambda X, Y: [Map(X, Y, dict(zip(X.points, t))) for t in nonexpanding_maps(X, Y)]
    ts = maps(g.cod, f.dom)
    for u in maps(g.dom, f.dom):
        for v in maps(g.cod, f.cod):
            gap = Q.join(f.cod.d(f(u(a)), v(g(a))) for a in g.dom.points)
            if not Q.leq(gap, q):
                continue
            if not any(Q.leq(Q.join(f.dom.d(t(g(a)), u(a)) for a in g.dom.points), Q.plus(q, q)) for t in ts):
                return False
            break
    return True


def _qe_check_dispatch(inst):
    return _qe_curated_check(inst) if inst.get("curated") else _qe_check(inst)


# -- qmet-qpushout-universal -------------------------------------------------------------------


def _qp_generate(rng, i):
    A = gen.random_space(rng, max_points=2, prefix="a")
    B = gen.random_space(rng, max_points=3, prefix="b")
    C = gen.random_space(rng, max_points=3, prefix="c")
    g, f = gen.random_qmet_map(rng, A, B), gen.random_qmet_map(rng, A, C)
    grid = [Fraction(0)] + tolerance_grid([A, B, C])
    q = rng.choice(grid)
    E = gen.random_space(rng, max_points=3, prefix="e")
    top, bottom = _q_competitor(rng, g, f, q, E)
    return {"g": g, "f": f, "q": q, "top": top, "bottom": bottom}


def _q_competitor(rng, g, f, q, E):
    tops = [Map(g.cod, E, dict(zip(g.cod.points, t))) for t in nonexpanding_maps(g.cod, E)]
    bots = [Map(f.cod, E, dict(zip(f.cod.points, t))) for t in nonexpanding_maps(f.cod, E)]
    pairs = [(t, b) for t in tops for b in bots if q_commutes(g, f, t, b, q)]
    return rng.choice(pairs)


def _qp_curated():
    A = space(["a"], [])
    B = space(["b0", "b1"], [[1]])
    C = space(["c"], [])
    g = map_from_list(A, B, ["b0"])
    f = map_from_list(A, C, ["c"])
    yield {"g": g, "f": f, "q": Fraction(1, 2), "top": None, "bottom": None, "curated": True}


def _qp_check(inst):
    g, f, q = inst["g"], inst["f"], inst["q"]
    po = q_pushout(g, f, q)
    out = [("legs-q-commute", po.commutes(), None)]
    if inst.get("curated"):
        D = po.D
        b0, b1, c = po.fbar("b0"), po.fbar("b1"), po.gbar("c")
        got = (D.d(b0, c), D.d(b1, c), D.d(b0, b1))
        out.append(("worked-example-distances", got == (Fraction(1, 2), Fraction(3, 2), Fraction(1)),
                    {"distances": [str(x) for x in got]}))
        return out
    rep = check_q_pushout_universal(po, inst["top"], inst["bottom"])
    out.append(("unique-mediator", rep.competitor_ok and rep.unique, {"message": rep.message}))
    if q == 0:
        oracle = oracles.ordinary_pushout_distances(g, f)
        legs = {**{("B", b): po.fbar(b) for b in g.cod.points}, **{("C", c): po.gbar(c) for c in f.cod.points}}
        same = all(po.D.d(legs[u], legs[v]) == d for (u, v), d in oracle.items())
        out.append(("q0-matches-pushout-oracle", same, None))
    return out


# -- cpo-collapse ----------------------------------------------------------------------------


def _cpo_generate(rng, i):
    f, g = _cpo_pair(rng)
    C = gen.random_poset(rng, max_points=3, prefix="c")
    return {"base": "omega-cpo", "f": f, "g": g, "h": gen.random_monotone_map(rng, g.dom, C),
            "_seed": rng.random()}


def _cpo_check(inst):
    f, g, h = inst["f"], inst["g"], inst["h"]
    verdicts = {fl: bool(pure_wrt_cpo(f, g, fl)) for fl in FLAVORS}
    generic = bool(is_E_pure(CPO, "dense-embedding", f, g))
    out = [("flavors-agree", len(set(verdicts.values())) == 1, verdicts),
           ("flavors-match-generic", verdicts["pure"] == generic, {"generic": generic})]
    system = CPO.system("dense-embedding")
    e, mid, m = system.factorize(f)
    out.append(("dense-embedding-factorization",
                CPO.equal(CPO.compose(m, e), f) and is_dense_cpo(e) and CPO.is_embedding(m), None))
    D, gbar, fbar = CPO.pushout(g, h)
    rng = random.Random(inst["_seed"])
    E = gen.random_poset(rng, max_points=3, prefix="e")
    t = gen.random_monotone_map(rng, D, E)
    comp = (E, CPO.compose(t, gbar), [CPO.compose(t, fbar)])
    rep = check_omega_pushout_cocone(g, h, (D, gbar, [fbar]), [comp])
    out.append(("omega-pushout-cocone", rep.ok, {"problems": rep.problems}))
    return out


# -- dg suites ---------------------------------------------------------------------------------


def _dg_generate(rng, i):
    f, g = _dg_pair(rng)
    return {"base": "dg-fin", "f": f, "g": g}


def _dg_proto_check(inst):
    f, g = inst["f"], inst["g"]
    a = bool(is_E_pure(DG, "regepi-mono", f, g))
    b = bool(is_E_pure_dg(f, g))
    return [("proto-route-equals-definition", a == b, {"definition": a, "proto": b})]


def _dg_split_generate(rng, i):
    K, L = gen.random_complex(rng, 2, 4), gen.random_complex(rng, 2, 4)
    return {"base": "dg-fin", "s": gen.random_chain_map(rng, K, L)}


def _protosplit():
    K = FinComplex({-1: [2]}, name="Z/2[-1]")
    return chain_map(K, cone_complex(2), {-1: [[1]]})


def _dg_split_curated():
    yield {"base": "dg-fin", "s": _protosplit(), "curated": True}


def _dg_split_check(inst):
    s = inst["s"]
    try:
        v = is_E_split_dg(s)
    except PurityError as exc:
        return [("split-routes-agree", False, str(exc))]
    out = [("split-routes-agree", True, None),
           ("generic-E-split-matches", v.outcome == is_E_split(DG, "regepi-mono", s), None)]
    if is_split_dg(s):
        out.append(("split-implies-E-split", v.outcome, None))
    if inst.get("curated"):
        out.append(("protosplit-not-split", v.outcome and not is_split_dg(s), None))
    return out


def _dg_power_check(inst):
    f, g = inst["f"], inst["g"]
    pc = power_purity_check(f, g)
    out = [("powers-characterize-E-purity", pc.agree, {"e_pure": pc.e_pure, "per_degree": pc.per_degree})]
    copowers = all(bool(is_ordinarily_pure_dg(f, copower_map(n, g))) for n in effective_window(f, g))
    out.append(("copower-ordinary-implies-E-pure", (not copowers) or pc.e_pure, None))
    if inst.get("curated"):
        out.append(("E-pure-not-ordinary-witness",
                    pc.e_pure and not is_ordinarily_pure_dg(f, g), None))
    return out


def _dg_power_curated():
    s = _protosplit()
    from .dgab import zero_complex

    K = s.dom
    f = chain_map(K, zero_complex(), {})
    yield {"base": "dg-fin", "f": f, "g": s, "curated": True}


def suspension_instance():
    """``B`` with ``Z/3`` in degree 1 and the generator map ``P_0 -> C_2``."""
    B = FinComplex({1: [3]}, name="B")
    h = disk_map(0, cone_complex(2), (1,))
    return B, h


def _dg_cex_check(inst):
    B, h = suspension_instance()
    a = is_ordinarily_injective_dg(B, h)
    b = is_ordinarily_injective_dg(shift(B, -1), h)
    c = is_E_injective_dg(B, h)
    generic = is_E_injective(DG, "regepi-mono", B, [h])[0].outcome
    return [("ordinary-injective-B", a is True, None),
            ("ordinary-injective-shifted-B-fails", b is False, None),
            ("E-injective-B-fails", c is False, None),
            ("generic-E-injectivity-agrees", generic == c, None)]


# -- closure suites -----------------------------------------------------------------------------


def _inj_check(inst):
    base = BASES[inst["base"]][0]
    f, g = inst["f"], inst["g"]
    out = []
    for sname, system in base.systems().items():
        L_inj = is_E_injective(base, system, f.cod, [g])[0].outcome
        if not L_inj or not is_E_pure(base, system, f, g):
            continue
        K_inj = is_E_injective(base, system, f.dom, [g])[0].outcome
        out.append((f"injectivity-inherited[{sname}]", K_inj, None))
    return out


def _generating_family(spaces) -> list:
    """Maps ``2_inf -> 2_e`` that are the identity on points, ``e`` over the tolerance grid."""
    vals = tolerance_grid(spaces)
    src = two_point(INF)
    return [Map(src, two_point(e), {0: 0, 1: 1}) for e in vals]


def _orth_generate(rng, i):
    f, g = _qmet_pair(rng)
    C = gen.random_space(rng, max_points=2, prefix="c")
    return {"base": "qmet", "f": f, "g": g, "C": C}


def _orth_check(inst):
    f, g, C = inst["f"], inst["g"], inst["C"]
    out = []
    A, B = g.dom, g.cod
    m_hyp = QMET.is_embedding(QMET.postcompose(A, f)) and QMET.is_embedding(QMET.postcompose(B, f))
    for sname, system in QMET.systems().items():
        pure = bool(is_E_pure(QMET, system, f, g))
        if is_orthogonal(QMET, f.cod, g) and pure and m_hyp:
            out.append((f"orthogonality-inherited[{sname}]", is_orthogonal(QMET, f.dom, g), None))
        if is_orthogonal(QMET, f.dom, g):
            out.append((f"orthogonal-implies-injective[{sname}]",
                        is_E_injective(QMET, system, f.dom, [g])[0].outcome, None))
    fam = _generating_family([f.dom, f.cod])
    system = QMET.system("surjective-isometry")
    if all(is_E_pure(QMET, system, f, h) for h in fam):
        out.append(("hom-map-is-isometry", QMET.is_embedding(QMET.postcompose(C, f)), None))
    return out


# -- pp-elementary-equivalence ---------------------------------------------------------------------


def _pp_check(inst):
    base = BASES[inst["base"]][0]
    f, g = inst["f"], inst["g"]
    out = []
    phi = psi_g(g, base)
    for sname, system in base.systems().items():
        p = bool(is_E_pure(base, system, f, g))
        e = bool(is_elementary(base, f, phi, system))
        out.append((f"elementary-iff-pure[{sname}]", p == e, {"pure": p, "elementary": e}))
    system = _image_system(base)
    K = f.dom
    top = interpret(base, K, phi, system)
    img = system.factorize(base.precompose(g, K))[2]
    out.append(("psi-g-is-image", system.same_subobject(top.m, img), None))
    if base is QMET and len(g.dom.points) <= 2:
        eqs = [Equation(QMET.identity(g.dom), g), Equation(QMET.identity(g.dom), g)]
        two = PPFormula(g.dom, g.cod, eqs, exists_y=False)
        red = reduce_conjunction(QMET, two, system)
        out.append(("conjunction-reduces-to-coproduct",
                    same_interpretation(system, interpret(QMET, K, two, system), interpret(QMET, K, red, system)),
                    None))
    return out


# -- trivial-systems ------------------------------------------------------------------------------


def _trivial_check(inst):
    base = BASES[inst["base"]][0]
    f, g = inst["f"], inst["g"]
    out = []
    for system in base.systems().values():
        if system.shape == "all-iso":
            out.append(("all-iso-everything-pure", bool(is_E_pure(base, system, f, g)), None))
        if system.shape == "iso-all":
            pure = bool(is_E_pure(base, system, f, g))
            out.append(("iso-all-pure-iff-pullback", pure == _square_is_pullback(base, f, g), {"pure": pure}))
    return out


def _square_is_pullback(base, f, g) -> bool:
    """Whether ``K(B, K)`` is the pullback of ``K(A, f)`` and ``K(g, L)``, checked directly."""
    K, L, A, B = f.dom, f.cod, g.dom, g.cod
    pre_K, pre_L = base.precompose(g, K), base.precompose(g, L)
    post_A, post_B = base.postcompose(A, f), base.postcompose(B, f)
    HBK, HAK, HBL = base.hom(B, K), base.hom(A, K), base.hom(B, L)
    if base is DG:
        lo = min(H.lo for H in (HBK, HAK, HBL))
        hi = max(H.hi for H in (HBK, HAK, HBL))
        blocks = [([(n, x) for x in _graded(HBK, n)], [(n, x) for x in _graded(HAK, n)],
                   [(n, x) for x in _graded(HBL, n)]) for n in range(lo, hi + 1)]
    else:
        blocks = [(list(HBK.elements()), list(HAK.elements()), list(HBL.elements()))]
    pairs = {}
    for ts, us, vs in blocks:
        for t in ts:
            key = (pre_K(t), post_B(t))
            if key in pairs:
                return False
            pairs[key] = t
        for u in us:
            for v in vs:
                if post_A(u) == pre_L(v) and (u, v) not in pairs:
                    return False
    if base is QMET:
        for (k1, t1), (k2, t2) in ((a, b) for a in pairs.items() for b in pairs.items()):
            joint = K.quantale.join([HAK.d(k1[0], k2[0]), HBL.d(k1[1], k2[1])])
            if HBK.d(t1, t2) != joint:
                return False
    if base is CPO:
        for (k1, t1), (k2, t2) in ((a, b) for a in pairs.items() for b in pairs.items()):
            if HBK.leq(t1, t2) != (HAK.leq(k1[0], k2[0]) and HBL.leq(k1[1], k2[1])):
                return False
    return True


def _graded(H, n):
    if H.lo <= n <= H.hi:
        return H.group_elements(n)
    return [H.zero(n)]


# -- catalogue --------------------------------------------------------------------------------------


def _curated_qe():
    f = _curated_inclusion()
    yield {"base": "qmet", "f": f, "family": [f], "curated": True}


SUITES: dict[str, Suite] = {}


def _register(s: Suite):
    SUITES[s.name] = s


_register(Suite(
    "quantale-laws", "finite-table quantale validation against exhaustive oracles",
    {"validation-matches-oracle": "validation accepts exactly the law-satisfying tables",
     "well-above-matches-subsets": "well-above closed form equals its subset definition"},
    _ql_generate, _ql_check, _ql_curated))
_register(Suite(
    "factorization-laws", "factorize, class membership and unique diagonal fill-ins on all bases",
    {"recomposes": "m o e equals the factored map",
     "classes": "e lies in E and m lies in M",
     "unique-fill": "the diagonal fill-in exists and is the only one"},
    _fl_generate, _fl_check))
_register(Suite(
    "purity-composition", "composites, binary products and copower transport of pure maps",
    {"composite-pure": "a composite of pure maps is pure",
     "product-pure": "a binary product of pure maps is pure",
     "copower-transport": "K(C, f) is pure for g iff f is pure for the transposed test map"},
    _compose_instance, _pc_check))
_register(Suite(
    "purity-cancellation", "pure composites are pure in their first factor (proper systems)",
    {"left-cancel": "if f2 o f1 is pure then f1 is pure"},
    _compose_instance, _cancel_check))
_register(Suite(
    "pure-implies-barely", "pure maps are barely pure; bare purity grows with E",
    {"pure-implies-barely": "every pure map is barely pure",
     "bare-shift": "barely pure for a smaller E gives barely pure for a larger one"},
    _base_instance, _pib_check, shrink=_shrink_by_base))
_register(Suite(
    "pullback-stable-coincidence", "pure and barely pure coincide when E is pullback-stable",
    {"pure-iff-barely": "pure and barely pure agree"},
    _base_instance, _psc_check, shrink=_shrink_by_base))
_register(Suite(
    "qmet-equivalence", "pure, barely pure and weakly pure agree over q-pushout-closed families",
    {"three-way-agree": "the three metric purity notions agree",
     "curated-not-pure": "the end-point inclusion into the 3-point line is not pure",
     "curated-not-pure-brute": "exhaustive lifting search confirms it",
     "curated-weak-half-matches-search": "weak purity at 1/2 equals exhaustive search",
     "curated-weak-at-one": "weak purity holds at tolerance 1"},
    _qe_generate, _qe_check_dispatch, _curated_qe, shrink=None))
_register(Suite(
    "qmet-qpushout-universal", "q-pushouts have unique mediators; at q = 0 they are pushouts",
    {"unique-mediator": "every q-commutative competitor factors uniquely",
     "q0-matches-pushout-oracle": "the q = 0 construction equals the merge-first pushout",
     "legs-q-commute": "the constructed square q-commutes",
     "worked-example-distances": "the 3-point worked example"},
    _qp_generate, _qp_check, _qp_curated))
_register(Suite(
    "cpo-collapse", "chain-based purity flavours coincide on finite posets",
    {"flavors-agree": "pure, barely and square flavours agree",
     "flavors-match-generic": "chain flavours equal the factorization route",
     "dense-embedding-factorization": "dense/embedding factorization validates",
     "omega-pushout-cocone": "pushouts are omega-pushout cocones with unique mediators"},
    _cpo_generate, _cpo_check))
_register(Suite(
    "dg-proto-equivalence", "protomorphism lifting equals the factorization definition",
    {"proto-route-equals-definition": "purity via graded squares equals purity via the comparison map"},
    _dg_generate, _dg_proto_check, shrink=shrink_dg_f))
_register(Suite(
    "dg-split-equivalence", "E-split monos: surjective restriction iff a graded retraction",
    {"split-routes-agree": "the two E-split routes agree",
     "generic-E-split-matches": "the generic predicate agrees",
     "split-implies-E-split": "split monos are E-split",
     "protosplit-not-split": "a graded retraction exists without a chain retraction"},
    _dg_split_generate, _dg_split_check, _dg_split_curated))
_register(Suite(
    "dg-power-equivalence", "E-purity equals ordinary purity of every disk power",
    {"powers-characterize-E-purity": "E-pure iff every disk power is ordinarily pure",
     "copower-ordinary-implies-E-pure": "ordinary purity against disk copowers gives E-purity",
     "E-pure-not-ordinary-witness": "a stored E-pure map that is not ordinarily pure"},
    _dg_generate, _dg_power_check, _dg_power_curated, shrink=shrink_dg_f))
_register(Suite(
    "dg-counterexample", "injectivity is not closed under suspension",
    {"ordinary-injective-B": "B is ordinarily injective",
     "ordinary-injective-shifted-B-fails": "its desuspension is not",
     "E-injective-B-fails": "B is not E-injective",
     "generic-E-injectivity-agrees": "the generic predicate agrees"},
    lambda rng, i: {}, _dg_cex_check))
_register(Suite(
    "injectivity-closure", "E-injectivity passes to E-pure subobjects",
    {"injectivity-inherited": "if L is injective for g and f: K -> L is pure for g, so is K"},
    _base_instance, _inj_check, shrink=_shrink_by_base))
_register(Suite(
    "orthogonality-closure", "orthogonality passes to pure subobjects with embedding hom maps",
    {"hom-map-is-isometry": "purity against the two-point family makes hom maps isometric",
     "orthogonality-inherited": "if L is orthogonal to g and f: K -> L is pure with isometric hom maps, so is K",
     "orthogonal-implies-injective": "orthogonality gives injectivity since E contains the isomorphisms"},
    _orth_generate, _orth_check, shrink=shrink_qmet_f))
_register(Suite(
    "pp-elementary-equivalence", "elementary for the lifting formula iff pure",
    {"elementary-iff-pure": "f is elementary for psi_g exactly when it is pure for g",
     "psi-g-is-image": "the lifting formula is interpreted by the image of restriction",
     "conjunction-reduces-to-coproduct": "a conjunction equals one equation over a coproduct"},
    _base_instance, _pp_check, shrink=_shrink_by_base))
_register(Suite(
    "trivial-systems", "degenerate factorization systems",
    {"all-iso-everything-pure": "with E all maps every map is pure",
     "iso-all-pure-iff-pullback": "with E the isos purity means the hom square is a pullback"},
    _base_instance, _trivial_check, shrink=_shrink_by_base))
