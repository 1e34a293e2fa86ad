"""Base-generic purity, injectivity and orthogonality predicates.

For ``f: K -> L`` and a test map ``g: A -> B``:

* ``P(g, L)`` is the middle object of the (E, M)-factorization of
  ``K(g, L): K(B, L) -> K(A, L)``;
* ``P(g, f)`` is the pullback of ``P(g, L) -> K(A, L)`` along ``K(A, f)``;
* ``r: K(B, K) -> P(g, f)`` is induced by ``K(g, K)`` and ``e o K(B, f)``;
  ``f`` is E-pure with respect to ``g`` when ``r`` is in E.

For bare purity, ``K->(g, f)`` is the pullback of ``K(A, f)`` and ``K(g, L)``
(pairs ``(u, v)`` with ``f u = v g``), its first projection ``p`` factors as
``p'' o p'`` and ``q = p' o q'`` where ``q'(t) = (t g, f t)``; ``f`` is barely
E-pure with respect to ``g`` when ``q`` is in E.

Every positive verdict carries lifts that are re-checked by an independent
routine before the verdict is returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .base import EnrichedBase, FactorizationSystem, Map
from .errors import PurityError
from .verdict import PurityVerdict

__all__ = [
    "PFactorization",
    "QFactorization",
    "p_factorization",
    "q_factorization",
    "is_E_pure",
    "is_barely_E_pure",
    "is_E_pure_family",
    "is_barely_E_pure_family",
    "is_ordinarily_pure",
    "weakly_pure_at",
    "weakly_pure",
    "tolerance_grid",
    "q_pushout_closure",
    "three_way",
    "ThreeWay",
    "is_E_injective",
    "is_orthogonal",
    "is_E_split",
    "product_map",
    "search_bare_transfer",
    "resolve_system",
    "MAX_WITNESS",
]

MAX_WITNESS = 32


def resolve_system(base: EnrichedBase, system) -> FactorizationSystem:
    if isinstance(system, FactorizationSystem):
        return system
    if system is None:
        return base.default_system
    return base.system(system)


@dataclass
class PFactorization:
    pre_L: Map          # K(g, L)
    e: Map              # K(B, L) -> P(g, L)
    m: Map              # P(g, L) -> K(A, L)
    post_A: Map         # K(A, f)
    Pgf: object         # P(g, f)
    p1: Map             # P(g, f) -> K(A, K)
    p2: Map             # P(g, f) -> P(g, L)
    r: Map              # K(B, K) -> P(g, f)


@dataclass
class QFactorization:
    arrow: object       # K->(g, f)
    p: Map              # first projection
    p1: Map             # p'
    Q: object           # Q(g, f)
    p2: Map             # p''
    q_prime: Map        # t -> (t g, f t)
    q: Map              # p' o q'


def p_factorization(base: EnrichedBase, system, f: Map, g: Map) -> PFactorization:
    system = resolve_system(base, system)
    K, L = f.dom, f.cod
    A, B = g.dom, g.cod
    pre_L = base.precompose(g, L)
    pre_K = base.precompose(g, K)
    e, _, m = system.factorize(pre_L)
    post_A = base.postcompose(A, f)
    post_B = base.postcompose(B, f)
    Pgf, p1, p2 = base.pullback(post_A, m)
    r = base.pair_into(Pgf, pre_K, base.compose(e, post_B))
    return PFactorization(pre_L, e, m, post_A, Pgf, p1, p2, r)


def q_factorization(base: EnrichedBase, system, f: Map, g: Map) -> QFactorization:
    system = resolve_system(base, system)
    K = f.dom
    A, B = g.dom, g.cod
    pre_L = base.precompose(g, f.cod)
    pre_K = base.precompose(g, K)
    post_A = base.postcompose(A, f)
    post_B = base.postcompose(B, f)
    arrow, p, _ = base.pullback(post_A, pre_L)
    p1, Q, p2 = system.factorize(p)
    q_prime = base.pair_into(arrow, pre_K, post_B)
    q = base.compose(p1, q_prime)
    return QFactorization(arrow, p, p1, Q, p2, q_prime, q)


def _lifts(base: EnrichedBase, comparison: Map, project: Map) -> tuple[dict, object]:
    """Preimages under ``comparison``, keyed by ``project`` of the image.

    Returns ``(lifts, missing)`` where ``missing`` is an element of the
    codomain with no preimage, or ``None``.
    """
    gaps = base.image_gaps(comparison)
    if gaps:
        return {}, gaps[0]
    lifts = {}
    for t in comparison.dom.elements():
        lifts.setdefault(project(comparison(t)), t)
    return lifts, None


def _recheck_lifts(base, pre_K: Map, lifts: dict) -> bool:
    return all(pre_K(t) == u for u, t in lifts.items())


def _sample(d: dict) -> list:
    """Up to ``MAX_WITNESS`` pairs ``[u, t]`` with ``t g = u``."""
    return [[u, t] for u, t in list(d.items())[:MAX_WITNESS]]


def is_E_pure(base: EnrichedBase, system, f: Map, g: Map) -> PurityVerdict:
    system = resolve_system(base, system)
    pf = p_factorization(base, system, f, g)
    if system.shape == "all-iso":
        return PurityVerdict(True, "pure", witness={"reason": "E contains every map"})
    if system.shape == "iso-all":
        ok = base.is_iso(pf.r)
        if ok:
            return PurityVerdict(True, "pure", witness={"reason": "comparison map is invertible"})
        return PurityVerdict(False, "pure", counterexample={"reason": "comparison map is not invertible"})
    lifts, missing = _lifts(base, pf.r, pf.p1)
    if missing is not None:
        u = pf.p1(missing)
        fu = pf.post_A(u)
        v = next((x for x in pf.pre_L.dom.elements() if pf.pre_L(x) == fu), None)
        return PurityVerdict(False, "pure", counterexample={"u": u, "fu": fu, "v": v})
    pre_K = base.precompose(g, f.dom)
    if not _recheck_lifts(base, pre_K, lifts):
        raise PurityError("internal error: a lift failed re-verification")
    return PurityVerdict(True, "pure", witness={"lifts": _sample(lifts), "count": len(lifts)})


def is_barely_E_pure(base: EnrichedBase, system, f: Map, g: Map) -> PurityVerdict:
    system = resolve_system(base, system)
    qf = q_factorization(base, system, f, g)
    if system.shape == "all-iso":
        return PurityVerdict(True, "barely", witness={"reason": "E contains every map"})
    if system.shape == "iso-all":
        ok = base.is_iso(qf.q)
        if ok:
            return PurityVerdict(True, "barely", witness={"reason": "comparison map is invertible"})
        return PurityVerdict(False, "barely", counterexample={"reason": "comparison map is not invertible"})
    lifts, missing = _lifts(base, qf.q, qf.p2)
    if missing is not None:
        u = qf.p2(missing)
        return PurityVerdict(False, "barely", counterexample={"u": u})
    pre_K = base.precompose(g, f.dom)
    if not _recheck_lifts(base, pre_K, lifts):
        raise PurityError("internal error: a lift failed re-verification")
    return PurityVerdict(True, "barely", witness={"lifts": _sample(lifts), "count": len(lifts)})


def _family(base, system, f, family, test, kind) -> PurityVerdict:
    checked = 0
    for i, g in enumerate(family):
        v = test(base, system, f, g)
        checked += 1
        if not v:
            return PurityVerdict(False, kind, counterexample={"test_map": i, "detail": v.counterexample})
    return PurityVerdict(True, kind, witness={"test_maps": checked})


def is_E_pure_family(base, system, f: Map, family: Iterable[Map]) -> PurityVerdict:
    return _family(base, system, f, family, is_E_pure, "pure")


def is_barely_E_pure_family(base, system, f: Map, family: Iterable[Map]) -> PurityVerdict:
    return _family(base, system, f, family, is_barely_E_pure, "barely")


def is_ordinarily_pure(base: EnrichedBase, f: Map, g: Map) -> PurityVerdict:
    """Diagonal lifting for squares of actual morphisms."""
    K, L = f.dom, f.cod
    A, B = g.dom, g.cod
    pre_L = base.precompose(g, L)
    pre_K = base.precompose(g, K)
    post = base.postcompose(A, f)
    vg = {pre_L(v) for v in base.morphism_elements(B, L)}
    tg = {pre_K(t) for t in base.morphism_elements(B, K)}
    for u in base.morphism_elements(A, K):
        if post(u) in vg and u not in tg:
            return PurityVerdict(False, "ordinary", counterexample={"u": u})
    return PurityVerdict(True, "ordinary", witness={})


# -- tolerance-indexed purity (metric base) ----------------------------------


def weakly_pure_at(f: Map, g: Map, q_value) -> PurityVerdict:
    """Every q-commutative square over ``(f, g)`` has ``t`` with ``t g ~_{2q} u``."""
    from .qmet import QMET

    K, L = f.dom, f.cod
    A, B = g.dom, g.cod
    Q = K.quantale
    tol = Q.check(q_value)
    bound = Q.plus(tol, tol)
    H_AK = QMET.hom(A, K)
    H_AL = QMET.hom(A, L)
    pre_L = QMET.precompose(g, L)
    pre_K = QMET.precompose(g, K)
    post = QMET.postcompose(A, f)
    vgs = {pre_L(v): v for v in QMET.hom(B, L).points}
    tgs = {pre_K(t): t for t in QMET.hom(B, K).points}
    for u in H_AK.points:
        fu = post(u)
        square = next((vgs[x] for x in vgs if Q.leq(H_AL.d(fu, x), tol)), None)
        if square is None:
            continue
        lift = next((tgs[x] for x in tgs if Q.leq(H_AK.d(x, u), bound)), None)
        if lift is None:
            return PurityVerdict(False, "weakly", counterexample={"q": tol, "u": u, "v": square})
    return PurityVerdict(True, "weakly", witness={"q": tol})


def tolerance_grid(spaces: Iterable, quantale=None) -> list:
    """Tolerances at which the tolerance-indexed predicates are evaluated.

    Finite-table quantales use every element well above zero.  For the
    interval quantales the grid is built from the distances ``D`` occurring in
    the spaces together with their halves, so every interval on which the
    predicates are constant (breakpoints lie in ``D`` and ``D/2``) contains a
    grid point, including one below half the least positive distance and one
    above the largest.
    """
    spaces = list(spaces)
    if quantale is None:
        quantale = spaces[0].quantale
    if quantale.is_finite():
        return quantale.strictly_positive_cone()
    from .quantale import INF

    ds = set()
    for X in spaces:
        ds |= {d for d in X.distances() if d is not INF}
    ds |= {d / 2 for d in ds}
    grid = quantale.strictly_positive_cone(ds)
    # one tolerance past every finite distance, so pairs at infinite distance
    # (and spaces with no finite distance at all) are still probed
    top = max(ds, default=Fraction(0))
    return [top + 1] + grid


def weakly_pure(f: Map, g: Map, grid: Sequence | None = None) -> PurityVerdict:
    """Weak purity at every tolerance in ``grid``."""
    if grid is None:
        grid = tolerance_grid([f.dom, f.cod, g.dom, g.cod])
    for q in grid:
        v = weakly_pure_at(f, g, q)
        if not v:
            return v
    return PurityVerdict(True, "weakly", witness={"grid": list(grid)})


def q_pushout_closure(family: Iterable[Map], grid: Sequence) -> list[Map]:
    """``family`` plus the leg ``A -> D`` of the q-pushout of each ``g`` along ``1_A``."""
    from .qmet import QMET, q_pushout

    out = []
    for g in family:
        out.append(g)
        for q in grid:
            po = q_pushout(g, QMET.identity(g.dom), q)
            out.append(po.gbar)
    return out


@dataclass
class ThreeWay:
    pure: bool
    barely: bool
    weakly: bool
    pure_unclosed: bool = False
    family_size: int = 0

    @property
    def agree(self) -> bool:
        return self.pure == self.barely == self.weakly


def three_way(f: Map, family: Sequence[Map], grid: Sequence | None = None) -> ThreeWay:
    """The three purity notions, each over ``family`` closed under q-pushouts.

    ``pure_unclosed`` records purity over the bare family, which can differ:
    the implication from weak to full purity needs the closure.
    """
    from .qmet import QMET

    if grid is None:
        spaces = [f.dom, f.cod] + [X for g in family for X in (g.dom, g.cod)]
        grid = tolerance_grid(spaces)
    closed = q_pushout_closure(family, grid)
    system = QMET.system("surjective-isometry")
    pure = bool(is_E_pure_family(QMET, system, f, closed))
    barely = bool(is_barely_E_pure_family(QMET, system, f, closed))
    weakly = all(bool(weakly_pure(f, g, grid)) for g in closed)
    unclosed = bool(is_E_pure_family(QMET, system, f, family))
    return ThreeWay(pure, barely, weakly, unclosed, len(closed))


# -- injectivity, orthogonality, splitting -------------------------------------


def is_E_injective(base: EnrichedBase, system, X, family: Iterable[Map]) -> list[PurityVerdict]:
    """``K(h, X)`` in E for each ``h`` of the family."""
    system = resolve_system(base, system)
    out = []
    for h in family:
        pre = base.precompose(h, X)
        if system.in_E(pre):
            out.append(PurityVerdict(True, "injective", witness={"test_map": repr(h)}))
        else:
            missing = None
            if system.shape == "image":
                img = pre.image()
                missing = next((x for x in pre.cod.elements() if x not in img), None)
            out.append(PurityVerdict(False, "injective", counterexample={"unreached": missing}))
    return out


def is_orthogonal(base: EnrichedBase, X, f: Map) -> bool:
    """``K(f, X)`` is an isomorphism."""
    return base.is_iso(base.precompose(f, X))


def is_E_split(base: EnrichedBase, system, s: Map) -> bool:
    """``K(s, K): K(L, K) -> K(K, K)`` is in E for ``s: K -> L``."""
    system = resolve_system(base, system)
    return system.in_E(base.precompose(s, s.dom))


def product_map(base: EnrichedBase, f1: Map, f2: Map) -> Map:
    """``f1 x f2: K1 x K2 -> L1 x L2``."""
    P, a1, a2 = base.product(f1.dom, f2.dom)
    Q, b1, b2 = base.product(f1.cod, f2.cod)
    return base.pair_into(Q, base.compose(f1, a1), base.compose(f2, a2))


# -- transfer of bare purity along maps of test maps -------------------------


def _arrow_map(base: EnrichedBase, g1: Map, g: Map):
    """A pair ``(a, b)`` with ``g a = b g1``, or ``None``."""
    for a in base.morphisms(g1.dom, g.dom):
        ga = base.compose(g, a)
        for b in base.morphisms(g1.cod, g.cod):
            if base.equal(ga, base.compose(b, g1)):
                return a, b
    return None


def search_bare_transfer(base: EnrichedBase, system, f: Map, g: Map, candidates: Iterable[Map]) -> dict:
    """Look for ``g1 -> g`` with ``f`` barely pure for ``g`` but not for ``g1``.

    Whether bare purity always transfers this way is not known, so nothing
    is asserted: the result lists what was examined and any instance found.
    """
    system = resolve_system(base, system)
    report = {"barely_for_g": bool(is_barely_E_pure(base, system, f, g)), "examined": 0,
              "with_arrow": 0, "counterexample": None}
    if not report["barely_for_g"]:
        return report
    for i, g1 in enumerate(candidates):
        report["examined"] += 1
        if _arrow_map(base, g1, g) is None:
            continue
        report["with_arrow"] += 1
        v = is_barely_E_pure(base, system, f, g1)
        if not v:
            report["counterexample"] = {"candidate": i, "detail": v.counterexample}
            return report
    return report
