"""Positive-primitive formulas over the loaded objects of a base.

A formula has two sort-indexed variables ``x: A`` and ``y: B``, a list of
equations ``s_f(x) = s_g(y)`` with ``f: C -> A`` and ``g: C -> B``, and an
optional existential over ``y``.  At an object ``K`` it is interpreted inside
``K(A, K) x K(B, K)`` (or ``K(A, K)`` once ``y`` is bound):

* an equation is the M-image of the pullback of ``K(f, K)`` and ``K(g, K)``
  mapped into the product;
* a conjunction is the intersection of M-subobjects;
* the existential is the M-image of the first projection.

``f: K -> L`` is elementary for a formula when the square formed by the two
interpretations over ``K(A, f)`` is a pullback.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .base import EnrichedBase, Map
from .errors import Unsupported, ValidationError
from .purity import resolve_system
from .verdict import PurityVerdict

__all__ = [
    "Equation",
    "PPFormula",
    "Interpretation",
    "interpret",
    "is_elementary",
    "psi_g",
    "equation_formula",
    "reduce_conjunction",
    "same_interpretation",
]


@dataclass(frozen=True)
class Equation:
    """``s_f(x) = s_g(y)`` for ``f: C -> A`` and ``g: C -> B``."""

    f: Map
    g: Map


@dataclass
class PPFormula:
    sort_x: object
    sort_y: object
    equations: list = field(default_factory=list)
    exists_y: bool = True
    name: str = ""

    def __post_init__(self):
        for i, eq in enumerate(self.equations):
            if not isinstance(eq, Equation):
                eq = self.equations[i] = Equation(*eq)
            if eq.f.cod is not self.sort_x and eq.f.cod != self.sort_x:
                raise ValidationError(f"equation {i}: left symbol does not land in the sort of x")
            if eq.g.cod is not self.sort_y and eq.g.cod != self.sort_y:
                raise ValidationError(f"equation {i}: right symbol does not land in the sort of y")
            if eq.f.dom is not eq.g.dom and eq.f.dom != eq.g.dom:
                raise ValidationError(f"equation {i}: the two symbols have different domains")


@dataclass
class Interpretation:
    """An M-subobject ``m: obj -> ambient`` with the E-map ``e: source -> obj``."""

    source: object
    e: Map
    obj: object
    m: Map
    ambient: object


def psi_g(g: Map, base: EnrichedBase) -> PPFormula:
    """``exists y. s_{1_A}(x) = s_g(y)`` for ``g: A -> B``."""
    return PPFormula(g.dom, g.cod, [Equation(base.identity(g.dom), g)], True, name="psi_g")


def equation_formula(f: Map, g: Map, exists_y: bool = False) -> PPFormula:
    return PPFormula(f.cod, g.cod, [Equation(f, g)], exists_y)


# -- interpretation -------------------------------------------------------------


@dataclass
class _Stage:
    """An interpretation together with what is needed to make it functorial."""

    interp: Interpretation
    parts: tuple  # stage-specific data


def _context(base, K, phi):
    H, hx, hy = base.product(base.hom(phi.sort_x, K), base.hom(phi.sort_y, K))
    return H, hx, hy


def _equation_stage(base, system, K, eq: Equation, H) -> _Stage:
    pre_f = base.precompose(eq.f, K)
    pre_g = base.precompose(eq.g, K)
    Khat, a, b = base.pullback(pre_f, pre_g)
    h = base.pair_into(H, a, b)
    e, I, m = system.factorize(h)
    return _Stage(Interpretation(Khat, e, I, m, H), (a, b))


def _conjunction(base, system, stages: Sequence[_Stage], H):
    """Intersect the M-legs; returns the pullback tower and the resulting stage."""
    if not stages:
        ident = base.identity(H)
        return [], Interpretation(H, ident, H, ident, H)
    m = stages[0].interp.m
    tower = []
    for st in stages[1:]:
        P, p1, p2 = base.pullback(m, st.interp.m)
        tower.append((P, p1, p2))
        m = base.compose(m, p1)
    e, I, mm = system.factorize(m)
    return tower, Interpretation(m.dom, e, I, mm, H)


def _interpret(base, system, K, phi: PPFormula):
    H, hx, hy = _context(base, K, phi)
    stages = [_equation_stage(base, system, K, eq, H) for eq in phi.equations]
    tower, conj = _conjunction(base, system, stages, H)
    if not phi.exists_y:
        return dict(H=H, hx=hx, hy=hy, stages=stages, tower=tower, conj=conj, top=conj)
    proj = base.compose(hx, conj.m)
    e, I, m = system.factorize(proj)
    top = Interpretation(conj.obj, e, I, m, hx.cod)
    return dict(H=H, hx=hx, hy=hy, stages=stages, tower=tower, conj=conj, top=top)


def interpret(base: EnrichedBase, K, phi: PPFormula, system=None) -> Interpretation:
    """The M-subobject of the hom-product (or of ``K(A, K)``) named by ``phi`` at ``K``."""
    system = resolve_system(base, system)
    return _interpret(base, system, K, phi)["top"]


def same_interpretation(system, i1: Interpretation, i2: Interpretation) -> bool:
    """Whether two interpretations name the same subobject.

    Separate calls build separate ambient products; when the ambients are
    distinct objects with the same elements, proper systems compare images.
    """
    base = system.base
    if base.same_object(i1.ambient, i2.ambient):
        return system.same_subobject(i1.m, i2.m)
    if not system.proper:
        raise Unsupported("comparing interpretations in different ambients needs a proper system")
    if set(i1.ambient.elements()) != set(i2.ambient.elements()):
        return False
    return i1.m.image() == i2.m.image()


# -- elementary maps ----------------------------------------------------------


def _middle(system, src_map: Map, iK: Interpretation, iL: Interpretation, amb: Map) -> Map | None:
    """The map ``iK.obj -> iL.obj`` induced by a map of sources, by diagonal fill."""
    base = system.base
    u = base.compose(iL.e, src_map)
    v = base.compose(amb, iK.m)
    return system.fill(iK.e, iL.m, u, v)


def _ambient_map(base, phi, f, dK, dL):
    post_x = base.postcompose(phi.sort_x, f)
    post_y = base.postcompose(phi.sort_y, f)
    HK, HL = dK["H"], dL["H"]
    return base.pair_into(
        HL, base.compose(post_x, dK["hx"]), base.compose(post_y, dK["hy"])
    ), post_x


def _induced(base, system, phi, f, dK, dL):
    """Middle maps at every stage, from equations up to the top."""
    amb, post_x = _ambient_map(base, phi, f, dK, dL)
    post_y = base.postcompose(phi.sort_y, f)
    mids = []
    for sK, sL in zip(dK["stages"], dL["stages"]):
        aK, bK = sK.parts
        src = base.pair_into(sL.interp.source, base.compose(post_x, aK), base.compose(post_y, bK))
        d = _middle(system, src, sK.interp, sL.interp, amb)
        if d is None:
            raise ValidationError("equation interpretations are not functorial here")
        mids.append(d)
    # the conjunction tower: the intersection at K maps into the one at L
    if mids:
        d = mids[0]
        for (PK, p1K, p2K), (PL, _, _), dn in zip(dK["tower"], dL["tower"], mids[1:]):
            d = base.pair_into(PL, base.compose(d, p1K), base.compose(dn, p2K))
        conj_src = d
    else:
        conj_src = amb
    conj_mid = _middle(system, conj_src, dK["conj"], dL["conj"], amb)
    if conj_mid is None:
        raise ValidationError("conjunction interpretations are not functorial here")
    if not phi.exists_y:
        return conj_mid, amb
    top_mid = _middle(system, conj_mid, dK["top"], dL["top"], post_x)
    if top_mid is None:
        raise ValidationError("existential interpretations are not functorial here")
    return top_mid, post_x


def is_elementary(base: EnrichedBase, f: Map, phi: PPFormula, system=None) -> PurityVerdict:
    """Whether the square of interpretations over ``f`` is a pullback."""
    system = resolve_system(base, system)
    dK = _interpret(base, system, f.dom, phi)
    dL = _interpret(base, system, f.cod, phi)
    mid, amb = _induced(base, system, phi, f, dK, dL)
    iK, iL = dK["top"], dL["top"]
    Pb, q1, q2 = base.pullback(amb, iL.m)
    comparison = base.pair_into(Pb, iK.m, mid)
    if base.is_iso(comparison):
        return PurityVerdict(True, "elementary", witness={"pullback_size": len(list(Pb.elements()))})
    gaps = base.image_gaps(comparison)
    if gaps:
        missing = gaps[0]
        return PurityVerdict(
            False, "elementary",
            counterexample={"element": q1(missing), "image_below": q2(missing)},
        )
    return PurityVerdict(False, "elementary", counterexample={"reason": "comparison is not invertible"})


# -- conjunctions as a single equation -------------------------------------------


def reduce_conjunction(base: EnrichedBase, phi: PPFormula, system=None) -> PPFormula:
    """Replace the equations by one equation over the coproduct of their sources.

    Only meaningful for proper systems, and only for bases with coproducts.
    """
    system = resolve_system(base, system)
    if not system.proper:
        raise Unsupported("conjunction reduction is only available for proper factorization systems")
    if not hasattr(base, "coproduct"):
        raise Unsupported(f"base {base.name} has no coproducts")
    if not phi.equations:
        raise Unsupported("the empty conjunction has no single-equation form")
    eqs = list(phi.equations)
    C, f_, g_ = eqs[0].f.dom, eqs[0].f, eqs[0].g
    for eq in eqs[1:]:
        S, i1, i2 = base.coproduct(C, eq.f.dom)
        f_ = _copair(base, S, f_, eq.f)
        g_ = _copair(base, S, g_, eq.g)
        C = S
    return PPFormula(phi.sort_x, phi.sort_y, [Equation(f_, g_)], phi.exists_y, name=phi.name + "-reduced")


def _copair(base, S, a: Map, b: Map) -> Map:
    m = Map(S, a.cod, lambda z: a(z[1]) if z[0] == 0 else b(z[1]))
    if not base.is_morphism(m):
        raise ValidationError("copairing is not a morphism")
    return m
