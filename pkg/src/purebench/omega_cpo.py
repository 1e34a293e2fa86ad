"""Finite posets as ω-complete posets.

On a finite poset every non-empty ω-chain is eventually constant, so its join
is its largest member and every monotone map preserves such joins.  The
functions here nevertheless evaluate the chain-based definitions literally
(chains are searched up to the height of the relevant hom-poset and joins
are computed as least upper bounds) so that the collapse to ordinary notions
is observed rather than assumed.
"""
from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Sequence

from .base import EnrichedBase, FactorizationSystem, Map, check_guard, remember, hom_guard
from .errors import CapabilityError, ValidationError
from .verdict import PurityVerdict

__all__ = [
    "FinPoset",
    "CpoBase",
    "CPO",
    "poset",
    "chain_poset",
    "antichain",
    "monotone_maps",
    "least_upper_bound",
    "chain_joins",
    "join_closure",
    "is_dense_cpo",
    "is_embedding",
    "pure_wrt_cpo",
    "check_omega_pushout_cocone",
    "CoconeReport",
    "FLAVORS",
]

FLAVORS = ("pure", "barely", "square")


class FinPoset:
    def __init__(self, points: Sequence[Hashable], leq: Iterable[tuple], name: str | None = None,
                 closed: bool = False, validate: bool = True):
        self.points = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise ValidationError("duplicate point names")
        self.name = name
        self._index = {p: i for i, p in enumerate(self.points)}
        rel = {(p, p) for p in self.points}
        for a, b in leq:
            if a not in self._index or b not in self._index:
                raise ValidationError(f"order pair ({a!r}, {b!r}) mentions an unknown point")
            rel.add((a, b))
        if not closed:
            rel = _transitive_closure(self.points, rel)
        self._leq = frozenset(rel)
        if validate:
            self.validate()

    def __repr__(self):
        return f"<FinPoset {self.name or len(self.points)}>"

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p in self._index

    def elements(self):
        return self.points

    def index(self, p):
        return self._index[p]

    def leq(self, a, b) -> bool:
        return (a, b) in self._leq

    def pair(self, x, y):
        return (x, y)

    def relation(self) -> frozenset:
        return self._leq

    def validate(self) -> "FinPoset":
        for a, b in itertools.combinations(self.points, 2):
            if self.leq(a, b) and self.leq(b, a):
                raise ValidationError(f"order is not antisymmetric at {a!r}, {b!r}")
        return self

    def covers(self) -> list[tuple]:
        out = []
        for a, b in self._leq:
            if a != b and not any(
                c not in (a, b) and self.leq(a, c) and self.leq(c, b) for c in self.points
            ):
                out.append((a, b))
        return sorted(out, key=repr)

    def height(self) -> int:
        """Number of elements in a longest chain."""
        memo: dict = {}

        def up(x):
            if x not in memo:
                memo[x] = 1 + max((up(y) for y in self.points if y != x and self.leq(x, y)), default=0)
            return memo[x]

        return max((up(x) for x in self.points), default=0)

    def to_json(self) -> dict:
        return {"points": list(self.points), "covers": [list(c) for c in self.covers()]}


def _transitive_closure(points, rel: set) -> set:
    idx = {p: i for i, p in enumerate(points)}
    n = len(points)
    reach = [[False] * n for _ in range(n)]
    for a, b in rel:
        reach[idx[a]][idx[b]] = True
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            if reach[i][k]:
                ri = reach[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    return {(points[i], points[j]) for i in range(n) for j in range(n) if reach[i][j]}


def poset(points: Sequence, covers: Iterable[tuple] = (), name: str | None = None) -> FinPoset:
    return FinPoset(points, [tuple(c) for c in covers], name=name)


def chain_poset(n: int, name: str | None = None) -> FinPoset:
    """The chain ``0 < 1 < ... < n-1``."""
    return poset(list(range(n)), [(i, i + 1) for i in range(n - 1)], name=name or f"chain{n}")


def antichain(n: int) -> FinPoset:
    return poset(list(range(n)), [], name=f"anti{n}")


def monotone_maps(X: FinPoset, Y: FinPoset) -> list[tuple]:
    xs = X.points
    out: list[tuple] = []
    cap = hom_guard()
    cur: list = []

    def extend(i):
        if i == len(xs):
            out.append(tuple(cur))
            if len(out) > cap:
                raise CapabilityError(f"more than {cap} monotone maps {X!r} -> {Y!r} (hom-size guard)")
            return
        x = xs[i]
        for y in Y.points:
            if all(
                (not X.leq(xs[j], x) or Y.leq(cur[j], y)) and (not X.leq(x, xs[j]) or Y.leq(y, cur[j]))
                for j in range(i)
            ):
                cur.append(y)
                extend(i + 1)
                cur.pop()

    extend(0)
    return out


class CpoBase(EnrichedBase):
    name = "omega-cpo"

    def __init__(self):
        super().__init__()
        self._homs: dict = {}
        self.register_system(FactorizationSystem(self, "dense-embedding", "image"))
        self.register_system(FactorizationSystem(self, "all-iso", "all-iso"))
        self.register_system(FactorizationSystem(self, "iso-all", "iso-all"))

    def clear_cache(self):
        self._homs.clear()

    def hom(self, A: FinPoset, B: FinPoset) -> FinPoset:
        key = (id(A), id(B))
        hit = self._homs.get(key)
        if hit is not None and hit[0] is A and hit[1] is B:
            return hit[2]
        pts = monotone_maps(A, B)
        check_guard(len(pts), f"hom({A!r}, {B!r})")
        rel = [
            (f, g) for f in pts for g in pts if all(B.leq(x, y) for x, y in zip(f, g))
        ]
        H = FinPoset(pts, rel, closed=True, validate=False)
        remember(self._homs, key, (A, B, H))
        return H

    def map_of(self, A, B, element) -> Map:
        return Map(A, B, dict(zip(A.points, element)))

    def element_of(self, f: Map):
        return tuple(f(a) for a in f.dom.points)

    def morphisms(self, A, B) -> list[Map]:
        return [self.map_of(A, B, e) for e in self.hom(A, B).points]

    def is_morphism(self, f: Map) -> bool:
        return all(f(x) in f.cod for x in f.dom.points) and all(
            f.cod.leq(f(a), f(b)) for a, b in f.dom.relation()
        )

    def is_embedding(self, f: Map) -> bool:
        return self.is_injective(f) and all(
            f.dom.leq(a, b) == f.cod.leq(f(a), f(b))
            for a in f.dom.points
            for b in f.dom.points
        )

    def precompose(self, g: Map, X) -> Map:
        A, B = g.dom, g.cod
        idx = [B.index(g(a)) for a in A.points]
        return Map(self.hom(B, X), self.hom(A, X), lambda phi: tuple(phi[i] for i in idx))

    def postcompose(self, A, f: Map) -> Map:
        return Map(self.hom(A, f.dom), self.hom(A, f.cod), lambda phi: tuple(f(y) for y in phi))

    def subobject(self, X: FinPoset, elements) -> tuple:
        keep = set(elements)
        pts = [p for p in X.points if p in keep]
        rel = [(a, b) for a in pts for b in pts if X.leq(a, b)]
        S = FinPoset(pts, rel, closed=True, validate=False)
        return S, Map(S, X, lambda p: p, name="incl")

    def pair_object(self, A, B, elements) -> tuple:
        pts = list(elements)
        rel = [(u, v) for u in pts for v in pts if A.leq(u[0], v[0]) and B.leq(u[1], v[1])]
        P = FinPoset(pts, rel, closed=True, validate=False)
        return P, Map(P, A, lambda p: p[0]), Map(P, B, lambda p: p[1])

    def pushout(self, g: Map, f: Map) -> tuple:
        """Pushout of ``g: A -> B`` along ``f: A -> C`` in posets.

        The preorder on ``B + C`` generated by both orders and ``g(a) ~ f(a)``
        is collapsed to a partial order.
        """
        B, C = g.cod, f.cod
        verts = [("B", b) for b in B.points] + [("C", c) for c in C.points]
        rel = {(("B", x), ("B", y)) for x, y in B.relation()}
        rel |= {(("C", x), ("C", y)) for x, y in C.relation()}
        for a in g.dom.points:
            rel.add((("B", g(a)), ("C", f(a))))
            rel.add((("C", f(a)), ("B", g(a))))
        pre = _transitive_closure(verts, rel)
        cls: dict = {}
        for v in verts:
            members = tuple(w for w in verts if (v, w) in pre and (w, v) in pre)
            cls[v] = members[0] if len(members) == 1 else members
        pts = list(dict.fromkeys(cls[v] for v in verts))
        order = {(cls[a], cls[b]) for a, b in pre}
        D = FinPoset(pts, order, closed=True, validate=True)
        gbar = Map(C, D, {c: cls["C", c] for c in C.points}, name="gbar")
        fbar = Map(B, D, {b: cls["B", b] for b in B.points}, name="fbar")
        return D, gbar, fbar


CPO = CpoBase()


def least_upper_bound(P: FinPoset, items: Iterable):
    """The least upper bound of ``items`` in ``P``, or ``None`` if none exists."""
    items = list(items)
    ub = [p for p in P.points if all(P.leq(x, p) for x in items)]
    least = [p for p in ub if all(P.leq(p, q) for q in ub)]
    return least[0] if least else None


def chain_joins(P: FinPoset, S: Iterable) -> dict:
    """Joins of non-empty chains drawn from ``S``, with one witnessing chain each.

    Chains are grown one strictly larger element at a time, up to the height
    of ``P``.  Returns ``{join: chain}``.
    """
    S = list(dict.fromkeys(S))
    frontier = {x: (x,) for x in S}
    seen = dict(frontier)
    for _ in range(max(P.height() - 1, 0)):
        nxt = {}
        for last, chain in frontier.items():
            for y in S:
                if y != last and P.leq(last, y) and y not in seen and y not in nxt:
                    nxt[y] = chain + (y,)
        if not nxt:
            break
        seen.update(nxt)
        frontier = nxt
    out = {}
    for chain in seen.values():
        j = least_upper_bound(P, chain)
        if j is not None and j not in out:
            out[j] = chain
    return out


def join_closure(P: FinPoset, S: Iterable) -> set:
    """Closure of ``S`` under joins of non-empty chains."""
    cur = set(S)
    while True:
        new = set(chain_joins(P, cur))
        if new <= cur:
            return cur
        cur |= new


def is_dense_cpo(f: Map) -> bool:
    """The chain-join closure of the image is the whole codomain."""
    return join_closure(f.cod, f.image()) == set(f.cod.points)


def is_embedding(f: Map) -> bool:
    return CPO.is_embedding(f)


def pure_wrt_cpo(f: Map, g: Map, flavor: str = "pure") -> PurityVerdict:
    """Chain-based purity of ``f: K -> L`` with respect to ``g: A -> B``.

    ``pure``   -- whenever ``fu`` is the join of a chain ``(v_i g)``,
    ``barely`` -- whenever ``u`` is the join of a chain ``(u_i)`` with ``f u_i = v_i g``,
    ``square`` -- whenever ``fu = vg``,

    ``u`` must be the join of a chain ``(t_j g)``.
    """
    if flavor not in FLAVORS:
        raise ValidationError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    K, L = f.dom, f.cod
    A, B = g.dom, g.cod
    H_AK = CPO.hom(A, K)
    H_AL = CPO.hom(A, L)
    pre_K = CPO.precompose(g, K)
    pre_L = CPO.precompose(g, L)
    post = CPO.postcompose(A, f)
    vg = {pre_L(v): v for v in CPO.hom(B, L).points}
    tg = {pre_K(t): t for t in CPO.hom(B, K).points}
    reachable = chain_joins(H_AK, tg)
    if flavor == "pure":
        targets = chain_joins(H_AL, vg)
        premises = {u: targets[post(u)] for u in H_AK.points if post(u) in targets}
    elif flavor == "barely":
        commuting = [u for u in H_AK.points if post(u) in vg]
        premises = chain_joins(H_AK, commuting)
    else:
        premises = {u: (post(u),) for u in H_AK.points if post(u) in vg}
    for u, premise in premises.items():
        if u not in reachable:
            ce = {"u": list(u), "premise_chain": [list(x) for x in premise]}
            if flavor == "pure":
                ce["v_family"] = [list(vg[x]) for x in premise]
            return PurityVerdict(False, f"cpo-{flavor}", counterexample=ce)
    witness = {
        repr(u): [list(tg[x]) for x in reachable[u]] for u in premises
    }
    return PurityVerdict(True, f"cpo-{flavor}", witness=witness)


class CoconeReport:
    def __init__(self):
        self.problems: list[str] = []
        self.offending_pair: tuple | None = None
        self.competitors: list[dict] = []

    @property
    def ok(self) -> bool:
        return not self.problems and all(c["unique"] for c in self.competitors)

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"<CoconeReport ok={self.ok} problems={self.problems}>"


def _cocone_problems(g: Map, f: Map, leg_c: Map, legs_b: Sequence[Map]) -> tuple[list[str], tuple | None]:
    A, D = g.dom, leg_c.cod
    H = CPO.hom(A, D)
    comps = [tuple(k(g(a)) for a in A.points) for k in legs_b]
    problems = []
    pair = None
    for i in range(len(comps) - 1):
        if not H.leq(comps[i], comps[i + 1]):
            problems.append(f"composites {i} and {i + 1} do not form a chain")
            pair = (i, i + 1)
            break
    if not problems:
        join = least_upper_bound(H, comps)
        target = tuple(leg_c(f(a)) for a in A.points)
        if join != target:
            problems.append("the join of the composites differs from the other leg")
    return problems, pair


def check_omega_pushout_cocone(g: Map, f: Map, candidate: tuple, competitors: Iterable = ()) -> CoconeReport:
    """Verify an ω-pushout candidate ``(D, gbar, [fbar_0, ..., fbar_n])``.

    The sequence is read as constant from its last entry on.  Each competitor
    is a tuple ``(E, h, [k_0, ..., k_m])``; every mediating monotone map
    ``D -> E`` is enumerated.
    """
    D, gbar, fbars = candidate
    report = CoconeReport()
    report.problems, report.offending_pair = _cocone_problems(g, f, gbar, fbars)
    for E, h, ks in competitors:
        entry: dict = {"problems": [], "mediators": [], "unique": False}
        entry["problems"], _ = _cocone_problems(g, f, h, ks)
        if not entry["problems"]:
            n = max(len(fbars), len(ks))
            for t in CPO.morphisms(D, E):
                ok = CPO.equal(CPO.compose(t, gbar), h)
                for i in range(n):
                    if not ok:
                        break
                    fb = fbars[min(i, len(fbars) - 1)]
                    k = ks[min(i, len(ks) - 1)]
                    ok = CPO.equal(CPO.compose(t, fb), k)
                if ok:
                    entry["mediators"].append(CPO.element_of(t))
            entry["unique"] = len(entry["mediators"]) == 1
        report.competitors.append(entry)
    return report
