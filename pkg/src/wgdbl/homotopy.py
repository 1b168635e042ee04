"""Groupoidal weakly globular double categories and their homotopy groups.

For a groupoidal X the classifying space has pi_0 and pi_1 computed by the
groupoid Pi_0 X, and pi_2 at x is the group of endo-cells of the horizontal
identity on the chosen representative of x.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .dblcat import (DoubleCategory, DoubleFunctor, Verdict, check_strict_functor,
                     hom_category, horizontal_embedding, pi0_double, require_wg)
from .errors import NotGroupoidal
from .fincat import FinCategory, FinFunctor, pi0


# ---------------------------------------------------------------------------
# finite groups as multiplication tables

@dataclass
class Group:
    elements: list
    identity: str
    table: dict          # (a, b) -> a * b  (a after b)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.table[(a, b)]

    def is_group(self) -> bool:
        els = set(self.elements)
        if self.identity not in els:
            return False
        for a in self.elements:
            if self.mul(a, self.identity) != a or self.mul(self.identity, a) != a:
                return False
            if not any(self.mul(a, b) == self.identity for b in self.elements):
                return False
        for a, b, c in itertools.product(self.elements, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return False
        return all(v in els for v in self.table.values())

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a)
                   for a, b in itertools.combinations(self.elements, 2))

    def to_json(self) -> dict:
        return {"order": self.order, "identity": self.identity,
                "elements": list(self.elements),
                "table": [[self.mul(a, b) for b in self.elements] for a in self.elements]}


def group_from_category(C: FinCategory, x) -> Group:
    """The automorphism group of ``x`` in a groupoid."""
    els = sorted(C.hom(x, x))
    return Group(els, C.identity[x], {(a, b): C.comp(a, b) for a in els for b in els})


def cyclic_group(n: int) -> Group:
    els = [str(i) for i in range(n)]
    return Group(els, "0", {(a, b): str((int(a) + int(b)) % n) for a in els for b in els})


def group_isomorphism(G: Group, H: Group) -> Optional[dict]:
    """Some isomorphism ``G -> H`` found by exhaustive search, or None."""
    if G.order != H.order:
        return None
    rest_g = [a for a in G.elements if a != G.identity]
    rest_h = [b for b in H.elements if b != H.identity]
    for perm in itertools.permutations(rest_h):
        m = dict(zip(rest_g, perm))
        m[G.identity] = H.identity
        if all(m[G.mul(a, b)] == H.mul(m[a], m[b]) for a in G.elements for b in G.elements):
            return m
    return None


def is_homomorphism(G: Group, H: Group, m: dict) -> bool:
    return all(m[G.mul(a, b)] == H.mul(m[a], m[b]) for a in G.elements for b in G.elements)


# ---------------------------------------------------------------------------
# groupoidal check

@dataclass
class GroupoidalVerdict:
    homs_groupoidal: bool
    pi0_groupoidal: bool
    failing_hom: Optional[tuple] = None
    failing_arrow: Optional[str] = None
    Pi0: Optional[FinCategory] = None

    @property
    def ok(self) -> bool:
        return self.homs_groupoidal and self.pi0_groupoidal

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"groupoidal": self.ok, "homs_groupoidal": self.homs_groupoidal,
                "pi0_groupoidal": self.pi0_groupoidal,
                "failing_hom": list(self.failing_hom) if self.failing_hom else None,
                "failing_arrow": self.failing_arrow}


def check_groupoidal(X: DoubleCategory, report=None) -> GroupoidalVerdict:
    r = require_wg(X, report)
    gamma = r.x0_verdict.gamma
    reps = [c[0] for c in r.x0_verdict.classes]
    failing = None
    for a in reps:
        for b in reps:
            if not hom_category(X, a, b, gamma).is_groupoid():
                failing = (a, b)
                break
        if failing:
            break
    P = pi0_double(X, r)
    bad = next((f for f in P.arrows if not P.is_iso(f)), None)
    return GroupoidalVerdict(failing is None, bad is None, failing, bad, P)


def _require_groupoidal(X, report=None):
    v = check_groupoidal(X, report)
    if not v.ok:
        raise NotGroupoidal(f"{X.name or 'input'} is not groupoidal", v)
    return v


# ---------------------------------------------------------------------------
# homotopy groups

@dataclass
class HomotopyGroups:
    basepoint: str
    components: list     # connected components of Pi_0 X
    pi1: Group
    pi2: Group
    id_x: str = ""

    @property
    def pi0(self) -> int:
        return len(self.components)

    def to_json(self) -> dict:
        return {"basepoint": self.basepoint, "pi0": self.pi0,
                "components": list(self.components), "id_x": self.id_x,
                "pi1": self.pi1.to_json(), "pi2": self.pi2.to_json()}


def homotopy_groups(X: DoubleCategory, x=None, report=None) -> HomotopyGroups:
    """``x`` may be any object; its class representative is used."""
    r = require_wg(X, report)
    v = _require_groupoidal(X, r)
    P = v.Pi0
    gamma = r.x0_verdict.gamma
    if x is None:
        x = P.objects[0]
    if x not in gamma:
        raise KeyError(f"unknown basepoint {x!r}")
    x = gamma[x]
    pi1 = group_from_category(P, x)
    idx = X.Id(x)
    els = sorted(X.X1.hom(idx, idx))
    pi2 = Group(els, X.one(idx), {(a, b): X.vcomp(a, b) for a in els for b in els})
    assert pi2.is_abelian(), "endo-cells of an identity do not commute"
    return HomotopyGroups(x, pi0(P), pi1, pi2, idx)


# ---------------------------------------------------------------------------
# the map to c Pi_0 X

@dataclass
class PostnikovResult:
    functor: DoubleFunctor
    target: DoubleCategory
    functor_verdict: Verdict
    pi0_iso: bool
    pi1_iso: dict = field(default_factory=dict)
    identity: bool = False

    @property
    def ok(self) -> bool:
        return self.functor_verdict.ok and self.pi0_iso and all(self.pi1_iso.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "functor": self.functor_verdict.ok,
                "failure": self.functor_verdict.failure,
                "pi0_iso": self.pi0_iso, "pi1_iso": dict(self.pi1_iso),
                "identity": self.identity, "target": self.target.name}


def postnikov_map(X: DoubleCategory, report=None) -> PostnikovResult:
    r = require_wg(X, report)
    v = _require_groupoidal(X, r)
    P = v.Pi0
    gamma = r.x0_verdict.gamma
    cls = P.component_of
    T = horizontal_embedding(P, f"cPi0({X.name})")
    F0 = FinFunctor(X.X0, T.X0, {A: gamma[A] for A in X.X0.objects},
                    {a: f"1[{gamma[X.X0.src(a)]}]" for a in X.X0.arrows}, "F0")
    F1 = FinFunctor(X.X1, T.X1, {h: cls[h] for h in X.X1.objects},
                    {c: f"1[{cls[X.top(c)]}]" for c in X.X1.arrows}, "F1")
    F = DoubleFunctor(X, T, F0, F1, f"{X.name}->cPi0")
    fv = check_strict_functor(F)
    # recompute on the target
    rt = require_wg(T)
    PT = pi0_double(T, rt)
    gt = rt.x0_verdict.gamma
    omap = {x: gt[F.ob(x)] for x in P.objects}
    comp_t = {o: c[0] for c in pi0(PT) for o in c}
    induced = {c[0]: comp_t[omap[c[0]]] for c in pi0(P)}
    pi0_iso = sorted(induced.values()) == sorted(c[0] for c in pi0(PT))
    pi1 = {}
    for x in P.objects:
        G = group_from_category(P, x)
        H = group_from_category(PT, omap[x])
        m = {f: PT.component_of[F.hor(f)] for f in G.elements}
        pi1[x] = (len(set(m.values())) == len(m) and set(m.values()) == set(H.elements)
                  and is_homomorphism(G, H, m))
    return PostnikovResult(F, T, fv, pi0_iso, pi1, T.same_as(X))
