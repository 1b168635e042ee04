"""Calculus-of-fractions conditions and the double category of fractions C{W}.

Objects of C{W} are the arrows of ``W``.  A vertical arrow ``(w1) -> (w2)``
exists exactly when ``w1`` and ``w2`` share a codomain and is stored once per
such pair.  A horizontal arrow ``(w) -> (w')`` is an arrow ``dom w -> dom w'``
of the base category.  The cell category is posetal, so a cell is determined
by its top and bottom horizontal arrows; it exists when :func:`cell_exists`
finds a refinement witness.

The second half of the module builds the category of triangles over ``W``,
the canonical structure on C{W} relative to the inclusion of the base
category, and lifts such structures along that inclusion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .companion import (CompDouble, CompanionPair, comp_double_category,
                        find_companion, find_conjoint,
                        find_horizontal_companion, find_horizontal_conjoint,
                        verify_companion)
from .dblcat import (DoubleCategory, DoubleFunctor, HorizontalTransformation,
                     Verdict, check_horizontal_transformation,
                     check_strict_functor, horizontal_embedding,
                     vertical_embedding)
from .errors import (ConditionsFailed, InconsistentFrame, ParseError,
                     PastingUndefined)
from .fincat import FinCategory, FinFunctor, validate_category


# ---------------------------------------------------------------------------
# presentations and conditions

@dataclass
class FractionsPresentation:
    base: FinCategory
    W: tuple
    require_two_out_of_three: bool = False

    def __post_init__(self):
        order = {a: i for i, a in enumerate(self.base.arrows)}
        for a in self.W:
            if a not in order:
                raise ParseError(f"W names unknown arrow {a}", "W")
        self.W = tuple(sorted(set(self.W), key=order.__getitem__))
        self._W = frozenset(self.W)
        self.order = order

    def in_W(self, a) -> bool:
        return a in self._W

    def dom(self, w):
        return self.base.src(w)

    def cod(self, w):
        return self.base.tgt(w)

    def to_json(self) -> dict:
        out = self.base.to_json()
        out["W"] = list(self.W)
        if self.require_two_out_of_three:
            out["two_out_of_three"] = True
        return out


def presentation_from_json(raw, require_two_out_of_three=None) -> FractionsPresentation:
    if not isinstance(raw, dict):
        raise ParseError("presentation must be an object")
    if "W" not in raw:
        raise ParseError("missing key 'W'")
    C = validate_category(raw)
    W = raw["W"]
    if not isinstance(W, list):
        raise ParseError("W must be a list of arrow ids", "W")
    flag = raw.get("two_out_of_three", False) if require_two_out_of_three is None \
        else require_two_out_of_three
    return FractionsPresentation(C, tuple(str(a) for a in W), bool(flag))


def identities_presentation(C: FinCategory) -> FractionsPresentation:
    return FractionsPresentation(C, tuple(C.identity.values()))


@dataclass
class ConditionsReport:
    cf1: list = field(default_factory=list)
    cf2: list = field(default_factory=list)
    cf3: list = field(default_factory=list)
    two_out_of_three: Optional[list] = None
    squares: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not (self.cf1 or self.cf2 or self.cf3 or self.two_out_of_three)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {
            "passed": self.passed,
            "CF1": [list(x) for x in self.cf1],
            "CF2": [list(x) for x in self.cf2],
            "CF3": [list(x) for x in self.cf3],
        }
        if self.two_out_of_three is not None:
            out["two_out_of_three"] = [list(x) for x in self.two_out_of_three]
        return out


def cf2_square(P: FractionsPresentation, f, w):
    """Least ``(D, fbar, wbar)`` with ``w . fbar = f . wbar`` and ``wbar`` in W."""
    C = P.base
    if C.tgt(f) != C.tgt(w):
        raise ValueError("CF2 needs a cospan")
    target = C.src(f)
    for wb in P.W:
        if C.tgt(wb) != target:
            continue
        fwb = C.comp(f, wb)
        for fb in C.hom(C.src(wb), C.src(w)):
            if C.comp(w, fb) == fwb:
                return C.src(wb), fb, wb
    return None


def cf3_arrow(P: FractionsPresentation, f, g):
    """Least ``v`` in W with ``f . v = g . v``."""
    C = P.base
    for v in P.W:
        if C.tgt(v) == C.src(f) and C.comp(f, v) == C.comp(g, v):
            return v
    return None


def check_fractions_conditions(P: FractionsPresentation, two_out_of_three=None) -> ConditionsReport:
    C = P.base
    rep = ConditionsReport()
    for a in C.arrows:
        if C.is_iso(a) and not P.in_W(a):
            rep.cf1.append(("iso not in W", a))
    for g, f in C.composable_pairs():
        if P.in_W(f) and P.in_W(g) and not P.in_W(C.comp(g, f)):
            rep.cf1.append(("composite not in W", g, f, C.comp(g, f)))
    for w in P.W:
        for f in C.arrows:
            if C.tgt(f) != C.tgt(w):
                continue
            sq = cf2_square(P, f, w)
            if sq is None:
                rep.cf2.append((f, w))
            else:
                rep.squares[(f, w)] = sq
    for w in P.W:
        B = C.src(w)
        for A in C.objects:
            hs = C.hom(A, B)
            for i, f in enumerate(hs):
                for g in hs[i + 1:]:
                    if C.comp(w, f) == C.comp(w, g) and cf3_arrow(P, f, g) is None:
                        rep.cf3.append((w, f, g))
    check23 = P.require_two_out_of_three if two_out_of_three is None else two_out_of_three
    if check23:
        rep.two_out_of_three = []
        for g, f in C.composable_pairs():
            h = C.comp(g, f)
            flags = (P.in_W(f), P.in_W(g), P.in_W(h))
            if sum(flags) == 2:
                rep.two_out_of_three.append((g, f, h))
    return rep


# ---------------------------------------------------------------------------
# cell witnesses

@dataclass(frozen=True)
class CellWitness:
    left: tuple    # (C, u1, u2): w1 u1 = w2 u2 in W
    right: tuple   # (C', v1, v2): w1' v1 = w2' v2 in W
    phi: str       # C -> C' with v1 phi = f1 u1, v2 phi = f2 u2

    def to_json(self):
        return {"left": list(self.left), "right": list(self.right), "phi": self.phi}


class _Search:
    """Span enumeration and witness search for one presentation."""

    def __init__(self, P: FractionsPresentation):
        self.P = P
        self._spans = {}

    def spans(self, w1, w2):
        key = (w1, w2)
        if key not in self._spans:
            P, C = self.P, self.P.base
            out = []
            if C.tgt(w1) == C.tgt(w2):
                for X in C.objects:
                    for u1 in C.hom(X, C.src(w1)):
                        k = C.comp(w1, u1)
                        if not P.in_W(k):
                            continue
                        for u2 in C.hom(X, C.src(w2)):
                            if C.comp(w2, u2) == k:
                                out.append((X, u1, u2))
            self._spans[key] = tuple(out)
        return self._spans[key]

    def check_frame(self, frame):
        C = self.P.base
        w1, f1, w1p, w2, f2, w2p = frame
        for w in (w1, w1p, w2, w2p):
            if not self.P.in_W(w):
                raise InconsistentFrame(f"{w} is not in W")
        if C.tgt(w1) != C.tgt(w2) or C.tgt(w1p) != C.tgt(w2p):
            raise InconsistentFrame("vertical sides need equal codomains")
        if C.arrows.get(f1) != (C.src(w1), C.src(w1p)):
            raise InconsistentFrame(f"top arrow {f1} does not run dom {w1} -> dom {w1p}")
        if C.arrows.get(f2) != (C.src(w2), C.src(w2p)):
            raise InconsistentFrame(f"bottom arrow {f2} does not run dom {w2} -> dom {w2p}")

    def witnesses(self, frame):
        C = self.P.base
        w1, f1, w1p, w2, f2, w2p = frame
        right = self.spans(w1p, w2p)
        for X, u1, u2 in self.spans(w1, w2):
            a1, a2 = C.comp(f1, u1), C.comp(f2, u2)
            for Y, v1, v2 in right:
                for phi in C.hom(X, Y):
                    if C.comp(v1, phi) == a1 and C.comp(v2, phi) == a2:
                        yield CellWitness((X, u1, u2), (Y, v1, v2), phi)

    def witness(self, frame, reverse=False):
        if not reverse:
            return next(self.witnesses(frame), None)
        found = None
        for found in self.witnesses(frame):
            pass
        return found


_SEARCHERS = {}


def _searcher(P) -> _Search:
    if isinstance(P, FractionsDouble):
        return P._search
    key = id(P)
    s = _SEARCHERS.get(key)
    if s is None or s.P is not P:
        s = _SEARCHERS[key] = _Search(P)
    return s


def cell_exists(P, frame) -> Optional[CellWitness]:
    """Least refinement witness for ``frame = (w1, f1, w1', w2, f2, w2')``."""
    s = _searcher(P)
    s.check_frame(frame)
    return s.witness(frame)


def spans(P, w1, w2) -> tuple:
    """All representatives ``(C, u1, u2)`` of the vertical arrow ``(w1) -> (w2)``."""
    return _searcher(P).spans(w1, w2)


# ---------------------------------------------------------------------------
# the double category

class FractionsDouble(DoubleCategory):
    """C{W} with provenance maps back to the presentation."""

    def horizontal(self, w, f, w2):
        return self.hor_id[(w, f, w2)]

    def vertical(self, w1, w2):
        return self.vert_id[(w1, w2)]

    def cell_on(self, h1, h2) -> Optional[str]:
        return self.cell_id.get((h1, h2))

    def s_of(self, w):
        return self.Id(w)

    def provenance_json(self) -> dict:
        return {
            "objects": {w: {"dom": self.presentation.dom(w), "cod": self.presentation.cod(w)}
                        for w in self.objects},
            "horizontals": {h: list(t) for h, t in self.hor.items()},
            "verticals": {v: {"ends": list(t), "span": list(self.vertical_span[v])}
                          for v, t in self.vert.items()},
            "cells": {c: {"frame": list(self.cell[c]), "witness": self.witness[c].to_json()}
                      for c in self.cell},
        }


def _need(table, key, what):
    try:
        return table[key]
    except KeyError:
        raise AssertionError(f"{what} {key} missing from C{{W}}") from None


def build_fractions(P: FractionsPresentation, witness_order: str = "least",
                    check: bool = True) -> FractionsDouble:
    """Build C{W}.  ``witness_order='greatest'`` stores the last witness found."""
    if check:
        rep = check_fractions_conditions(P, two_out_of_three=False)
        if not rep.passed:
            raise ConditionsFailed("W fails the fractions conditions", rep)
    C = P.base
    S = _Search(P)
    Wl = list(P.W)

    vert, vert_id, vspan = {}, {}, {}
    for w1 in Wl:
        for w2 in Wl:
            if C.tgt(w1) != C.tgt(w2):
                continue
            sp = S.spans(w1, w2)
            if not sp:
                raise AssertionError(f"no span representing ({w1}) -> ({w2})")
            k = f"{w1}~{w2}"
            vert[k], vert_id[(w1, w2)], vspan[k] = (w1, w2), k, sp[0]
    X0 = FinCategory(
        Wl, {k: t for k, t in vert.items()}, {w: vert_id[(w, w)] for w in Wl},
        lambda g, f: _need(vert_id, (vert[f][0], vert[g][1]), "vertical composite"),
        "C{W}_0")

    hor, hor_id, groups = {}, {}, {}
    for w in Wl:
        for w2 in Wl:
            for f in C.hom(C.src(w), C.src(w2)):
                k = f"{f}:{w}>{w2}"
                hor[k] = (w, f, w2)
                hor_id[(w, f, w2)] = k
                groups.setdefault((C.tgt(w), C.tgt(w2)), []).append(k)

    cell, cell_id, wit = {}, {}, {}
    reverse = witness_order == "greatest"
    for key in groups:
        hs = groups[key]
        for h1 in hs:
            w1, f1, w1p = hor[h1]
            for h2 in hs:
                w2, f2, w2p = hor[h2]
                x = S.witness((w1, f1, w1p, w2, f2, w2p), reverse)
                if x is None:
                    continue
                k = f"{h1}=>{h2}"
                cell[k], cell_id[(h1, h2)], wit[k] = (h1, h2), k, x

    X1 = FinCategory(
        list(hor), {k: t for k, t in cell.items()},
        {h: _need(cell_id, (h, h), "identity cell") for h in hor},
        lambda b, a: _need(cell_id, (cell[a][0], cell[b][1]), "vertical composite of cells"),
        "C{W}_1")
    d0 = FinFunctor(X1, X0, {h: t[0] for h, t in hor.items()},
                    {c: vert_id[(hor[h1][0], hor[h2][0])] for c, (h1, h2) in cell.items()}, "d0")
    d1 = FinFunctor(X1, X0, {h: t[2] for h, t in hor.items()},
                    {c: vert_id[(hor[h1][2], hor[h2][2])] for c, (h1, h2) in cell.items()}, "d1")
    ids = {w: hor_id[(w, C.identity[C.src(w)], w)] for w in Wl}
    s = FinFunctor(X0, X1, ids,
                   {v: _need(cell_id, (ids[a], ids[b]), "identity cell on vertical")
                    for v, (a, b) in vert.items()}, "s")

    def hh(g, f):
        w, a, w1 = hor[f]
        _, b, w2 = hor[g]
        return hor_id[(w, C.comp(b, a), w2)]

    def hc(b, a):
        h1, h2 = cell[a]
        k1, k2 = cell[b]
        return _need(cell_id, (hh(k1, h1), hh(k2, h2)), "horizontal composite of cells")

    F = FractionsDouble(X0, X1, d0, d1, s, hh, hc, f"{C.name or 'C'}{{W}}")
    F.presentation = P
    F._search = S
    F.hor, F.hor_id = hor, hor_id
    F.vert, F.vert_id, F.vertical_span = vert, vert_id, vspan
    F.cell, F.cell_id, F.witness = cell, cell_id, wit
    return F


def cell_frame(F: FractionsDouble, c):
    h1, h2 = F.cell[c]
    return F.hor[h1] + F.hor[h2]


def representative_robustness(F: FractionsDouble) -> list:
    """Cells violating the all-representatives refinement condition.

    For every cell and every pair of representatives ``(u1, C, u2)`` and
    ``(u1', C', u2')`` of its vertical sides there must be ``r: D -> C`` with
    ``w1 u1 r`` in W and ``phi: D -> C'`` such that ``u1' phi = f1 u1 r`` and
    ``u2' phi = f2 u2 r``.  Returns ``(cell, left span, right span)`` triples.
    """
    P, Cat = F.presentation, F.presentation.base
    S = F._search
    bad = []
    for c in F.cell:
        w1, f1, w1p, w2, f2, w2p = cell_frame(F, c)
        right = S.spans(w1p, w2p)
        for X, u1, u2 in S.spans(w1, w2):
            k = Cat.comp(w1, u1)
            for Y, v1, v2 in right:
                ok = False
                for r in (a for a in Cat.arrows if Cat.tgt(a) == X):
                    if not P.in_W(Cat.comp(k, r)):
                        continue
                    a1 = Cat.comp_path(r, u1, f1)
                    a2 = Cat.comp_path(r, u2, f2)
                    if any(Cat.comp(v1, p) == a1 and Cat.comp(v2, p) == a2
                           for p in Cat.hom(Cat.src(r), Y)):
                        ok = True
                        break
                if not ok:
                    bad.append((c, (X, u1, u2), (Y, v1, v2)))
    return bad


def inclusion_JC(P: FractionsPresentation, F: FractionsDouble) -> DoubleFunctor:
    """J: H(C) -> C{W}, sending ``A`` to ``(1_A)``."""
    C = P.base
    H = horizontal_embedding(C)
    one = C.identity
    F0 = FinFunctor(H.X0, F.X0, {A: one[A] for A in C.objects},
                    {f"1[{A}]": F.vert_id[(one[A], one[A])] for A in C.objects}, "J0")
    hmap = {f: F.hor_id[(one[C.src(f)], f, one[C.tgt(f)])] for f in C.arrows}
    F1 = FinFunctor(H.X1, F.X1, hmap,
                    {f"1[{f}]": F.cell_id[(h, h)] for f, h in hmap.items()}, "J1")
    return DoubleFunctor(H, F, F0, F1, "J")


# ---------------------------------------------------------------------------
# companions in C{W}

def binding_cells(F: FractionsDouble, u, w):
    """``(h, v, psi, chi)`` for the companion ``u: (wu) -> (w)``."""
    C = F.presentation.base
    wu = C.comp(w, u)
    h = F.hor_id[(wu, u, w)]
    v = F.vert_id[(wu, w)]
    psi = F.cell_on(F.Id(wu), h)
    chi = F.cell_on(h, F.Id(w))
    return h, v, psi, chi


@dataclass
class CompanionClassification:
    entries: list

    @property
    def ok(self) -> bool:
        return all(e["agree"] for e in self.entries)

    def __bool__(self):
        return self.ok

    def disagreements(self):
        return [e for e in self.entries if not e["agree"]]

    def to_json(self):
        return {"ok": self.ok, "entries": self.entries}


def classify_for_companions(F: FractionsDouble) -> CompanionClassification:
    """Compare companion/conjoint searches with the normal forms on every arrow."""
    C = F.presentation.base
    out = []
    for v, (w1, w2) in F.vert.items():
        us = [u for u in C.hom(C.src(w1), C.src(w2)) if C.comp(w2, u) == w1]
        found = find_horizontal_companion(F, v)
        e = {"kind": "vertical-companion", "arrow": v, "normal_form": us[0] if us else None,
             "found": found.to_json() if found else None}
        agree = bool(us) == (found is not None)
        if us:
            h, vv, psi, chi = binding_cells(F, us[0], w2)
            agree = agree and psi is not None and chi is not None and \
                verify_companion(F, CompanionPair(h, vv, psi, chi))
        e["agree"] = agree
        out.append(e)
        us = [u for u in C.hom(C.src(w2), C.src(w1)) if C.comp(w1, u) == w2]
        found = find_horizontal_conjoint(F, v)
        out.append({"kind": "vertical-conjoint", "arrow": v,
                    "normal_form": us[0] if us else None,
                    "found": found.to_json() if found else None,
                    "agree": bool(us) == (found is not None)})
    for h, (w1, f, w2) in F.hor.items():
        form = C.comp(w2, f) == w1
        comp, conj = find_companion(F, h), find_conjoint(F, h)
        out.append({"kind": "horizontal", "arrow": h, "normal_form": form,
                    "companion": comp.to_json() if comp else None,
                    "conjoint": conj.to_json() if conj else None,
                    "agree": form == (comp is not None and conj is not None)})
    return CompanionClassification(out)


# ---------------------------------------------------------------------------
# cell factorization

@dataclass
class FactorFrame:
    label: str
    top: str
    bottom: str
    cell: Optional[str]

    def to_json(self):
        return {"label": self.label, "top": self.top, "bottom": self.bottom, "cell": self.cell}


@dataclass
class FactorPlan:
    cell: str
    rows: list
    composite: Optional[str]
    failure: Optional[str] = None

    @property
    def frames(self):
        return [fr for row in self.rows for fr in row]

    @property
    def ok(self) -> bool:
        return self.failure is None and self.composite == self.cell

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"cell": self.cell, "ok": self.ok, "composite": self.composite,
                "failure": self.failure,
                "rows": [[fr.to_json() for fr in row] for row in self.rows]}


def factor_cell(F: FractionsDouble, c) -> FactorPlan:
    """Write a cell as identity cells, binding cells and their inverses.

    Four rows of two cells each, composed horizontally and then stacked.
    """
    C = F.presentation.base
    w1, f1, w1p, w2, f2, w2p = cell_frame(F, c)
    x = F.witness[c]
    (_, u1, u2), (_, v1, v2), xi = x.left, x.right, x.phi
    k = C.comp(w1, u1)      # = w2 u2
    kp = C.comp(w1p, v1)    # = w2' v2
    H = F.hor_id
    top1, bot2 = H[(w1, f1, w1p)], H[(w2, f2, w2p)]
    xi_h = H[(k, xi, kp)]
    b_u1 = H[(k, u1, w1)]
    b_v1 = H[(kp, v1, w1p)]
    b_v2 = H[(kp, v2, w2p)]
    b_u2 = H[(k, u2, w2)]
    layout = [
        [("inverse chi(u1,w1)", F.Id(w1), b_u1), ("1(f1)", top1, top1)],
        [("1(xi)", xi_h, xi_h), ("inverse psi(v1,w1')", b_v1, F.Id(kp))],
        [("1(xi)", xi_h, xi_h), ("psi(v2,w2')", F.Id(kp), b_v2)],
        [("chi(u2,w2)", b_u2, F.Id(w2)), ("1(f2)", bot2, bot2)],
    ]
    rows = [[FactorFrame(lbl, t, b, F.cell_on(t, b)) for lbl, t, b in row] for row in layout]
    plan = FactorPlan(c, rows, None)
    for i, row in enumerate(rows, 1):
        for fr in row:
            if fr.cell is None:
                plan.failure = f"row {i}: no cell on frame {fr.label}"
                return plan
    for u, w in ((u1, w1), (v1, w1p), (v2, w2p), (u2, w2)):
        h, v, psi, chi = binding_cells(F, u, w)
        if psi is None or chi is None or not verify_companion(F, CompanionPair(h, v, psi, chi)):
            plan.failure = f"binding cells of {u} over {w} are not a companion pair"
            return plan
    try:
        row_cells = [F.hcomp_cell(r[1].cell, r[0].cell) for r in rows]
        plan.composite = F.vcomp_path(*row_cells)
    except (ValueError, AssertionError) as e:
        plan.failure = f"pasting failed: {e}"
    return plan


# ---------------------------------------------------------------------------
# triangles over W and the canonical structure

@dataclass
class NablaW:
    category: FinCategory
    D0: FinFunctor
    triangle: dict     # arrow id -> (v, w') with source w' v

    def arrow(self, v, w):
        return f"<{v},{w}>"


def _require_23(P: FractionsPresentation):
    rep = check_fractions_conditions(P, two_out_of_three=True)
    if not rep.passed:
        raise ConditionsFailed("W fails the conditions including 2-out-of-3", rep)
    return rep


def nabla_W(P: FractionsPresentation, check: bool = True) -> NablaW:
    if check:
        _require_23(P)
    C = P.base
    arrows, tri = {}, {}
    for w2 in P.W:
        for w1 in P.W:
            if C.tgt(w1) != C.tgt(w2):
                continue
            for v in C.hom(C.src(w1), C.src(w2)):
                if C.comp(w2, v) == w1:
                    k = f"<{v},{w2}>"
                    arrows[k], tri[k] = (w1, w2), (v, w2)
    ident = {w: f"<{C.identity[C.src(w)]},{w}>" for w in P.W}

    def comp(g, f):
        return f"<{C.comp(tri[g][0], tri[f][0])},{tri[g][1]}>"

    N = FinCategory(P.W, arrows, ident, comp, "nablaW")
    D0 = FinFunctor(N, C, {w: C.src(w) for w in P.W}, {k: t[0] for k, t in tri.items()}, "D0")
    return NablaW(N, D0, tri)


@dataclass
class WFriendlyStructure:
    """``(G, Gamma, gamma)`` relative to a presentation and a target ``D``.

    ``G: H(C) -> D`` and ``Gamma: V(nablaW) -> Comp(D)`` are strict functors;
    ``gamma[w]: Gamma(w) -> G(dom w)`` are horizontal arrows of ``D``.
    """
    presentation: FractionsPresentation
    nabla: NablaW
    target: DoubleCategory
    comp: CompDouble
    G: DoubleFunctor
    Gamma: DoubleFunctor
    gamma: dict

    def quad(self, a):
        return self.comp.quad[self.Gamma.vert(a)]

    def validate(self) -> Verdict:
        D, P = self.target, self.presentation
        for name, Fn in (("G", self.G), ("Gamma", self.Gamma)):
            v = check_strict_functor(Fn)
            if not v:
                return Verdict(False, f"{name}: {v.failure}", v.data)
        for w in P.W:
            g = self.gamma.get(w)
            if g is None or (D.hsrc(g), D.htgt(g)) != (self.Gamma.ob(w), self.G.ob(P.dom(w))):
                return Verdict(False, "gamma_w: Gamma(w) -> G(dom w)", (w,))
            if horizontal_inverse(D, g) is None:
                return Verdict(False, "gamma_w is horizontally invertible", (w,))
        for a, (u, w) in self.nabla.triangle.items():
            src = self.nabla.category.src(a)
            h = self.quad(a)[0]
            if D.hcomp(self.gamma[w], h) != D.hcomp(self.G.hor(u), self.gamma[src]):
                return Verdict(False, "gamma naturality", (a,))
        return Verdict(True)


def horizontal_inverse(D: DoubleCategory, h) -> Optional[str]:
    A, B = D.hsrc(h), D.htgt(h)
    for g in D.by_d0(B):
        if D.htgt(g) == A and D.hcomp(g, h) == D.Id(A) and D.hcomp(h, g) == D.Id(B):
            return g
    return None


@dataclass
class CanonicalStructure:
    structure: WFriendlyStructure
    J: DoubleFunctor
    Phi: DoubleFunctor
    phi: dict


def phi_functor(P: FractionsPresentation, F: FractionsDouble = None,
                CF: CompDouble = None) -> CanonicalStructure:
    """Phi: V(nablaW) -> Comp(C{W}) with ``phi_w = 1_A: (w) -> (1_A)``."""
    N = nabla_W(P)
    F = F or build_fractions(P)
    CF = CF or comp_double_category(F)
    C = P.base
    V = vertical_embedding(N.category)
    amap = {}
    for a, (u, w) in N.triangle.items():
        q = binding_cells(F, u, w)
        if q not in CF.quad_id:
            raise AssertionError(f"binding cells of {a} are not a companion quadruple")
        amap[a] = CF.quad_id[q]
    F0 = FinFunctor(V.X0, CF.X0, {w: w for w in P.W}, amap, "Phi0")
    F1 = FinFunctor(V.X1, CF.X1, {f"Id[{w}]": F.Id(w) for w in P.W},
                    {f"id[{a}]": CF.s.arr_map[q] for a, q in amap.items()}, "Phi1")
    Phi = DoubleFunctor(V, CF, F0, F1, "Phi")
    J = inclusion_JC(P, F)
    one = C.identity
    phi = {w: F.hor_id[(w, one[C.src(w)], one[C.src(w)])] for w in P.W}
    S = WFriendlyStructure(P, N, F, CF, J, Phi, phi)
    return CanonicalStructure(S, J, Phi, phi)


def structure_for_identities(P: FractionsPresentation, G: DoubleFunctor,
                             CD: CompDouble = None) -> WFriendlyStructure:
    """The structure ``(G, Gamma, Id)`` available when W has only identities."""
    C, D = P.base, G.cod
    if set(P.W) != set(C.identity.values()):
        raise ValueError("W must consist of the identities")
    N = nabla_W(P)
    CD = CD or comp_double_category(D)
    V = vertical_embedding(N.category)
    obj = {w: G.ob(C.src(w)) for w in P.W}
    F0 = FinFunctor(V.X0, CD.X0, obj, {a: CD.X0.identity[obj[w]]
                                       for a, (_, w) in N.triangle.items()}, "Gamma0")
    F1 = FinFunctor(V.X1, CD.X1, {f"Id[{w}]": D.Id(obj[w]) for w in P.W},
                    {f"id[{a}]": CD.X1.identity[D.Id(obj[w])]
                     for a, (_, w) in N.triangle.items()}, "Gamma1")
    Gamma = DoubleFunctor(V, CD, F0, F1, "Gamma")
    return WFriendlyStructure(P, N, D, CD, G, Gamma, {w: D.Id(obj[w]) for w in P.W})


# ---------------------------------------------------------------------------
# lifting along J

@dataclass
class LiftResult:
    functor: DoubleFunctor
    comparison: HorizontalTransformation
    functor_verdict: Verdict
    comparison_verdict: Verdict
    invertible: bool

    @property
    def ok(self) -> bool:
        return bool(self.functor_verdict) and bool(self.comparison_verdict) and self.invertible

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {
            "ok": self.ok,
            "functor": self.functor_verdict.to_json(),
            "comparison": self.comparison_verdict.to_json(),
            "invertible": self.invertible,
            "components": dict(self.comparison.components),
        }


def lift_w_friendly(S: WFriendlyStructure, F: FractionsDouble = None) -> LiftResult:
    """The strict functor C{W} -> D induced by a structure, with its comparison."""
    P, D = S.presentation, S.target
    C = P.base
    F = F or build_fractions(P)
    hinv_cache = {}

    def hinv(h):
        if h not in hinv_cache:
            g = horizontal_inverse(D, h)
            if g is None:
                raise PastingUndefined("gamma", f"{h} has no horizontal inverse")
            hinv_cache[h] = g
        return hinv_cache[h]

    def tri(u, w):
        return S.quad(S.nabla.arrow(u, w))

    vmap = {}
    for k, (w1, w2) in F.vert.items():
        _, u1, u2 = F.vertical_span[k]
        a = tri(u1, w1)[1]
        b = tri(u2, w2)[1]
        ainv = D.X0.inverse(a)
        if ainv is None:
            raise PastingUndefined("vertical", f"{a} is not invertible")
        vmap[k] = D.X0.comp(b, ainv)

    def gt_hor(w, f, w2):
        return D.hcomp_path(S.gamma[w], S.G.hor(f), hinv(S.gamma[w2]))

    hmap = {h: gt_hor(*t) for h, t in F.hor.items()}

    def vinv(c, row):
        i = D.X1.inverse(c)
        if i is None:
            raise PastingUndefined(row, f"binding cell {c} is not vertically invertible")
        return i

    def hc(row, b, a):
        try:
            return D.hcomp_cell(b, a)
        except ValueError as e:
            raise PastingUndefined(row, str(e)) from None

    cmap = {}
    for c in F.cell:
        w1, f1, w1p, w2, f2, w2p = cell_frame(F, c)
        x = F.witness[c]
        (_, u1, u2), (_, v1, v2), xi = x.left, x.right, x.phi
        k, kp = C.comp(w1, u1), C.comp(w1p, v1)
        top, bottom = hmap[F.hor_id[(w1, f1, w1p)]], hmap[F.hor_id[(w2, f2, w2p)]]
        xi_h = gt_hor(k, xi, kp)
        rows = [
            hc("row 1", D.one(top), vinv(tri(u1, w1)[3], "row 1")),
            hc("row 2", vinv(tri(v1, w1p)[2], "row 2"), D.one(xi_h)),
            hc("row 3", tri(v2, w2p)[2], D.one(xi_h)),
            hc("row 4", D.one(bottom), tri(u2, w2)[3]),
        ]
        for i in range(3):
            if D.bottom(rows[i]) != D.top(rows[i + 1]):
                raise PastingUndefined(f"rows {i + 1}-{i + 2}",
                                       f"{D.bottom(rows[i])} != {D.top(rows[i + 1])}")
        try:
            cmap[c] = D.vcomp_path(*rows)
        except ValueError as e:
            raise PastingUndefined("vertical pasting", str(e)) from None

    F0 = FinFunctor(F.X0, D.X0, {w: S.Gamma.ob(w) for w in F.objects}, vmap, "Gt0")
    F1 = FinFunctor(F.X1, D.X1, hmap, cmap, "Gt1")
    Gt = DoubleFunctor(F, D, F0, F1, "Gt")
    fv = check_strict_functor(Gt)

    J = inclusion_JC(P, F)
    comps = {A: S.gamma[C.identity[A]] for A in C.objects}
    cells = {f"1[{A}]": D.one(comps[A]) for A in C.objects}
    gbar = HorizontalTransformation(J.then(Gt), S.G, comps, cells)
    tv = check_horizontal_transformation(gbar) if fv else Verdict(False, "lift is not a strict functor")
    inv = all(horizontal_inverse(D, h) is not None for h in comps.values())
    return LiftResult(Gt, gbar, fv, tv, inv)


def check_w_friendly_transformation(S1: WFriendlyStructure, S2: WFriendlyStructure,
                                    a: HorizontalTransformation,
                                    alpha: HorizontalTransformation) -> Verdict:
    """``a: G1 => G2`` and ``alpha: Gamma1 => Gamma2`` with ``a_dom(w) gamma1_w = gamma2_w alpha_w``."""
    D, P = S1.target, S1.presentation
    for name, t in (("a", a), ("alpha", alpha)):
        v = check_horizontal_transformation(t)
        if not v:
            return Verdict(False, f"{name}: {v.failure}", v.data)
    for w in P.W:
        lhs = D.hcomp(a.components[P.dom(w)], S1.gamma[w])
        rhs = D.hcomp(S2.gamma[w], alpha.components[w])
        if lhs != rhs:
            return Verdict(False, "square a . gamma = lambda . alpha fails", (w,))
    return Verdict(True)


def identity_pair(S: WFriendlyStructure):
    """Identity transformations on ``G`` and ``Gamma``."""
    D, CD = S.target, S.comp
    G, Gm = S.G, S.Gamma
    a = HorizontalTransformation(
        G, G, {A: D.Id(G.ob(A)) for A in G.dom.objects},
        {v: D.idv(G.vert(v)) for v in G.dom.X0.arrows})
    alpha = HorizontalTransformation(
        Gm, Gm, {w: CD.Id(Gm.ob(w)) for w in Gm.dom.objects},
        {v: CD.idv(Gm.vert(v)) for v in Gm.dom.X0.arrows})
    return a, alpha
