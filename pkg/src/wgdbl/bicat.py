"""Finite bicategories and the constructions relating them to double categories.

A bicategory stores one finite category per hom (2-cells under vertical
composition), horizontal composition of 1-cells and 2-cells, and associator
and unitor components.  Omitted coherence data means the bicategory is a
strict 2-category.  When every hom-category is posetal, the coherence
equations hold automatically and only the existence of the cells is checked.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .dblcat import (DoubleCategory, composable_lift, hom_category,
                     require_wg, _invertible_cells_into)
from .errors import (BicategoryAxiomError, BicategoryInterchangeViolation,
                     CoherenceSearchFailed, ConditionsFailed, ParseError, PentagonViolation,
                     TriangleViolation, UnsupportedBicategory)
from .fincat import (EquivalenceVerdict, FinCategory, FinFunctor,
                     check_category, is_equivalence, validate_category)
from .fractions import (FractionsPresentation, build_fractions, cf2_square,
                        check_fractions_conditions)


def _lookup(table, key, what):
    if callable(table):
        return table(*key) if isinstance(key, tuple) else table(key)
    try:
        return table[key]
    except KeyError:
        raise BicategoryAxiomError(f"missing {what} for {key}", key if isinstance(key, tuple) else (key,)) from None


class Bicategory:
    def __init__(self, objects, cells1: Mapping, units: Mapping, homs: Mapping,
                 comp1, comp2, assoc=None, lunit=None, runit=None, name: str = ""):
        self.objects = tuple(objects)
        self.cells1 = dict(cells1)
        self.units = dict(units)
        self.homs = dict(homs)
        self._c1, self._c2 = comp1, comp2
        self._a, self._l, self._r = assoc, lunit, runit
        self.name = name
        self.strict = assoc is None and lunit is None and runit is None
        self.cell2 = {}
        for key, H in self.homs.items():
            for a in H.arrows:
                self.cell2[a] = key
        self.locally_posetal = all(H.is_posetal() for H in self.homs.values())
        self._empty = {}

    # -- access -----------------------------------------------------------
    def src1(self, f):
        return self.cells1[f][0]

    def tgt1(self, f):
        return self.cells1[f][1]

    def hom(self, A, B) -> FinCategory:
        H = self.homs.get((A, B))
        if H is None:
            H = self._empty.setdefault((A, B), FinCategory([], {}, {}, {}, f"hom({A},{B})"))
        return H

    def cells_between(self, A, B):
        return self.hom(A, B).objects

    def dom2(self, a):
        return self.homs[self.cell2[a]].src(a)

    def cod2(self, a):
        return self.homs[self.cell2[a]].tgt(a)

    def id2(self, f):
        return self.hom(self.src1(f), self.tgt1(f)).identity[f]

    def vcomp2(self, b, a):
        return self.homs[self.cell2[a]].comp(b, a)

    def vcomp2_path(self, *cells):
        out = cells[0]
        for c in cells[1:]:
            out = self.vcomp2(c, out)
        return out

    def inverse2(self, a):
        return self.homs[self.cell2[a]].inverse(a)

    def is_invertible2(self, a) -> bool:
        return self.inverse2(a) is not None

    def hcomp1(self, g, f):
        """``g . f`` for ``f: A -> B`` and ``g: B -> C``."""
        if self.tgt1(f) != self.src1(g):
            raise ValueError(f"1-cells {f}, {g} are not composable")
        return _lookup(self._c1, (g, f), "composite of 1-cells")

    def hcomp2(self, b, a):
        return _lookup(self._c2, (b, a), "composite of 2-cells")

    def assoc(self, h, g, f):
        """``(h g) f => h (g f)``."""
        if self._a is None:
            return self.id2(self.hcomp1(self.hcomp1(h, g), f))
        return _lookup(self._a, (h, g, f), "associator")

    def lunit(self, f):
        """``1 . f => f``."""
        if self._l is None:
            return self.id2(f)
        return _lookup(self._l, f, "left unitor")

    def runit(self, f):
        """``f . 1 => f``."""
        if self._r is None:
            return self.id2(f)
        return _lookup(self._r, f, "right unitor")

    def composable1(self):
        by_src = {}
        for f, (A, _) in self.cells1.items():
            by_src.setdefault(A, []).append(f)
        for f, (_, B) in self.cells1.items():
            for g in by_src.get(B, ()):
                yield g, f

    def has_invertible_2cell(self, f, g) -> Optional[str]:
        H = self.hom(self.src1(f), self.tgt1(f))
        if self.src1(g) != self.src1(f) or self.tgt1(g) != self.tgt1(f):
            return None
        for a in H.hom(f, g):
            if H.is_iso(a):
                return a
        return None

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "objects": list(self.objects),
            "cells1": [{"id": f, "src": A, "tgt": B} for f, (A, B) in self.cells1.items()],
            "units": dict(self.units),
            "homs": [{"src": A, "tgt": B, "category": H.to_json()}
                     for (A, B), H in self.homs.items()],
            "comp1": [[g, f, self.hcomp1(g, f)] for g, f in self.composable1()],
            "comp2": [],
        }
        for (A, B), H in self.homs.items():
            for a in H.arrows:
                for C in self.objects:
                    H2 = self.homs.get((B, C))
                    if H2 is None:
                        continue
                    for b in H2.arrows:
                        out["comp2"].append([b, a, self.hcomp2(b, a)])
        if not self.strict:
            out["assoc"] = [[h, g, f, self.assoc(h, g, f)] for h, g, f in self._triples()]
            out["lunit"] = {f: self.lunit(f) for f in self.cells1}
            out["runit"] = {f: self.runit(f) for f in self.cells1}
        return out

    def _triples(self):
        for g, f in self.composable1():
            for h in self.cells1:
                if self.src1(h) == self.tgt1(g):
                    yield h, g, f

    def __repr__(self):
        return (f"Bicategory({self.name or '?'}: {len(self.objects)} objects, "
                f"{len(self.cells1)} 1-cells, {len(self.cell2)} 2-cells)")


def bicategory_from_json(raw) -> Bicategory:
    if not isinstance(raw, Mapping):
        raise ParseError("bicategory presentation must be an object")
    for key in ("objects", "cells1", "units", "homs"):
        if key not in raw:
            raise ParseError(f"missing key '{key}'")
    cells1 = {}
    for i, rec in enumerate(raw["cells1"]):
        try:
            cells1[str(rec["id"])] = (str(rec["src"]), str(rec["tgt"]))
        except (KeyError, TypeError):
            raise ParseError("1-cell record needs id, src, tgt", f"cells1[{i}]") from None
    homs = {}
    for i, rec in enumerate(raw["homs"]):
        try:
            A, B = str(rec["src"]), str(rec["tgt"])
            homs[(A, B)] = validate_category(rec["category"])
        except (KeyError, TypeError):
            raise ParseError("hom record needs src, tgt, category", f"homs[{i}]") from None
    c1 = {(str(g), str(f)): str(h) for g, f, h in raw.get("comp1", [])}
    c2 = {(str(b), str(a)): str(c) for b, a, c in raw.get("comp2", [])}
    assoc = lunit = runit = None
    if "assoc" in raw or "lunit" in raw or "runit" in raw:
        assoc = {(str(h), str(g), str(f)): str(c) for h, g, f, c in raw.get("assoc", [])}
        lunit = {str(k): str(v) for k, v in raw.get("lunit", {}).items()}
        runit = {str(k): str(v) for k, v in raw.get("runit", {}).items()}
    units = {str(k): str(v) for k, v in raw["units"].items()}
    return Bicategory(raw["objects"], cells1, units, homs, c1, c2, assoc, lunit, runit,
                      raw.get("name", ""))


def validate_bicategory(data, coherence: bool = True, check_homs: bool = True) -> Bicategory:
    B = data if isinstance(data, Bicategory) else bicategory_from_json(data)
    objs = set(B.objects)
    for f, (A, C) in B.cells1.items():
        if A not in objs or C not in objs:
            raise ParseError(f"1-cell {f} has an unknown endpoint", "cells1")
    for (A, C), H in B.homs.items():
        if check_homs:
            check_category(H)
        expected = {f for f, st in B.cells1.items() if st == (A, C)}
        if set(H.objects) != expected:
            raise BicategoryAxiomError(f"hom({A},{C}) objects differ from the 1-cells {A} -> {C}", (A, C))
    for f, st in B.cells1.items():
        if st not in B.homs:
            raise BicategoryAxiomError(f"no hom-category for 1-cell {f}", (f,))
    for A in B.objects:
        u = B.units.get(A)
        if u is None or B.cells1.get(u) != (A, A):
            raise BicategoryAxiomError(f"unit of {A} missing or not an endo-1-cell", (A,))
    for g, f in B.composable1():
        h = B.hcomp1(g, f)
        if B.cells1.get(h) != (B.src1(f), B.tgt1(g)):
            raise BicategoryAxiomError(f"composite {g} . {f} = {h} has wrong type", (g, f))
    pairs = []
    for (A, C), H in B.homs.items():
        for (C2, D), K in B.homs.items():
            if C2 == C:
                pairs.append((H, K))
    for H, K in pairs:
        if B.locally_posetal:
            # a 2-cell is determined by its boundary; only existence matters
            comp = {(g, f): B.hcomp1(g, f) for f in H.objects for g in K.objects}
            if not comp:
                continue
            M = B.hom(B.src1(next(iter(comp.values()))), B.tgt1(next(iter(comp.values()))))
            for a, (f, f2) in H.arrows.items():
                for b, (g, g2) in K.arrows.items():
                    if not M.hom(comp[(g, f)], comp[(g2, f2)]):
                        raise BicategoryInterchangeViolation(f"{b} * {a} has no 2-cell", (b, a))
            continue
        for a in H.arrows:
            for b in K.arrows:
                c = B.hcomp2(b, a)
                want = (B.hcomp1(K.src(b), H.src(a)), B.hcomp1(K.tgt(b), H.tgt(a)))
                if c not in B.cell2 or (B.dom2(c), B.cod2(c)) != want:
                    raise BicategoryInterchangeViolation(f"{b} * {a} has the wrong boundary", (b, a, c))
        for f in H.objects:
            for g in K.objects:
                if B.hcomp2(K.identity[g], H.identity[f]) != B.id2(B.hcomp1(g, f)):
                    raise BicategoryInterchangeViolation(
                        f"1_{g} * 1_{f} is not the identity", (g, f))
        for a2, a1 in H.composable_pairs():
            for b2, b1 in K.composable_pairs():
                lhs = B.hcomp2(K.comp(b2, b1), H.comp(a2, a1))
                rhs = B.vcomp2(B.hcomp2(b2, a2), B.hcomp2(b1, a1))
                if lhs != rhs:
                    raise BicategoryInterchangeViolation("interchange law fails", (a1, a2, b1, b2))
    if B.strict:
        for h, g, f in B._triples():
            if B.hcomp1(B.hcomp1(h, g), f) != B.hcomp1(h, B.hcomp1(g, f)):
                raise PentagonViolation(f"strict composition not associative on {h}, {g}, {f}", (h, g, f))
        for f in B.cells1:
            if B.hcomp1(B.units[B.tgt1(f)], f) != f or B.hcomp1(f, B.units[B.src1(f)]) != f:
                raise TriangleViolation(f"strict units fail on {f}", (f,))
        return B
    _check_coherence_cells(B)
    if coherence and not B.locally_posetal:
        _check_coherence_equations(B)
    return B


def _typed(B, c, dom, cod, what, data):
    if c not in B.cell2 or B.dom2(c) != dom or B.cod2(c) != cod:
        raise BicategoryAxiomError(f"{what} has the wrong boundary", data)
    if not B.is_invertible2(c):
        raise BicategoryAxiomError(f"{what} is not invertible", data)


def _check_coherence_cells(B):
    for h, g, f in B._triples():
        _typed(B, B.assoc(h, g, f), B.hcomp1(B.hcomp1(h, g), f), B.hcomp1(h, B.hcomp1(g, f)),
               f"associator at ({h}, {g}, {f})", (h, g, f))
    for f in B.cells1:
        _typed(B, B.lunit(f), B.hcomp1(B.units[B.tgt1(f)], f), f, f"left unitor at {f}", (f,))
        _typed(B, B.runit(f), B.hcomp1(f, B.units[B.src1(f)]), f, f"right unitor at {f}", (f,))


def _check_coherence_equations(B):
    one = B.id2
    for h, g, f in B._triples():
        for k in B.cells1:
            if B.src1(k) != B.tgt1(h):
                continue
            lhs = B.vcomp2(B.assoc(k, h, B.hcomp1(g, f)), B.assoc(B.hcomp1(k, h), g, f))
            rhs = B.vcomp2_path(B.hcomp2(B.assoc(k, h, g), one(f)),
                                B.assoc(k, B.hcomp1(h, g), f),
                                B.hcomp2(one(k), B.assoc(h, g, f)))
            if lhs != rhs:
                raise PentagonViolation(f"pentagon fails on ({k}, {h}, {g}, {f})", (k, h, g, f))
    for g, f in B.composable1():
        u = B.units[B.tgt1(f)]
        lhs = B.vcomp2(B.hcomp2(one(g), B.lunit(f)), B.assoc(g, u, f))
        rhs = B.hcomp2(B.runit(g), one(f))
        if lhs != rhs:
            raise TriangleViolation(f"triangle fails on ({g}, {f})", (g, f))
    for (A, C), H in B.homs.items():
        for (C2, D), K in B.homs.items():
            if C2 != C:
                continue
            for (D2, E), M in B.homs.items():
                if D2 != D:
                    continue
                for a in H.arrows:
                    for b in K.arrows:
                        for c in M.arrows:
                            f, g, h = H.src(a), K.src(b), M.src(c)
                            f2, g2, h2 = H.tgt(a), K.tgt(b), M.tgt(c)
                            lhs = B.vcomp2(B.hcomp2(c, B.hcomp2(b, a)), B.assoc(h, g, f))
                            rhs = B.vcomp2(B.assoc(h2, g2, f2), B.hcomp2(B.hcomp2(c, b), a))
                            if lhs != rhs:
                                raise BicategoryAxiomError(
                                    f"associator not natural at ({c}, {b}, {a})", (c, b, a))
    for (A, C), H in B.homs.items():
        for a in H.arrows:
            f, f2 = H.src(a), H.tgt(a)
            u = B.units[C]
            if B.vcomp2(a, B.lunit(f)) != B.vcomp2(B.lunit(f2), B.hcomp2(one(u), a)):
                raise BicategoryAxiomError(f"left unitor not natural at {a}", (a,))
            u = B.units[A]
            if B.vcomp2(a, B.runit(f)) != B.vcomp2(B.runit(f2), B.hcomp2(a, one(u))):
                raise BicategoryAxiomError(f"right unitor not natural at {a}", (a,))


# ---------------------------------------------------------------------------
# simple bicategories

def locally_discrete(C: FinCategory, name: str = "") -> Bicategory:
    """A category viewed as a bicategory with identity 2-cells only."""
    homs = {}
    for f, (A, B) in C.arrows.items():
        homs.setdefault((A, B), [])
        homs[(A, B)].append(f)
    hc = {}
    for (A, B), fs in homs.items():
        hc[(A, B)] = FinCategory(fs, {f"1[{f}]": (f, f) for f in fs},
                                 {f: f"1[{f}]" for f in fs}, {}, f"hom({A},{B})")

    def c2(b, a):
        return f"1[{C.comp(b[2:-1], a[2:-1])}]"

    return Bicategory(C.objects, C.arrows, C.identity, hc, C.comp, c2, name=name or C.name)


# ---------------------------------------------------------------------------
# quasi units and equivalences

def quasi_units(B: Bicategory) -> list:
    out = []
    for f, (A, C) in B.cells1.items():
        if A == C and B.has_invertible_2cell(f, B.units[A]) is not None:
            out.append(f)
    return sorted(out)


def pseudo_inverse(B: Bicategory, f) -> Optional[str]:
    A, C = B.cells1[f]
    for g in sorted(B.cells_between(C, A)):
        if (B.has_invertible_2cell(B.hcomp1(g, f), B.units[A]) is not None
                and B.has_invertible_2cell(B.hcomp1(f, g), B.units[C]) is not None):
            return g
    return None


def equivalences(B: Bicategory) -> list:
    return sorted(f for f in B.cells1 if pseudo_inverse(B, f) is not None)


# ---------------------------------------------------------------------------
# the fundamental bicategory

def _lift(X, f, g, reverse):
    if not reverse:
        return composable_lift(X, f, g)
    if X.htgt(f) == X.hsrc(g):
        return f, g, X.one(f), X.one(g)
    into_f = _invertible_cells_into(X, f)
    into_g = _invertible_cells_into(X, g)
    best = None
    for a in into_f:
        for b in into_g:
            if X.htgt(X.top(a)) == X.hsrc(X.top(b)):
                key = (X.top(a), X.top(b), a, b)
                if best is None or key > best:
                    best = key
    return best


def _invertible_between(X, top, bottom):
    ident = X.one(top) if top == bottom else None
    cands = sorted(a for a in X.X1.hom(top, bottom) if X.X1.is_iso(a))
    if ident in cands:
        return ident
    return cands[0] if cands else None


def fundamental_bicategory(X: DoubleCategory, report=None, reverse: bool = False,
                           validate: bool = True) -> Bicategory:
    """Bic(X): objects the classes of vertically connected objects.

    Representatives are the least identifiers (greatest with ``reverse``);
    composites use chosen composable lifts.
    """
    r = require_wg(X, report)
    classes = r.x0_verdict.classes
    reps = [(max(c) if reverse else c[0]) for c in classes]
    gamma = {}
    for c, rep in zip(classes, reps):
        for o in c:
            gamma[o] = rep
    cells1 = {h: (gamma[X.hsrc(h)], gamma[X.htgt(h)]) for h in X.X1.objects}
    homs = {}
    for a in reps:
        for b in reps:
            H = hom_category(X, a, b, gamma)
            if H.objects:
                homs[(a, b)] = H
    units = {a: X.Id(a) for a in reps}
    lifts = {}

    def lift(f, g):
        key = (f, g)
        if key not in lifts:
            out = _lift(X, f, g, reverse)
            if out is None:
                raise CoherenceSearchFailed(f"no composable lift for {f}, {g}")
            lifts[key] = out
        return lifts[key]

    composites = {}

    def comp1(g, f):
        key = (g, f)
        if key not in composites:
            f3, g3, _, _ = lift(f, g)
            composites[key] = X.hcomp(g3, f3)
        return composites[key]

    def comp2(b, a):
        f, f2 = X.top(a), X.bottom(a)
        g, g2 = X.top(b), X.bottom(b)
        _, _, pf, pg = lift(f, g)
        _, _, pf2, pg2 = lift(f2, g2)
        A = X.vcomp_path(pf, a, X.X1.inverse(pf2))
        Bc = X.vcomp_path(pg, b, X.X1.inverse(pg2))
        return X.hcomp_cell(Bc, A)

    def search(top, bottom, what):
        c = _invertible_between(X, top, bottom)
        if c is None:
            raise CoherenceSearchFailed(f"no invertible {what} cell {top} => {bottom}")
        return c

    def assoc(h, g, f):
        return search(comp1(comp1(h, g), f), comp1(h, comp1(g, f)), "associator")

    def lunit(f):
        return search(comp1(units[cells1[f][1]], f), f, "left unitor")

    def runit(f):
        return search(comp1(f, units[cells1[f][0]]), f, "right unitor")

    B = Bicategory(reps, cells1, units, homs, comp1, comp2, assoc, lunit, runit,
                   f"Bic({X.name})")
    B.gamma = gamma
    B.double = X
    if validate:
        try:
            # hom-categories are full subcategories of X1
            validate_bicategory(B, check_homs=False)
        except BicategoryAxiomError as e:
            raise CoherenceSearchFailed(f"chosen coherence cells fail: {e}") from e
    return B


# ---------------------------------------------------------------------------
# marked paths

@dataclass(frozen=True)
class MarkedPathObject:
    start: str
    path: tuple
    i0: int

    @property
    def marked(self):
        return self.i0


@dataclass(frozen=True)
class MarkedPathHArrow:
    start: str
    path: tuple
    i0: int
    i1: int


def _paths(B: Bicategory, L: int):
    out = [(A, ()) for A in B.objects]
    frontier = list(out)
    by_src = {}
    for f, (A, _) in B.cells1.items():
        by_src.setdefault(A, []).append(f)
    for _ in range(L):
        nxt = []
        for A, p in frontier:
            end = B.tgt1(p[-1]) if p else A
            for f in by_src.get(end, ()):
                nxt.append((A, p + (f,)))
        out.extend(nxt)
        frontier = nxt
    return out


def _vertex(B, A, p, i):
    return A if i == 0 else B.tgt1(p[i - 1])


def _pname(A, p):
    return A if not p else ".".join(p)


def marked_paths_double(B: Bicategory, L: int) -> DoubleCategory:
    """Dbl(B) restricted to paths of length at most ``L``."""
    if L < 0:
        raise ValueError("path length bound must be non-negative")
    if not (B.strict or B.locally_posetal):
        raise UnsupportedBicategory("marked paths need a strict or locally posetal bicategory")
    paths = _paths(B, L)
    chosen = {}

    def phi(A, seg):
        key = (A, seg)
        if key not in chosen:
            if not seg:
                chosen[key] = B.units[A]
            else:
                out = seg[0]
                for f in seg[1:]:
                    out = B.hcomp1(f, out)
                chosen[key] = out
        return chosen[key]

    def Phi(A, s1, s2):
        """Comparison ``phi(s2) . phi(s1) => phi(s1 s2)``."""
        mid = B.tgt1(s1[-1]) if s1 else A
        src = B.hcomp1(phi(mid, s2), phi(A, s1))
        tgt = phi(A, s1 + s2)
        if B.strict:
            if src != tgt:
                raise UnsupportedBicategory("strict composition is not associative")
            return B.id2(tgt)
        H = B.hom(B.src1(tgt), B.tgt1(tgt))
        cs = H.hom(src, tgt)
        if not cs:
            raise CoherenceSearchFailed(f"no comparison cell {src} => {tgt}")
        return cs[0]

    objs, obj_data, marked = [], {}, {}
    hors, hor_data = [], {}
    for A, p in paths:
        n = len(p)
        for i in range(n + 1):
            o = f"{_pname(A, p)}@{i}"
            objs.append(o)
            obj_data[o] = MarkedPathObject(A, p, i)
            marked[o] = _vertex(B, A, p, i)
        for i in range(n + 1):
            for j in range(i, n + 1):
                h = f"{_pname(A, p)}@{i}-{j}"
                hors.append(h)
                hor_data[h] = MarkedPathHArrow(A, p, i, j)

    by_marked = {}
    for o in objs:
        by_marked.setdefault(marked[o], []).append(o)
    varrows = {}
    for group in by_marked.values():
        for o1 in group:
            for o2 in group:
                varrows[f"{o1}=>{o2}"] = (o1, o2)
    X0 = FinCategory(objs, varrows, {o: f"{o}=>{o}" for o in objs},
                     lambda g, f: f"{varrows[f][0]}=>{varrows[g][1]}", f"Dbl({B.name})_0")

    def seg(h):
        d = hor_data[h]
        return d.path[d.i0:d.i1]

    def hstart(h):
        d = hor_data[h]
        return _vertex(B, d.start, d.path, d.i0)

    def hend(h):
        d = hor_data[h]
        return _vertex(B, d.start, d.path, d.i1)

    def composite(h):
        return phi(hstart(h), seg(h))

    by_ends = {}
    for h in hors:
        by_ends.setdefault((hstart(h), hend(h)), []).append(h)
    cells, cell_data = {}, {}
    for (A, C), group in by_ends.items():
        for h1 in group:
            c1 = composite(h1)
            for h2 in group:
                c2 = composite(h2)
                for a in B.hom(A, C).hom(c1, c2):
                    k = f"{h1}|{h2}|{a}"
                    cells[k] = (h1, h2)
                    cell_data[k] = (h1, h2, a)
    cell_id = {v: k for k, v in cell_data.items()}

    def vc(b, a):
        h1, _, x = cell_data[a]
        _, h3, y = cell_data[b]
        return cell_id[(h1, h3, B.vcomp2(y, x))]

    X1 = FinCategory(hors, cells, {h: cell_id[(h, h, B.id2(composite(h)))] for h in hors},
                     vc, f"Dbl({B.name})_1")

    def dobj(h, end):
        d = hor_data[h]
        return f"{_pname(d.start, d.path)}@{d.i1 if end else d.i0}"

    d0 = FinFunctor(X1, X0, {h: dobj(h, False) for h in hors},
             {k: f"{dobj(h1, False)}=>{dobj(h2, False)}" for k, (h1, h2) in cells.items()}, "d0")
    d1 = FinFunctor(X1, X0, {h: dobj(h, True) for h in hors},
             {k: f"{dobj(h1, True)}=>{dobj(h2, True)}" for k, (h1, h2) in cells.items()}, "d1")

    def ident_h(o):
        d = obj_data[o]
        return f"{_pname(d.start, d.path)}@{d.i0}-{d.i0}"

    s = FinFunctor(X0, X1, {o: ident_h(o) for o in objs},
            {v: cell_id[(ident_h(o1), ident_h(o2), B.id2(B.units[marked[o1]]))]
             for v, (o1, o2) in varrows.items()}, "s")

    def hh(g, f):
        d, e = hor_data[f], hor_data[g]
        return f"{_pname(d.start, d.path)}@{d.i0}-{e.i1}"

    def hc(b, a):
        h1, h2, x = cell_data[a]
        k1, k2, y = cell_data[b]
        top, bottom = hh(k1, h1), hh(k2, h2)
        pf = Phi(hstart(h1), seg(h1), seg(k1))
        pg = Phi(hstart(h2), seg(h2), seg(k2))
        inner = B.hcomp2(y, x)
        return cell_id[(top, bottom, B.vcomp2_path(B.inverse2(pf), inner, pg))]

    D = DoubleCategory(X0, X1, d0, d1, s, hh, hc, f"Dbl({B.name},{L})")
    D.bicategory = B
    D.obj_data, D.hor_data, D.cell_data = obj_data, hor_data, cell_data
    D.marked = marked
    D.chosen_composite = composite
    D.max_length = L
    return D


# ---------------------------------------------------------------------------
# the bicategory of fractions

def bicat_of_fractions(P: FractionsPresentation, check: bool = True) -> Bicategory:
    """C(W^-1): spans ``(w, f)`` with ``w`` in W, at most one 2-cell per pair."""
    if check:
        rep = check_fractions_conditions(P, two_out_of_three=False)
        if not rep.passed:
            raise ConditionsFailed("W fails the fractions conditions", rep)
    C = P.base
    cells1, spans = {}, {}
    for w in P.W:
        for f in C.arrows:
            if C.src(f) != C.src(w):
                continue
            k = f"({w},{f})"
            cells1[k] = (C.tgt(w), C.tgt(f))
            spans[k] = (w, f)
    span_id = {v: k for k, v in spans.items()}

    def two_cell(x, y) -> bool:
        (w1, f1), (w2, f2) = spans[x], spans[y]
        for T in C.objects:
            for u1 in C.hom(T, C.src(w1)):
                k = C.comp(w1, u1)
                if not P.in_W(k):
                    continue
                for u2 in C.hom(T, C.src(w2)):
                    if C.comp(w2, u2) == k and C.comp(f1, u1) == C.comp(f2, u2):
                        return True
        return False

    by_hom = {}
    for k, st in cells1.items():
        by_hom.setdefault(st, []).append(k)
    homs = {}
    for (A, Bo), ks in by_hom.items():
        arrows = {}
        for x in ks:
            for y in ks:
                if x == y or two_cell(x, y):
                    arrows[f"{x}=>{y}"] = (x, y)
        homs[(A, Bo)] = FinCategory(
            ks, arrows, {x: f"{x}=>{x}" for x in ks},
            lambda b, a, arrows=arrows: _posetal_comp(arrows, b, a), f"hom({A},{Bo})")
    units = {A: span_id[(C.identity[A], C.identity[A])] for A in C.objects}

    def comp1(g, f):
        w1, a = spans[f]
        w2, b = spans[g]
        _, ab, wb = cf2_square(P, a, w2)
        return span_id[(C.comp(w1, wb), C.comp(b, ab))]

    def unique(x, y, what):
        k = f"{x}=>{y}"
        if k not in homs[cells1[x]].arrows:
            raise BicategoryAxiomError(f"no {what} 2-cell {x} => {y}", (x, y))
        return k

    def comp2(b, a):
        f, f2 = _ends(a)
        g, g2 = _ends(b)
        return unique(comp1(g, f), comp1(g2, f2), "composite")

    def assoc(h, g, f):
        return unique(comp1(comp1(h, g), f), comp1(h, comp1(g, f)), "associator")

    def lunit(f):
        return unique(comp1(units[cells1[f][1]], f), f, "left unitor")

    def runit(f):
        return unique(comp1(f, units[cells1[f][0]]), f, "right unitor")

    B = Bicategory(C.objects, cells1, units, homs, comp1, comp2, assoc, lunit, runit,
                   f"{C.name or 'C'}(W^-1)")
    B.spans = spans
    B.span_id = span_id
    return validate_bicategory(B)


def _posetal_comp(arrows, b, a):
    k = f"{arrows[a][0]}=>{arrows[b][1]}"
    if k not in arrows:
        raise BicategoryAxiomError(f"2-cells {a}, {b} have no composite", (a, b))
    return k


def _ends(cell):
    x, y = cell.split("=>")
    return x, y


# ---------------------------------------------------------------------------
# the comparison omega

@dataclass
class OmegaReport:
    objects_bijective: bool
    object_map: dict
    hom_verdicts: dict
    units_strict: bool
    composition_cells: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.objects_bijective and self.units_strict and self.composition_cells
                and all(v.is_equivalence for v in self.hom_verdicts.values()))

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {
            "ok": self.ok,
            "objects_bijective": self.objects_bijective,
            "object_map": dict(self.object_map),
            "units_strict": self.units_strict,
            "composition_cells": self.composition_cells,
            "homs": {f"{a},{b}": v.to_json() for (a, b), v in self.hom_verdicts.items()},
            "failures": [list(x) for x in self.failures],
        }


def omega_comparison(P: FractionsPresentation, F=None, BicF=None, CW=None) -> OmegaReport:
    """Compare Bic(C{W}) with C(W^-1) along ``(w, f, w') -> (w, w' f)``."""
    C = P.base
    F = F or build_fractions(P)
    BicF = BicF or fundamental_bicategory(F)
    CW = CW or bicat_of_fractions(P)
    failures = []
    omap = {A: C.tgt(A) for A in BicF.objects}
    bij = sorted(omap.values()) == sorted(C.objects) and len(set(omap.values())) == len(C.objects)
    if not bij:
        failures.append(("objects", "omega_0 is not a bijection"))

    def w1(h):
        w, f, w2 = F.hor[h]
        return CW.span_id[(w, C.comp(w2, f))]

    homs = {}
    for (a, b), H in BicF.homs.items():
        K = CW.hom(omap[a], omap[b])
        amap = {}
        ok = True
        for c, (x, y) in H.arrows.items():
            k = f"{w1(x)}=>{w1(y)}"
            if k not in K.arrows:
                failures.append(("2-cell", c))
                ok = False
                break
            amap[c] = k
        if not ok:
            homs[(a, b)] = EquivalenceVerdict(False, False)
            continue
        Fn = FinFunctor(H, K, {x: w1(x) for x in H.objects}, amap, f"omega({a},{b})")
        homs[(a, b)] = is_equivalence(Fn)
    for a, b in itertools.product(BicF.objects, repeat=2):
        if (a, b) not in BicF.homs and CW.hom(omap.get(a), omap.get(b)).objects:
            homs[(a, b)] = EquivalenceVerdict(True, False)
            failures.append(("hom", a, b))
    units = all(w1(BicF.units[a]) == CW.units[omap[a]] for a in BicF.objects)
    comp_ok = True
    for g, f in BicF.composable1():
        src = CW.hcomp1(w1(g), w1(f))
        tgt = w1(BicF.hcomp1(g, f))
        if CW.has_invertible_2cell(src, tgt) is None:
            failures.append(("composition", g, f))
            comp_ok = False
            break
    return OmegaReport(bij, omap, homs, units, comp_ok, failures)
