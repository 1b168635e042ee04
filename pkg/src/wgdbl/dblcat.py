"""Double categories as internal categories in finite categories.

Conventions used throughout the package:

* ``X0`` has the objects and vertical arrows, ``X1`` has the horizontal
  arrows as objects and the double cells as arrows.  A cell ``a`` goes from
  its top horizontal ``X1.src(a)`` to its bottom ``X1.tgt(a)``; its left and
  right vertical boundaries are ``d0(a)`` and ``d1(a)``.
* Vertical composition of cells is composition in ``X1`` and is written
  ``vcomp(b, a)`` with ``a`` on top.
* Horizontal composition is written ``hcomp(g, f)`` for ``f`` followed by
  ``g`` (so ``d1(f) == d0(g)``), and likewise ``hcomp_cell(b, a)``.
* Tuples in the horizontal nerve are listed in path order ``(f1, ..., fk)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import (FunctorViolation, InterchangeViolation,
                     InternalCategoryAxiomViolation, NotWeaklyGlobular,
                     ParseError)
from .fincat import (DiscreteVerdict, EquivalenceVerdict, FinCategory,
                     FinFunctor, check_category, coproduct, discrete_category,
                     full_subcategory, identity_functor, is_equivalence,
                     is_equivalent_to_discrete, pi0, pullback, validate_category)


class DoubleCategory:
    def __init__(self, X0: FinCategory, X1: FinCategory, d0: FinFunctor,
                 d1: FinFunctor, s: FinFunctor, hcomp_h, hcomp_c, name: str = ""):
        self.X0, self.X1 = X0, X1
        self.d0, self.d1, self.s = d0, d1, s
        self.name = name
        # tables complete unit composites automatically; functions are trusted
        self._complete = not callable(hcomp_h)
        self._hh = hcomp_h
        self._hc = hcomp_c
        self._id_h = {h: A for A, h in s.obj_map.items()}
        self._id_c = {c: v for v, c in s.arr_map.items()}
        self._by_d0 = None
        self._cells_by_left = None

    # -- vocabulary ---------------------------------------------------------
    @property
    def objects(self):
        return self.X0.objects

    @property
    def horizontals(self):
        return self.X1.objects

    @property
    def cells(self):
        return self.X1.arrows

    def verticals(self):
        return self.X0.arrows

    def hsrc(self, f):
        return self.d0.obj_map[f]

    def htgt(self, f):
        return self.d1.obj_map[f]

    def top(self, a):
        return self.X1.arrows[a][0]

    def bottom(self, a):
        return self.X1.arrows[a][1]

    def left(self, a):
        return self.d0.arr_map[a]

    def right(self, a):
        return self.d1.arr_map[a]

    def frame(self, a):
        return (self.top(a), self.bottom(a), self.left(a), self.right(a))

    def Id(self, A):
        """Horizontal identity on an object."""
        return self.s.obj_map[A]

    def idv(self, v):
        """Horizontal identity cell on a vertical arrow."""
        return self.s.arr_map[v]

    def one(self, f):
        """Vertical identity cell on a horizontal arrow."""
        return self.X1.identity[f]

    def iota(self, A):
        return self.X1.identity[self.Id(A)]

    def vid(self, A):
        """Vertical identity arrow on an object."""
        return self.X0.identity[A]

    def is_h_identity(self, f):
        return f in self._id_h

    def vcomp(self, b, a):
        return self.X1.comp(b, a)

    def vcomp_path(self, *cells):
        return self.X1.comp_path(*cells)

    def hcomp(self, g, f):
        if self.htgt(f) != self.hsrc(g):
            raise ValueError(f"horizontals {f}, {g} are not composable")
        if self._complete:
            if f in self._id_h:
                return g
            if g in self._id_h:
                return f
            return self._hh[(g, f)]
        return self._hh(g, f)

    def hcomp_cell(self, b, a):
        if self.right(a) != self.left(b):
            raise ValueError(f"cells {a}, {b} are not horizontally composable")
        if self._complete:
            if a in self._id_c:
                return b
            if b in self._id_c:
                return a
            return self._hc[(b, a)]
        return self._hc(b, a)

    def hcomp_path(self, *hs):
        out = hs[0]
        for h in hs[1:]:
            out = self.hcomp(h, out)
        return out

    def hcomp_cell_path(self, *cs):
        out = cs[0]
        for c in cs[1:]:
            out = self.hcomp_cell(c, out)
        return out

    def by_d0(self, A):
        if self._by_d0 is None:
            idx = {}
            for f in self.X1.objects:
                idx.setdefault(self.hsrc(f), []).append(f)
            self._by_d0 = idx
        return self._by_d0.get(A, ())

    def cells_by_left(self, v):
        if self._cells_by_left is None:
            idx = {}
            for a in self.X1.arrows:
                idx.setdefault(self.left(a), []).append(a)
            self._cells_by_left = idx
        return self._cells_by_left.get(v, ())

    def composable_horizontals(self):
        """Pairs ``(g, f)`` with ``f`` then ``g`` composable."""
        for f in self.X1.objects:
            for g in self.by_d0(self.htgt(f)):
                yield g, f

    def composable_cells(self):
        for a in self.X1.arrows:
            for b in self.cells_by_left(self.right(a)):
                yield b, a

    def vertically_invertible(self, a) -> bool:
        return self.X1.is_iso(a)

    def cell_between(self, top, bottom, left=None, right=None):
        """Least cell with the given frame, or ``None``."""
        for a in self.X1.hom(top, bottom):
            if (left is None or self.left(a) == left) and (right is None or self.right(a) == right):
                return a
        return None

    def m_table(self):
        hs = {}
        for g, f in self.composable_horizontals():
            if f in self._id_h or g in self._id_h:
                continue
            hs[(g, f)] = self.hcomp(g, f)
        cs = {}
        for b, a in self.composable_cells():
            if a in self._id_c or b in self._id_c:
                continue
            cs[(b, a)] = self.hcomp_cell(b, a)
        return hs, cs

    def m_functor(self) -> FinFunctor:
        """Horizontal composition as a functor out of the level-2 nerve."""
        P = horizontal_nerve(self, 2)
        return FinFunctor(
            P, self.X1,
            {o: self.hcomp(P.flat_obj[o][1], P.flat_obj[o][0]) for o in P.objects},
            {a: self.hcomp_cell(P.flat_arr[a][1], P.flat_arr[a][0]) for a in P.arrows},
            "m")

    def to_json(self) -> dict:
        hs, cs = self.m_table()
        return {
            "name": self.name,
            "X0": self.X0.to_json(),
            "X1": self.X1.to_json(),
            "d0": functor_json(self.d0),
            "d1": functor_json(self.d1),
            "s": functor_json(self.s),
            "m": {"horizontals": [[g, f, h] for (g, f), h in hs.items()],
                  "cells": [[b, a, c] for (b, a), c in cs.items()]},
        }

    def same_as(self, other: "DoubleCategory") -> bool:
        return (self.X0.same_as(other.X0) and self.X1.same_as(other.X1)
                and self.d0.equals(other.d0) and self.d1.equals(other.d1)
                and self.s.equals(other.s) and self.m_table() == other.m_table())

    def __repr__(self):
        return (f"DoubleCategory({self.name or '?'}: {len(self.X0.objects)} objects, "
                f"{len(self.X0.arrows)} verticals, {len(self.X1.objects)} horizontals, "
                f"{len(self.X1.arrows)} cells)")


def functor_json(F: FinFunctor) -> dict:
    return {"objects": dict(F.obj_map), "arrows": dict(F.arr_map)}


def _functor_from_json(raw, dom, cod, name):
    if not isinstance(raw, Mapping) or "objects" not in raw or "arrows" not in raw:
        raise ParseError("functor table needs 'objects' and 'arrows'", name)
    return FinFunctor(dom, cod, {str(k): str(v) for k, v in raw["objects"].items()},
                      {str(k): str(v) for k, v in raw["arrows"].items()}, name)


def double_category_from_json(raw) -> DoubleCategory:
    """Parse without validating (see :func:`validate_double_category`)."""
    if not isinstance(raw, Mapping):
        raise ParseError("double category presentation must be an object")
    for key in ("X0", "X1", "d0", "d1", "s"):
        if key not in raw:
            raise ParseError(f"missing key '{key}'")
    X0 = validate_category(raw["X0"])
    X1 = validate_category(raw["X1"])
    X0.name, X1.name = X0.name or "X0", X1.name or "X1"
    d0 = _functor_from_json(raw["d0"], X1, X0, "d0")
    d1 = _functor_from_json(raw["d1"], X1, X0, "d1")
    s = _functor_from_json(raw["s"], X0, X1, "s")
    m = raw.get("m", {})
    hh = {(str(g), str(f)): str(h) for g, f, h in m.get("horizontals", [])}
    hc = {(str(b), str(a)): str(c) for b, a, c in m.get("cells", [])}
    return DoubleCategory(X0, X1, d0, d1, s, hh, hc, raw.get("name", ""))


def validate_double_category(data, interchange: bool = True,
                             check_components: bool = True) -> DoubleCategory:
    """Verify every axiom of an internal category in finite categories.

    Raises ``InternalCategoryAxiomViolation`` naming the failed axiom or
    ``InterchangeViolation`` naming the four cells of a failing grid.
    """
    D = data if isinstance(data, DoubleCategory) else double_category_from_json(data)
    X0, X1 = D.X0, D.X1
    if check_components:
        check_category(X0)
        check_category(X1)
    for F in (D.d0, D.d1, D.s):
        try:
            F.validate()
        except FunctorViolation as e:
            raise InternalCategoryAxiomViolation(f"{F.name} is a functor", str(e), e.data) from None
    for A in X0.objects:
        for di in (D.d0, D.d1):
            if di.ob(D.Id(A)) != A:
                raise InternalCategoryAxiomViolation(f"{di.name}.s = id", f"fails at object {A}", (A,))
    for v in X0.arrows:
        for di in (D.d0, D.d1):
            if di.ar(D.idv(v)) != v:
                raise InternalCategoryAxiomViolation(f"{di.name}.s = id", f"fails at vertical {v}", (v,))

    def comp_or_fail(kind, fn, x, y):
        try:
            return fn(x, y)
        except KeyError:
            raise InternalCategoryAxiomViolation(
                "m is total", f"no horizontal composite of {kind} {y} then {x}", (x, y)) from None

    hcomp = lambda g, f: comp_or_fail("horizontals", D.hcomp, g, f)
    hcell = lambda b, a: comp_or_fail("cells", D.hcomp_cell, b, a)

    for g, f in D.composable_horizontals():
        gf = hcomp(g, f)
        if gf not in D.d0.obj_map:
            raise InternalCategoryAxiomViolation("m is total", f"{g} o {f} = {gf} is not a horizontal", (g, f))
        if D.hsrc(gf) != D.hsrc(f) or D.htgt(gf) != D.htgt(g):
            raise InternalCategoryAxiomViolation("boundaries of m", f"{g} o {f} = {gf} has wrong ends", (g, f))
    for b, a in D.composable_cells():
        ba = hcell(b, a)
        if ba not in X1.arrows:
            raise InternalCategoryAxiomViolation("m is total", f"{b} o {a} is not a cell", (b, a))
        if D.left(ba) != D.left(a) or D.right(ba) != D.right(b):
            raise InternalCategoryAxiomViolation("boundaries of m", f"{b} o {a} has wrong verticals", (b, a))
        if D.top(ba) != hcomp(D.top(b), D.top(a)) or D.bottom(ba) != hcomp(D.bottom(b), D.bottom(a)):
            raise InternalCategoryAxiomViolation("m is a functor on objects",
                                                 f"{b} o {a} has wrong horizontal boundaries", (b, a))
    # units
    for f in X1.objects:
        if hcomp(f, D.Id(D.hsrc(f))) != f or hcomp(D.Id(D.htgt(f)), f) != f:
            raise InternalCategoryAxiomViolation("unit law", f"fails for horizontal {f}", (f,))
    for a in X1.arrows:
        if hcell(a, D.idv(D.left(a))) != a or hcell(D.idv(D.right(a)), a) != a:
            raise InternalCategoryAxiomViolation("unit law", f"fails for cell {a}", (a,))
    # m preserves vertical identities
    for g, f in D.composable_horizontals():
        if hcell(D.one(g), D.one(f)) != D.one(hcomp(g, f)):
            raise InternalCategoryAxiomViolation("m preserves identities",
                                                 f"1_{g} o 1_{f} != 1_({g} o {f})", (g, f))
    # associativity
    for g, f in D.composable_horizontals():
        gf = hcomp(g, f)
        for h in D.by_d0(D.htgt(g)):
            if hcomp(h, gf) != hcomp(hcomp(h, g), f):
                raise InternalCategoryAxiomViolation("associativity of m", f"fails on {f}, {g}, {h}", (f, g, h))
    for b, a in D.composable_cells():
        ba = hcell(b, a)
        for c in D.cells_by_left(D.right(b)):
            if hcell(c, ba) != hcell(hcell(c, b), a):
                raise InternalCategoryAxiomViolation("associativity of m", f"fails on cells {a}, {b}, {c}", (a, b, c))
    # iota
    for A in X0.objects:
        if D.idv(D.vid(A)) != D.one(D.Id(A)):
            raise InternalCategoryAxiomViolation("id_{1_A} = 1_{Id_A}", f"fails at {A}", (A,))
    if interchange:
        check_interchange(D)
    return D


def check_interchange(D: DoubleCategory):
    """Middle-four interchange on every composable 2x2 grid."""
    X1 = D.X1
    for b, a in D.composable_cells():
        ba = D.hcomp_cell(b, a)
        for a2 in X1.out_arrows(D.bottom(a)):
            r = D.right(a2)
            for b2 in X1.out_arrows(D.bottom(b)):
                if D.left(b2) != r:
                    continue
                lhs = D.hcomp_cell(D.vcomp(b2, b), D.vcomp(a2, a))
                rhs = D.vcomp(D.hcomp_cell(b2, a2), ba)
                if lhs != rhs:
                    raise InterchangeViolation(
                        f"interchange fails on the grid {a}, {b} over {a2}, {b2}", (a, b, a2, b2))


# ---------------------------------------------------------------------------
# horizontal and vertical embeddings

def horizontal_embedding(C: FinCategory, name: str = "") -> DoubleCategory:
    """H(C): discrete vertical structure, horizontal arrows the arrows of C."""
    X0 = discrete_category(C.objects, "X0", lambda o: f"1[{o}]")
    X1 = discrete_category(list(C.arrows), "X1", lambda f: f"1[{f}]")
    d0 = FinFunctor(X1, X0, {f: C.src(f) for f in C.arrows},
                    {f"1[{f}]": f"1[{C.src(f)}]" for f in C.arrows}, "d0")
    d1 = FinFunctor(X1, X0, {f: C.tgt(f) for f in C.arrows},
                    {f"1[{f}]": f"1[{C.tgt(f)}]" for f in C.arrows}, "d1")
    s = FinFunctor(X0, X1, {A: C.identity[A] for A in C.objects},
                   {f"1[{A}]": f"1[{C.identity[A]}]" for A in C.objects}, "s")
    hh = C.table()
    hc = {(f"1[{g}]", f"1[{f}]"): f"1[{h}]" for (g, f), h in hh.items()}
    return DoubleCategory(X0, X1, d0, d1, s, hh, hc, name or f"H({C.name})")


def disjoint_union(D: DoubleCategory, E: DoubleCategory, name: str = "") -> DoubleCategory:
    """Coproduct of double categories; identifiers get the prefix ``0:`` or ``1:``."""
    tags = ("0", "1")
    X0 = coproduct(D.X0, E.X0, tags, "X0")
    X1 = coproduct(D.X1, E.X1, tags, "X1")

    def tagged(F, dom, cod):
        om, am = {}, {}
        for tag, G in zip(tags, F):
            om.update({f"{tag}:{k}": f"{tag}:{v}" for k, v in G.obj_map.items()})
            am.update({f"{tag}:{k}": f"{tag}:{v}" for k, v in G.arr_map.items()})
        return FinFunctor(dom, cod, om, am)

    d0 = tagged((D.d0, E.d0), X1, X0)
    d1 = tagged((D.d1, E.d1), X1, X0)
    s = tagged((D.s, E.s), X0, X1)
    part = dict(zip(tags, (D, E)))

    def hh(g, f):
        tag = f.split(":", 1)[0]
        return f"{tag}:{part[tag].hcomp(g.split(':', 1)[1], f.split(':', 1)[1])}"

    def hc(b, a):
        tag = a.split(":", 1)[0]
        return f"{tag}:{part[tag].hcomp_cell(b.split(':', 1)[1], a.split(':', 1)[1])}"

    return DoubleCategory(X0, X1, d0, d1, s, hh, hc, name or f"{D.name}+{E.name}")


def vertical_embedding(C: FinCategory, name: str = "") -> DoubleCategory:
    """V(C): vertical arrows the arrows of C, only identity horizontals."""
    X0 = FinCategory(C.objects, C.arrows, C.identity, C.table(), "X0")
    X1 = FinCategory([f"Id[{A}]" for A in C.objects],
                     {f"id[{v}]": (f"Id[{s}]", f"Id[{t}]") for v, (s, t) in C.arrows.items()},
                     {f"Id[{A}]": f"id[{C.identity[A]}]" for A in C.objects},
                     {(f"id[{g}]", f"id[{f}]"): f"id[{h}]" for (g, f), h in C.table().items()},
                     "X1")
    back_o = {f"Id[{A}]": A for A in C.objects}
    back_a = {f"id[{v}]": v for v in C.arrows}
    d0 = FinFunctor(X1, X0, back_o, back_a, "d0")
    d1 = FinFunctor(X1, X0, back_o, back_a, "d1")
    s = FinFunctor(X0, X1, {A: f"Id[{A}]" for A in C.objects}, {v: f"id[{v}]" for v in C.arrows}, "s")
    return DoubleCategory(X0, X1, d0, d1, s, {}, {}, name or f"V({C.name})")


# ---------------------------------------------------------------------------
# nerve and weak globularity

def _nerve_power(D: DoubleCategory, k: int, base: FinCategory, down0, down1):
    """Iterated pullback of ``k`` copies of X1 over ``base`` along down1/down0."""
    P = D.X1
    flat_obj = {f: (f,) for f in P.objects}
    flat_arr = {a: (a,) for a in P.arrows}
    last = identity_functor(D.X1)
    for _ in range(k - 1):
        P, p1, p2 = pullback(last.then(down1), down0, name=f"X1^{_ + 2}")
        flat_obj = {o: flat_obj[a] + (b,) for o, (a, b) in P.obj_parts.items()}
        flat_arr = {x: flat_arr[a] + (b,) for x, (a, b) in P.parts.items()}
        last = p2
    P.flat_obj, P.flat_arr = flat_obj, flat_arr
    return P


def horizontal_nerve(D: DoubleCategory, k: int) -> FinCategory:
    """Level ``k`` of the horizontal nerve: X0, X1, or the k-fold fibre product."""
    if k < 0:
        raise ValueError("nerve level must be non-negative")
    if k == 0:
        return D.X0
    if k == 1:
        P = D.X1
        P.flat_obj = {f: (f,) for f in P.objects}
        P.flat_arr = {a: (a,) for a in P.arrows}
        return P
    return _nerve_power(D, k, D.X0, D.d0, D.d1)


@dataclass
class WeakGlobularityReport:
    x0_verdict: DiscreteVerdict
    segal: list
    isofibration_d0: bool
    isofibration_d1: bool
    nmax: int = 3

    @property
    def passed(self) -> bool:
        return self.x0_verdict.is_equivalence and all(v.is_equivalence for _, v in self.segal)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "nmax": self.nmax,
            "x0": self.x0_verdict.to_json(),
            "pi0_X0": self.x0_verdict.classes,
            "segal": [{"n": n, **v.to_json()} for n, v in self.segal],
            "isofibration_d0": self.isofibration_d0,
            "isofibration_d1": self.isofibration_d1,
        }


def gamma_functors(D: DoubleCategory, verdict: DiscreteVerdict):
    g = verdict.gamma_functor(D.X0)
    return D.d0.then(g), D.d1.then(g)


def segal_comparison(D: DoubleCategory, n: int, verdict: DiscreteVerdict = None):
    """The inclusion X1 x_X0 ... x_X0 X1 -> X1 x_X0^d ... x_X0^d X1 (n factors)."""
    verdict = verdict or is_equivalent_to_discrete(D.X0)
    g0, g1 = gamma_functors(D, verdict)
    P = _nerve_power(D, n, D.X0, D.d0, D.d1)
    T = _nerve_power(D, n, verdict.discrete, g0, g1)
    F = FinFunctor(P, T, {o: o for o in P.objects}, {a: a for a in P.arrows}, f"segal{n}")
    return F


def segal_verdict_bruteforce(D: DoubleCategory, n: int, verdict=None) -> EquivalenceVerdict:
    return is_equivalence(segal_comparison(D, n, verdict))


def iso_classes_X1(D: DoubleCategory) -> dict:
    """Horizontal arrow -> least member of its class under invertible cells."""
    X1 = D.X1
    parent = {f: f for f in X1.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, (s, t) in X1.arrows.items():
        if s != t and X1.is_iso(a):
            rs, rt = find(s), find(t)
            if rs != rt:
                parent[max(rs, rt)] = min(rs, rt)
    return {f: find(f) for f in X1.objects}


def segal_verdict_fast(D: DoubleCategory, n: int, verdict: DiscreteVerdict) -> EquivalenceVerdict:
    """Segal verdict when X0 is posetal.

    Full faithfulness is automatic then: two cells with the same vertical
    endpoints have equal boundaries.  Essential surjectivity depends only on
    the iso classes of the entries, so it is decided by a chain search over
    classes.  Agreement with the brute-force check is tested.
    """
    gamma = verdict.gamma
    cls = iso_classes_X1(D)
    members = {}
    for f in D.X1.objects:
        members.setdefault(cls[f], []).append(f)
    reps = sorted(members)
    by_src = {}
    for r in reps:
        by_src.setdefault(gamma[D.hsrc(r)], []).append(r)
    # ends reachable through a composable chain ending in class r
    stack = [((r,), frozenset(D.htgt(f) for f in members[r])) for r in reversed(reps)]
    while stack:
        chain, ends = stack.pop()
        if len(chain) == n:
            if not ends:
                return EquivalenceVerdict(True, False, None, _tuple_id(chain))
            continue
        for r in reversed(by_src.get(gamma[D.htgt(chain[-1])], [])):
            nxt = frozenset(D.htgt(f) for f in members[r] if D.hsrc(f) in ends)
            stack.append((chain + (r,), nxt))
    return EquivalenceVerdict(True, True)


def _tuple_id(parts):
    out = parts[0]
    for p in parts[1:]:
        out = f"({out},{p})"
    return out


def is_isofibration(D: DoubleCategory, side: int) -> bool:
    di = D.d0 if side == 0 else D.d1
    X0, X1 = D.X0, D.X1
    for f in X1.objects:
        x = di.ob(f)
        for v in X0.out_arrows(x):
            if not X0.is_iso(v):
                continue
            if not any(di.ar(a) == v and X1.is_iso(a) for a in X1.out_arrows(f)):
                return False
    return True


def check_weak_globularity(D: DoubleCategory, nmax: int = 3, method: str = "auto") -> WeakGlobularityReport:
    if nmax < 2:
        raise ValueError("nmax must be at least 2")
    x0 = is_equivalent_to_discrete(D.X0)
    fast = method == "fast" or (method == "auto" and D.X0.is_posetal())
    if method == "fast" and not D.X0.is_posetal():
        raise ValueError("the fast Segal check needs a posetal vertical category")
    segal = []
    for n in range(2, nmax + 1):
        v = segal_verdict_fast(D, n, x0) if fast else segal_verdict_bruteforce(D, n, x0)
        segal.append((n, v))
    return WeakGlobularityReport(x0, segal, is_isofibration(D, 0), is_isofibration(D, 1), nmax)


def require_wg(D: DoubleCategory, report: WeakGlobularityReport = None, nmax: int = 3):
    report = report or check_weak_globularity(D, nmax)
    if not report.passed:
        raise NotWeaklyGlobular(f"{D.name or 'input'} is not weakly globular", report)
    return report


def unique_vertical(D: DoubleCategory, A, B) -> Optional[str]:
    hs = D.X0.hom(A, B)
    return hs[0] if hs else None


@dataclass
class Filler:
    cell: str
    g: str
    y1: str
    y2: str


def _invertible_cells_into(D: DoubleCategory, f):
    cands = [a for a in D.X1.arrows if D.bottom(a) == f and D.X1.is_iso(a)]
    ident = D.one(f)
    return sorted(cands, key=lambda a: (a != ident, a))


def find_filler(D: DoubleCategory, side: str, vertical, f, report=None) -> Filler:
    """Vertically invertible filler for a vertical arrow meeting ``f``.

    ``side='left'``: ``vertical: A' -> A`` with ``A`` the source of ``f``;
    returns ``g: A'' -> B'`` with a cell ``g => f`` whose left edge is
    ``vertical . y1`` and right edge ``y2``.  ``side='right'`` is dual, with
    ``vertical: B' -> B`` into the target of ``f``.  The identity cell is
    preferred, then the least cell id.
    """
    require_wg(D, report)
    X0 = D.X0
    if side == "left":
        if X0.tgt(vertical) != D.hsrc(f):
            raise ValueError("vertical arrow does not end at the source of f")
    elif side == "right":
        if X0.tgt(vertical) != D.htgt(f):
            raise ValueError("vertical arrow does not end at the target of f")
    else:
        raise ValueError("side must be 'left' or 'right'")
    inv = X0.inverse(vertical)
    for a in _invertible_cells_into(D, f):
        g = D.top(a)
        if side == "left":
            y1 = X0.comp(inv, D.left(a))
            y2 = D.right(a)
        else:
            y1 = D.left(a)
            y2 = X0.comp(inv, D.right(a))
        return Filler(a, g, y1, y2)
    raise AssertionError("weakly globular input without filler")


def composable_lift(D: DoubleCategory, f, g):
    """Composable pair ``(f3, g3)`` with invertible cells onto ``f`` and ``g``.

    ``f`` and ``g`` need only have vertically connected middle objects.  The
    pair itself is used when already composable; otherwise the least pair.
    Returns ``(f3, g3, phi_f, phi_g)`` with ``phi_f: f3 => f`` etc.
    """
    if D.htgt(f) == D.hsrc(g):
        return f, g, D.one(f), D.one(g)
    into_f = _invertible_cells_into(D, f)
    into_g = _invertible_cells_into(D, g)
    starts = {}
    for b in into_g:
        starts.setdefault(D.hsrc(D.top(b)), []).append(b)
    best = None
    for a in into_f:
        for b in starts.get(D.htgt(D.top(a)), ()):
            key = (D.top(a), D.top(b), a, b)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return best


# ---------------------------------------------------------------------------
# discretization

@dataclass
class TruncatedSimplicialCat:
    levels: list
    faces: dict  # (k, i) -> FinFunctor level k -> level k-1
    degeneracies: dict  # (k, i) -> FinFunctor level k -> level k+1
    segal: list = field(default_factory=list)
    identity_failures: list = field(default_factory=list)

    @property
    def level0_discrete(self) -> bool:
        L0 = self.levels[0]
        return all(L0.is_identity(a) for a in L0.arrows)


def _nerve_face(D, Pk, Pk1, k, i, gamma=None):
    """Face ``d_i`` from level k to level k-1, deleting vertex ``i``."""
    if k == 1:
        src = D.d1 if i == 0 else D.d0
        F = src if gamma is None else src.then(gamma)
        return F
    om, am = {}, {}
    back_o = {v: key for key, v in Pk1.flat_obj.items()}
    back_a = {v: key for key, v in Pk1.flat_arr.items()}

    def act(tup, comp):
        if i == 0:
            return tup[1:]
        if i == k:
            return tup[:-1]
        return tup[:i - 1] + (comp(tup[i], tup[i - 1]),) + tup[i + 1:]

    for o, tup in Pk.flat_obj.items():
        om[o] = back_o[act(tup, D.hcomp)]
    for a, tup in Pk.flat_arr.items():
        am[a] = back_a[act(tup, D.hcomp_cell)]
    return FinFunctor(Pk, Pk1, om, am, f"d{i}@{k}")


def _nerve_degeneracy(D, Pk, Pk1, k, i):
    """Degeneracy ``s_i`` from level k >= 1 to k+1 inserting an identity at vertex i."""
    back_o = {v: key for key, v in Pk1.flat_obj.items()}
    back_a = {v: key for key, v in Pk1.flat_arr.items()}
    om, am = {}, {}
    for o, tup in Pk.flat_obj.items():
        A = D.hsrc(tup[i]) if i < k else D.htgt(tup[-1])
        om[o] = back_o[tup[:i] + (D.Id(A),) + tup[i:]]
    for a, tup in Pk.flat_arr.items():
        v = D.left(tup[i]) if i < k else D.right(tup[-1])
        am[a] = back_a[tup[:i] + (D.idv(v),) + tup[i:]]
    return FinFunctor(Pk, Pk1, om, am, f"s{i}@{k}")


def discretize(D: DoubleCategory, nmax: int = 3, report=None) -> TruncatedSimplicialCat:
    """Replace X0 by the discrete category on its components.

    Level 0 is X0^d, level 1 is X1 and level k is the k-fold fibre product.
    Faces out of level 1 are ``gamma`` composed with the nerve faces and the
    bottom degeneracy is the horizontal identity on the chosen
    representative.  Simplicial identities that fail strictly are listed in
    ``identity_failures`` rather than raised.
    """
    report = require_wg(D, report, nmax)
    v = report.x0_verdict
    gamma = v.gamma_functor(D.X0)
    gprime = v.gamma_prime_functor(D.X0)
    levels = [v.discrete, horizontal_nerve(D, 1)]
    for k in range(2, nmax + 1):
        levels.append(horizontal_nerve(D, k))
    faces, degens = {}, {}
    for k in range(1, nmax + 1):
        for i in range(k + 1):
            faces[(k, i)] = _nerve_face(D, levels[k], levels[k - 1], k, i, gamma if k == 1 else None)
    degens[(0, 0)] = gprime.then(D.s)
    for k in range(1, nmax):
        for i in range(k + 1):
            degens[(k, i)] = _nerve_degeneracy(D, levels[k], levels[k + 1], k, i)
    T = TruncatedSimplicialCat(levels, faces, degens, list(report.segal))
    T.identity_failures = simplicial_identity_failures(T, nmax)
    return T


def simplicial_identity_failures(T: TruncatedSimplicialCat, nmax: int) -> list:
    out = []
    F, S = T.faces, T.degeneracies

    def same(A, B):
        return A.equals(B)

    for k in range(2, nmax + 1):
        for j in range(k + 1):
            for i in range(j):
                if not same(F[(k, j)].then(F[(k - 1, i)]), F[(k, i)].then(F[(k - 1, j - 1)])):
                    out.append(f"d{i} d{j} = d{j - 1} d{i} at level {k}")
    for k in range(0, nmax):
        for j in range(k + 1):
            s = S[(k, j)]
            for i in range(k + 2):
                lhs = s.then(F[(k + 1, i)])
                if i == j or i == j + 1:
                    ok = lhs.equals(identity_functor(T.levels[k]))
                elif i < j:
                    ok = same(lhs, F[(k, i)].then(S[(k - 1, j - 1)]))
                else:
                    ok = same(lhs, F[(k, i - 1)].then(S[(k - 1, j)]))
                if not ok:
                    out.append(f"d{i} s{j} at level {k}")
    for k in range(0, nmax - 1):
        for j in range(k + 1):
            for i in range(j + 1):
                if not same(S[(k, j)].then(S[(k + 1, i)]), S[(k, i)].then(S[(k + 1, j + 1)])):
                    out.append(f"s{i} s{j} = s{j + 1} s{i} at level {k}")
    return out


# ---------------------------------------------------------------------------
# Pi_0

def pi0_double(D: DoubleCategory, report=None) -> FinCategory:
    """The category of components: objects pi0 X0, arrows pi0 X1."""
    report = require_wg(D, report)
    gamma = report.x0_verdict.gamma
    classes = pi0(D.X1)
    cls = {f: c[0] for c in classes for f in c}
    objects = [c[0] for c in report.x0_verdict.classes]
    arrows = {}
    for c in classes:
        f = c[0]
        ends = {(gamma[D.hsrc(g)], gamma[D.htgt(g)]) for g in c}
        assert len(ends) == 1, "components of X1 straddle components of X0"
        arrows[f] = ends.pop()
    identity = {}
    for A in objects:
        identity[A] = cls[D.Id(A)]
    for A in D.X0.objects:
        assert cls[D.Id(A)] == identity[gamma[A]], "identity classes are not well defined"
    table = {}
    for g, f in D.composable_horizontals():
        key = (cls[g], cls[f])
        val = cls[D.hcomp(g, f)]
        if table.setdefault(key, val) != val:
            raise AssertionError(f"composition on components is not well defined at {key}")
    for (g, f) in itertools.product(arrows, arrows):
        if arrows[f][1] == arrows[g][0] and (g, f) not in table:
            if f in identity.values() or g in identity.values():
                continue
            raise AssertionError(f"no composable representatives for {g} . {f}")
    P = FinCategory(objects, arrows, identity, table, f"Pi0({D.name})")
    check_category(P)
    P.component_of = cls
    return P


# ---------------------------------------------------------------------------
# strict functors and transformations

@dataclass
class Verdict:
    ok: bool
    failure: Optional[str] = None
    data: tuple = ()

    def __bool__(self):
        return self.ok

    def to_json(self):
        out = {"ok": self.ok}
        if not self.ok:
            out["failure"] = self.failure
            out["data"] = list(self.data)
        return out


class DoubleFunctor:
    def __init__(self, dom: DoubleCategory, cod: DoubleCategory, F0: FinFunctor,
                 F1: FinFunctor, name: str = ""):
        self.dom, self.cod, self.F0, self.F1, self.name = dom, cod, F0, F1, name

    def ob(self, A):
        return self.F0.obj_map[A]

    def vert(self, v):
        return self.F0.arr_map[v]

    def hor(self, f):
        return self.F1.obj_map[f]

    def cell(self, a):
        return self.F1.arr_map[a]

    def then(self, G: "DoubleFunctor") -> "DoubleFunctor":
        return DoubleFunctor(self.dom, G.cod, self.F0.then(G.F0), self.F1.then(G.F1),
                             f"{G.name}.{self.name}")


def identity_double_functor(D: DoubleCategory) -> DoubleFunctor:
    return DoubleFunctor(D, D, identity_functor(D.X0), identity_functor(D.X1), "id")


def check_strict_functor(F: DoubleFunctor) -> Verdict:
    X, Y = F.dom, F.cod
    for name, G in (("F0", F.F0), ("F1", F.F1)):
        try:
            G.validate()
        except (FunctorViolation, KeyError) as e:
            return Verdict(False, f"{name} is not a functor: {e}", getattr(e, "data", ()))
    for f in X.X1.objects:
        if Y.hsrc(F.hor(f)) != F.ob(X.hsrc(f)) or Y.htgt(F.hor(f)) != F.ob(X.htgt(f)):
            return Verdict(False, "F commutes with d0, d1 on horizontals", (f,))
    for a in X.X1.arrows:
        if Y.left(F.cell(a)) != F.vert(X.left(a)) or Y.right(F.cell(a)) != F.vert(X.right(a)):
            return Verdict(False, "F commutes with d0, d1 on cells", (a,))
    for A in X.X0.objects:
        if F.hor(X.Id(A)) != Y.Id(F.ob(A)):
            return Verdict(False, "F preserves horizontal identities", (A,))
    for v in X.X0.arrows:
        if F.cell(X.idv(v)) != Y.idv(F.vert(v)):
            return Verdict(False, "F preserves identity cells id_v", (v,))
    for g, f in X.composable_horizontals():
        if F.hor(X.hcomp(g, f)) != Y.hcomp(F.hor(g), F.hor(f)):
            return Verdict(False, "F preserves horizontal composition", (f, g))
    for b, a in X.composable_cells():
        if F.cell(X.hcomp_cell(b, a)) != Y.hcomp_cell(F.cell(b), F.cell(a)):
            return Verdict(False, "F preserves horizontal composition of cells", (a, b))
    return Verdict(True)


@dataclass
class HorizontalTransformation:
    """``a: G => K`` with horizontal components ``a_A: GA -> KA`` and cells ``a_v``."""
    source: DoubleFunctor
    target: DoubleFunctor
    components: dict
    cells: dict


def check_horizontal_transformation(t: HorizontalTransformation) -> Verdict:
    G, K = t.source, t.target
    X, Y = G.dom, G.cod
    for A in X.X0.objects:
        h = t.components.get(A)
        if h is None or Y.hsrc(h) != G.ob(A) or Y.htgt(h) != K.ob(A):
            return Verdict(False, "component a_A: GA -> KA", (A,))
    for v, (A, B) in X.X0.arrows.items():
        c = t.cells.get(v)
        if c is None or Y.frame(c) != (t.components[A], t.components[B], G.vert(v), K.vert(v)):
            return Verdict(False, "component cell a_v has frame (a_A, a_B, Gv, Kv)", (v,))
    for A in X.X0.objects:
        if t.cells[X.vid(A)] != Y.one(t.components[A]):
            return Verdict(False, "a_{1_A} = 1_{a_A}", (A,))
    for v2, v1 in X.X0.composable_pairs():
        if t.cells[X.X0.comp(v2, v1)] != Y.vcomp(t.cells[v2], t.cells[v1]):
            return Verdict(False, "a_{v2.v1} = a_{v2} . a_{v1}", (v1, v2))
    for f in X.X1.objects:
        A, B = X.hsrc(f), X.htgt(f)
        if Y.hcomp(t.components[B], G.hor(f)) != Y.hcomp(K.hor(f), t.components[A]):
            return Verdict(False, "a_B o Gf = Kf o a_A", (f,))
    for z in X.X1.arrows:
        lhs = Y.hcomp_cell(t.cells[X.right(z)], G.cell(z))
        rhs = Y.hcomp_cell(K.cell(z), t.cells[X.left(z)])
        if lhs != rhs:
            return Verdict(False, "a_{v'} o G(z) = K(z) o a_v", (z,))
    return Verdict(True)


@dataclass
class VerticalTransformation:
    """``g: G => K`` with vertical components ``g_A`` and cells ``g_f``."""
    source: DoubleFunctor
    target: DoubleFunctor
    components: dict
    cells: dict


def check_vertical_transformation(t: VerticalTransformation) -> Verdict:
    G, K = t.source, t.target
    X, Y = G.dom, G.cod
    for A in X.X0.objects:
        v = t.components.get(A)
        if v is None or Y.X0.arrows.get(v) != (G.ob(A), K.ob(A)):
            return Verdict(False, "component g_A: GA -> KA", (A,))
    for f in X.X1.objects:
        c = t.cells.get(f)
        A, B = X.hsrc(f), X.htgt(f)
        if c is None or Y.frame(c) != (G.hor(f), K.hor(f), t.components[A], t.components[B]):
            return Verdict(False, "component cell g_f has frame (Gf, Kf, g_A, g_B)", (f,))
    for A in X.X0.objects:
        if t.cells[X.Id(A)] != Y.idv(t.components[A]):
            return Verdict(False, "g_{Id_A} = id_{g_A}", (A,))
    for g, f in X.composable_horizontals():
        if t.cells[X.hcomp(g, f)] != Y.hcomp_cell(t.cells[g], t.cells[f]):
            return Verdict(False, "g_{h2 o h1} = g_{h2} o g_{h1}", (f, g))
    for v, (A, B) in X.X0.arrows.items():
        if Y.X0.comp(K.vert(v), t.components[A]) != Y.X0.comp(t.components[B], G.vert(v)):
            return Verdict(False, "vertical naturality Kv . g_A = g_B . Gv", (v,))
    for z in X.X1.arrows:
        if Y.vcomp(K.cell(z), t.cells[X.top(z)]) != Y.vcomp(t.cells[X.bottom(z)], G.cell(z)):
            return Verdict(False, "cell naturality Kz . g_f = g_f' . Gz", (z,))
    return Verdict(True)


# ---------------------------------------------------------------------------
# 2-equivalences

def hom_category(D: DoubleCategory, a, b, gamma) -> FinCategory:
    """The full subcategory of X1 on horizontals from class a to class b."""
    objs = [f for f in D.X1.objects if gamma[D.hsrc(f)] == a and gamma[D.htgt(f)] == b]
    return full_subcategory(D.X1, objs, f"X({a},{b})")


@dataclass
class TwoEquivalenceVerdict:
    hom_verdicts: dict
    pi0_verdict: EquivalenceVerdict
    failing_pair: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.failing_pair is None and self.pi0_verdict.is_equivalence

    def __bool__(self):
        return self.ok


def check_2_equivalence(F: DoubleFunctor) -> TwoEquivalenceVerdict:
    X, Y = F.dom, F.cod
    rx, ry = require_wg(X), require_wg(Y)
    gx, gy = rx.x0_verdict.gamma, ry.x0_verdict.gamma
    reps_x = [c[0] for c in rx.x0_verdict.classes]
    homs, failing = {}, None
    for a in reps_x:
        for b in reps_x:
            Xab = hom_category(X, a, b, gx)
            fa, fb = gy[F.ob(a)], gy[F.ob(b)]
            Yab = hom_category(Y, fa, fb, gy)
            Fab = FinFunctor(Xab, Yab, {f: F.hor(f) for f in Xab.objects},
                             {c: F.cell(c) for c in Xab.arrows}, f"F({a},{b})")
            v = is_equivalence(Fab)
            homs[(a, b)] = v
            if not v and failing is None:
                failing = (a, b)
    PX, PY = pi0_double(X, rx), pi0_double(Y, ry)
    P = FinFunctor(PX, PY, {A: gy[F.ob(A)] for A in PX.objects},
                   {f: PY.component_of[F.hor(f)] for f in PX.arrows}, "Pi0F")
    try:
        P.validate()
        pv = is_equivalence(P)
    except FunctorViolation:
        pv = EquivalenceVerdict(False, False)
    return TwoEquivalenceVerdict(homs, pv, failing)


def double_isomorphism(X: DoubleCategory, Y: DoubleCategory, F0: FinFunctor, F1: FinFunctor) -> bool:
    """Whether the given pair is a strict double functor that is bijective."""
    from .fincat import category_isomorphism
    if not category_isomorphism(X.X0, Y.X0, F0.obj_map, F0.arr_map):
        return False
    if not category_isomorphism(X.X1, Y.X1, F1.obj_map, F1.arr_map):
        return False
    return check_strict_functor(DoubleFunctor(X, Y, F0, F1)).ok


def horizontal_category(D: DoubleCategory) -> FinCategory:
    """hD: objects of D with the horizontal arrows."""
    return FinCategory(D.objects, {f: (D.hsrc(f), D.htgt(f)) for f in D.X1.objects},
                       {A: D.Id(A) for A in D.objects}, D.hcomp, f"h{D.name}")


def vertical_category(D: DoubleCategory) -> FinCategory:
    return D.X0
