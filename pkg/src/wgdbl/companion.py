"""Companions, conjoints, pre-companions and the double category Comp(D).

Shapes of the binding cells, with ``f: A -> B`` horizontal and
``v: A -> B`` vertical:

* ``psi``: top ``Id_A``, bottom ``f``, left ``1_A``, right ``v``;
* ``chi``: top ``f``, bottom ``Id_B``, left ``v``, right ``1_B``;

subject to ``chi o psi = 1_f`` (horizontal) and ``chi . psi = id_v``
(vertical).  For a conjoint ``u: B -> A`` of ``v: A -> B``:

* ``alpha``: top ``Id_A``, bottom ``u``, left ``v``, right ``1_A``;
* ``beta``: top ``u``, bottom ``Id_B``, left ``1_B``, right ``v``;

with ``alpha o beta = 1_u`` and ``beta . alpha = id_v``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dblcat import (DoubleCategory, DoubleFunctor, Verdict, require_wg)
from .errors import VerticalNotInvertible
from .fincat import FinCategory, FinFunctor


@dataclass(frozen=True)
class CompanionPair:
    f: str
    v: str
    psi: str
    chi: str

    def to_json(self):
        return {"f": self.f, "v": self.v, "psi": self.psi, "chi": self.chi}


@dataclass(frozen=True)
class ConjointPair:
    u: str
    v: str
    alpha: str
    beta: str

    def to_json(self):
        return {"u": self.u, "v": self.v, "alpha": self.alpha, "beta": self.beta}


def verify_companion(D: DoubleCategory, p: CompanionPair) -> bool:
    f, v = p.f, p.v
    if p.f not in D.X1.objects or p.v not in D.X0.arrows:
        return False
    A, B = D.hsrc(f), D.htgt(f)
    if D.X0.arrows[v] != (A, B):
        return False
    if D.frame(p.psi) != (D.Id(A), f, D.vid(A), v):
        return False
    if D.frame(p.chi) != (f, D.Id(B), v, D.vid(B)):
        return False
    return (D.hcomp_cell(p.chi, p.psi) == D.one(f)
            and D.vcomp(p.chi, p.psi) == D.idv(v))


def verify_conjoint(D: DoubleCategory, p: ConjointPair) -> bool:
    u, v = p.u, p.v
    if u not in D.X1.objects or v not in D.X0.arrows:
        return False
    B, A = D.hsrc(u), D.htgt(u)
    if D.X0.arrows[v] != (A, B):
        return False
    if D.frame(p.alpha) != (D.Id(A), u, v, D.vid(A)):
        return False
    if D.frame(p.beta) != (u, D.Id(B), D.vid(B), v):
        return False
    return (D.hcomp_cell(p.alpha, p.beta) == D.one(u)
            and D.vcomp(p.beta, p.alpha) == D.idv(v))


def _cells(D, top, bottom, left, right):
    return sorted(a for a in D.X1.hom(top, bottom)
                  if D.left(a) == left and D.right(a) == right)


def _companion_candidates(D, f, v):
    A, B = D.hsrc(f), D.htgt(f)
    for psi in _cells(D, D.Id(A), f, D.vid(A), v):
        for chi in _cells(D, f, D.Id(B), v, D.vid(B)):
            p = CompanionPair(f, v, psi, chi)
            if verify_companion(D, p):
                yield p


def _conjoint_candidates(D, u, v):
    B, A = D.hsrc(u), D.htgt(u)
    for alpha in _cells(D, D.Id(A), u, v, D.vid(A)):
        for beta in _cells(D, u, D.Id(B), D.vid(B), v):
            p = ConjointPair(u, v, alpha, beta)
            if verify_conjoint(D, p):
                yield p


def all_companions(D: DoubleCategory, f):
    """Every companion structure on the horizontal arrow ``f``, in search order."""
    for v in sorted(D.X0.hom(D.hsrc(f), D.htgt(f))):
        yield from _companion_candidates(D, f, v)


def find_companion(D: DoubleCategory, f) -> Optional[CompanionPair]:
    """Least companion of ``f`` ordered by (vertical, psi, chi) ids."""
    return next(all_companions(D, f), None)


def find_conjoint(D: DoubleCategory, u) -> Optional[ConjointPair]:
    for v in sorted(D.X0.hom(D.htgt(u), D.hsrc(u))):
        for p in _conjoint_candidates(D, u, v):
            return p
    return None


def find_horizontal_companion(D: DoubleCategory, v) -> Optional[CompanionPair]:
    """Least horizontal companion of a vertical arrow ``v``."""
    A, B = D.X0.arrows[v]
    for f in sorted(h for h in D.by_d0(A) if D.htgt(h) == B):
        for p in _companion_candidates(D, f, v):
            return p
    return None


def find_horizontal_conjoint(D: DoubleCategory, v) -> Optional[ConjointPair]:
    A, B = D.X0.arrows[v]
    for u in sorted(h for h in D.by_d0(B) if D.htgt(h) == A):
        for p in _conjoint_candidates(D, u, v):
            return p
    return None


def conjoint_from_companion(D: DoubleCategory, p: CompanionPair) -> ConjointPair:
    """The conjoint of ``f`` along ``v^-1`` with inverted binding cells."""
    vinv = D.X0.inverse(p.v)
    if vinv is None:
        raise VerticalNotInvertible(f"vertical arrow {p.v} has no inverse")
    alpha, beta = D.X1.inverse(p.chi), D.X1.inverse(p.psi)
    if alpha is None or beta is None:
        raise VerticalNotInvertible(f"binding cells of {p.f} are not vertically invertible")
    out = ConjointPair(p.f, vinv, alpha, beta)
    if not verify_conjoint(D, out):
        raise AssertionError(f"inverted binding cells of {p.f} fail the conjoint equations")
    return out


def identity_companion(D: DoubleCategory, A) -> CompanionPair:
    i = D.iota(A)
    return CompanionPair(D.Id(A), D.vid(A), i, i)


def image_companion(F: DoubleFunctor, p: CompanionPair) -> CompanionPair:
    return CompanionPair(F.hor(p.f), F.vert(p.v), F.cell(p.psi), F.cell(p.chi))


# ---------------------------------------------------------------------------
# pre-companions

@dataclass(frozen=True)
class PreCompanionWitness:
    f: str
    # r-side: phi: f => f1 invertible, r: htgt(f1) -> C, r o f1 a companion
    phi: str
    f1: str
    r: str
    r_companion: CompanionPair
    # l-side: phi2: f => f2 invertible, l: D -> hsrc(f2), f2 o l a companion
    phi2: str
    f2: str
    l: str
    l_companion: CompanionPair
    nu: Optional[str] = None

    def to_json(self):
        return {
            "f": self.f,
            "right": {"phi": self.phi, "f1": self.f1, "r": self.r,
                      "companion": self.r_companion.to_json()},
            "left": {"phi": self.phi2, "f2": self.f2, "l": self.l,
                     "companion": self.l_companion.to_json()},
            "nu": self.nu,
        }


def _invertible_from(D, f):
    ident = D.one(f)
    cands = [a for a in D.X1.out_arrows(f) if D.X1.is_iso(a)]
    return sorted(cands, key=lambda a: (a != ident, a))


def _r_side(D, f):
    for phi in _invertible_from(D, f):
        f1 = D.bottom(phi)
        for r in sorted(D.by_d0(D.htgt(f1))):
            p = find_companion(D, D.hcomp(r, f1))
            if p is not None:
                yield phi, f1, r, p


def _l_side(D, f):
    for phi in _invertible_from(D, f):
        f2 = D.bottom(phi)
        for l in sorted(h for h in D.X1.objects if D.htgt(h) == D.hsrc(f2)):
            p = find_companion(D, D.hcomp(f2, l))
            if p is not None:
                yield phi, f2, l, p


def linking_frame(D: DoubleCategory, w: PreCompanionWitness):
    """Vertical edges ``(x, y)`` of the cell linking ``r`` to ``l``.

    ``x = v_l^-1 . d1(phi2) . d1(phi)^-1`` and
    ``y = d0(phi2) . d0(phi)^-1 . v_r^-1``.
    """
    X0 = D.X0
    inv = X0.inverse
    x = X0.comp_path(inv(D.right(w.phi)), D.right(w.phi2), inv(w.l_companion.v))
    y = X0.comp_path(inv(w.r_companion.v), inv(D.left(w.phi)), D.left(w.phi2))
    return x, y


def linking_cell(D: DoubleCategory, w: PreCompanionWitness) -> Optional[str]:
    x, y = linking_frame(D, w)
    for a in _cells(D, w.r, w.l, x, y):
        if D.X1.is_iso(a):
            return a
    return None


def all_precompanion_witnesses(D: DoubleCategory, f, limit=None):
    count = 0
    for phi, f1, r, rp in _r_side(D, f):
        for phi2, f2, l, lp in _l_side(D, f):
            w = PreCompanionWitness(f, phi, f1, r, rp, phi2, f2, l, lp)
            yield w
            count += 1
            if limit is not None and count >= limit:
                return


def is_precompanion(D: DoubleCategory, f, report=None) -> Optional[PreCompanionWitness]:
    """Least pre-companion structure on ``f`` with its linking cell, or None."""
    require_wg(D, report)
    r_side = next(_r_side(D, f), None)
    if r_side is None:
        return None
    l_side = next(_l_side(D, f), None)
    if l_side is None:
        return None
    w = PreCompanionWitness(f, *r_side, *l_side)
    nu = linking_cell(D, w)
    if nu is None:
        raise AssertionError(f"no invertible linking cell for pre-companion {f}")
    return PreCompanionWitness(f, *r_side, *l_side, nu=nu)


def comparison_cells(D: DoubleCategory, w1: PreCompanionWitness, w2: PreCompanionWitness):
    """Vertically invertible cells relating two pre-companion structures.

    Returns cells ``r1 => r2`` and ``l1 => l2``, or ``None`` where missing.
    """
    def inv_cell(top, bottom):
        for a in sorted(D.X1.hom(top, bottom)):
            if D.X1.is_iso(a):
                return a
        return None
    return inv_cell(w1.r, w2.r), inv_cell(w1.l, w2.l)


# ---------------------------------------------------------------------------
# the companion double category

class CompDouble(DoubleCategory):
    """Comp(D): vertical arrows are companion quadruples ``(h, v, psi, chi)``."""

    def __init__(self, base, X0, X1, d0, d1, s, hh, hc, quad, quad_id, cell_data, name):
        super().__init__(X0, X1, d0, d1, s, hh, hc, name)
        self.base = base
        self.quad = quad
        self.quad_id = quad_id
        self.cell_data = cell_data

    def comp_category(self) -> FinCategory:
        return self.X0

    def cell_id_of(self, theta, t0, t1):
        k = _cell_name(theta, t0, t1)
        return k if k in self.cell_data else None


def _quad_name(q):
    return "<" + "|".join(q) + ">"


def _cell_name(theta, t0, t1):
    return f"[{theta}|{t0}|{t1}]"


def comp_double_category(D: DoubleCategory, name: str = "") -> CompDouble:
    quads = []
    for f in D.X1.objects:
        for p in all_companions(D, f):
            quads.append((p.f, p.v, p.psi, p.chi))
    quads.sort()
    quad = {_quad_name(q): q for q in quads}
    quad_id = {q: k for k, q in quad.items()}
    ident = {A: quad_id[(D.Id(A), D.vid(A), D.iota(A), D.iota(A))] for A in D.objects}
    arrows = {k: (D.hsrc(q[0]), D.htgt(q[0])) for k, q in quad.items()}

    def vcomp_quad(q2, q1):
        h1, v1, psi1, chi1 = quad[q1]
        h2, v2, psi2, chi2 = quad[q2]
        h = D.hcomp(h2, h1)
        v = D.X0.comp(v2, v1)
        psi = D.vcomp(D.hcomp_cell(psi2, D.one(h1)), D.hcomp_cell(D.idv(v1), psi1))
        chi = D.vcomp(D.hcomp_cell(chi2, D.idv(v2)), D.hcomp_cell(D.one(h2), chi1))
        return quad_id[(h, v, psi, chi)]

    X0 = FinCategory(D.objects, arrows, ident, vcomp_quad, f"Comp({D.name})")

    by_v = {}
    for k, q in quad.items():
        by_v.setdefault(q[1], []).append(k)

    def admissible(theta, t0, t1):
        f, g = D.top(theta), D.bottom(theta)
        h0, _, psi0, chi0 = quad[t0]
        h1, _, psi1, chi1 = quad[t1]
        if D.hsrc(g) != D.htgt(h0) or D.hsrc(h1) != D.htgt(f):
            return False
        if D.hcomp(g, h0) != D.hcomp(h1, f):
            return False
        if D.hcomp_cell(chi1, theta) != D.hcomp_cell(D.one(g), chi0):
            return False
        return D.hcomp_cell(theta, psi0) == D.hcomp_cell(psi1, D.one(f))

    cell_data, cells = {}, {}
    for theta in D.X1.arrows:
        for t0 in by_v.get(D.left(theta), ()):
            if arrows[t0] != (D.hsrc(D.top(theta)), D.hsrc(D.bottom(theta))):
                continue
            for t1 in by_v.get(D.right(theta), ()):
                if arrows[t1] != (D.htgt(D.top(theta)), D.htgt(D.bottom(theta))):
                    continue
                if admissible(theta, t0, t1):
                    k = _cell_name(theta, t0, t1)
                    cell_data[k] = (theta, t0, t1)
                    cells[k] = (D.top(theta), D.bottom(theta))
    cell_id = {v: k for k, v in cell_data.items()}
    one = {f: cell_id[(D.one(f), ident[D.hsrc(f)], ident[D.htgt(f)])] for f in D.X1.objects}

    def vcomp_cell(b, a):
        tb, b0, b1 = cell_data[b]
        ta, a0, a1 = cell_data[a]
        return cell_id[(D.vcomp(tb, ta), vcomp_quad(b0, a0), vcomp_quad(b1, a1))]

    X1 = FinCategory(D.X1.objects, cells, one, vcomp_cell, f"Comp({D.name})_1")
    d0 = FinFunctor(X1, X0, {f: D.hsrc(f) for f in X1.objects},
                    {k: cell_data[k][1] for k in cells}, "d0")
    d1 = FinFunctor(X1, X0, {f: D.htgt(f) for f in X1.objects},
                    {k: cell_data[k][2] for k in cells}, "d1")
    s = FinFunctor(X0, X1, {A: D.Id(A) for A in D.objects},
                   {k: cell_id[(D.idv(quad[k][1]), k, k)] for k in quad}, "s")

    def hh(g, f):
        return D.hcomp(g, f)

    def hc(b, a):
        tb, b0, b1 = cell_data[b]
        ta, a0, a1 = cell_data[a]
        return cell_id[(D.hcomp_cell(tb, ta), a0, b1)]

    return CompDouble(D, X0, X1, d0, d1, s, hh, hc, quad, quad_id, cell_data,
                      name or f"Comp({D.name})")


def comp_functor(F: DoubleFunctor, CX: CompDouble, CY: CompDouble) -> DoubleFunctor:
    """Comp(F): Comp(X) -> Comp(Y) for a strict functor ``F: X -> Y``."""
    def q(k):
        h, v, psi, chi = CX.quad[k]
        return CY.quad_id[(F.hor(h), F.vert(v), F.cell(psi), F.cell(chi))]
    F0 = FinFunctor(CX.X0, CY.X0, {A: F.ob(A) for A in CX.objects},
                    {k: q(k) for k in CX.quad}, "Comp(F)0")
    arr = {}
    for k, (theta, t0, t1) in CX.cell_data.items():
        arr[k] = CY.cell_id_of(F.cell(theta), q(t0), q(t1))
    F1 = FinFunctor(CX.X1, CY.X1, {f: F.hor(f) for f in CX.X1.objects}, arr, "Comp(F)1")
    return DoubleFunctor(CX, CY, F0, F1, f"Comp({F.name})")


# ---------------------------------------------------------------------------
# W-transformation cell equations

def check_w_transformation_cells(D: DoubleCategory, alpha_w, alpha_l, alpha_r,
                                 l_F: CompanionPair, l_G: CompanionPair,
                                 r_F: CompanionPair, r_G: CompanionPair) -> Verdict:
    """Four pasting equations relating ``alpha_w: Fw => Gw`` with cells on ``l`` and ``r``.

    ``l_F`` is a companion structure on ``Fw o l_Fw`` and ``r_F`` one on
    ``r_Fw o Fw``; likewise for ``G``.
    """
    try:
        lhs = D.vcomp(l_G.chi, D.hcomp_cell(alpha_w, alpha_l))
        rhs = D.vcomp(D.idv(D.right(alpha_w)), l_F.chi)
        if lhs != rhs:
            return Verdict(False, "chi_l equation", (lhs, rhs))
        lhs = D.vcomp(l_G.psi, D.idv(D.left(alpha_l)))
        rhs = D.vcomp(D.hcomp_cell(alpha_w, alpha_l), l_F.psi)
        if lhs != rhs:
            return Verdict(False, "psi_l equation", (lhs, rhs))
        lhs = D.vcomp(r_G.chi, D.hcomp_cell(alpha_r, alpha_w))
        rhs = D.vcomp(D.idv(D.right(alpha_r)), r_F.chi)
        if lhs != rhs:
            return Verdict(False, "chi_r equation", (lhs, rhs))
        lhs = D.vcomp(D.hcomp_cell(alpha_r, alpha_w), r_F.psi)
        rhs = D.vcomp(r_G.psi, D.idv(D.left(alpha_w)))
        if lhs != rhs:
            return Verdict(False, "psi_r equation", (lhs, rhs))
    except (ValueError, KeyError) as e:
        return Verdict(False, f"cells do not paste: {e}")
    return Verdict(True)
