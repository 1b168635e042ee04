"""Finite categories, functors and natural transformations.

A category is stored as explicit tables: objects, arrows with source and
target, chosen identities and a composition table.  Derived categories
(pullbacks, full subcategories) may carry a composition *function* instead of
a table so that large fibre products need not be tabulated up front.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import (AssociativityViolation, FunctorViolation,
                     IdentityViolation, MissingComposite, NaturalityViolation,
                     ParseError)


def pair_id(*parts) -> str:
    return "(" + ",".join(parts) + ")"


class FinCategory:
    """A finite category.

    ``arrows`` maps an arrow id to ``(src, tgt)``.  ``compose`` is either a
    mapping ``(g, f) -> g.f`` (``f`` first) or a callable with the same
    signature.  Composites with an identity never need to be listed.
    """

    def __init__(self, objects: Iterable[str], arrows: Mapping[str, tuple],
                 identity: Mapping[str, str], compose, name: str = ""):
        self.objects = tuple(objects)
        self.arrows = dict(arrows)
        self.identity = dict(identity)
        self.name = name
        if callable(compose):
            self._table, self._fn = None, compose
        else:
            self._table, self._fn = dict(compose), None
        self._identities = frozenset(self.identity.values())
        self._hom = None
        self._out = None
        self._inv = {}

    # -- basic access -----------------------------------------------------
    def src(self, a):
        return self.arrows[a][0]

    def tgt(self, a):
        return self.arrows[a][1]

    def is_identity(self, a):
        return a in self._identities

    def _index(self):
        hom, out = {}, {}
        for a, (x, y) in self.arrows.items():
            hom.setdefault((x, y), []).append(a)
            out.setdefault(x, []).append(a)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._out = {k: tuple(v) for k, v in out.items()}

    def hom(self, x, y) -> tuple:
        if self._hom is None:
            self._index()
        return self._hom.get((x, y), ())

    def out_arrows(self, x) -> tuple:
        if self._out is None:
            self._index()
        return self._out.get(x, ())

    def comp(self, g, f):
        """The composite ``g.f`` (``f`` first)."""
        sf, tf = self.arrows[f]
        sg, tg = self.arrows[g]
        if tf != sg:
            raise ValueError(f"{g} and {f} are not composable in {self.name or 'category'}")
        if f in self._identities:
            return g
        if g in self._identities:
            return f
        if self._fn is not None:
            return self._fn(g, f)
        try:
            return self._table[(g, f)]
        except KeyError:
            raise MissingComposite(f"missing composite {g} . {f}", (g, f)) from None

    def comp_path(self, *arrows):
        """Compose a path given in diagrammatic order (first arrow first)."""
        out = arrows[0]
        for a in arrows[1:]:
            out = self.comp(a, out)
        return out

    def composable_pairs(self):
        """All pairs ``(g, f)`` with ``tgt f == src g``, in a fixed order."""
        for f, (_, y) in self.arrows.items():
            for g in self.out_arrows(y):
                yield g, f

    # -- isomorphisms -----------------------------------------------------
    def inverse(self, a) -> Optional[str]:
        if a in self._inv:
            return self._inv[a]
        x, y = self.arrows[a]
        found = None
        for b in self.hom(y, x):
            if self.comp(b, a) == self.identity[x] and self.comp(a, b) == self.identity[y]:
                found = b
                break
        self._inv[a] = found
        return found

    def is_iso(self, a) -> bool:
        return self.inverse(a) is not None

    def is_groupoid(self) -> bool:
        return all(self.is_iso(a) for a in self.arrows)

    def is_posetal(self) -> bool:
        if self._hom is None:
            self._index()
        return all(len(v) <= 1 for v in self._hom.values())

    # -- comparison and serialization -------------------------------------
    def table(self) -> dict:
        """Composition table restricted to pairs of non-identity arrows."""
        out = {}
        for g, f in self.composable_pairs():
            if f in self._identities or g in self._identities:
                continue
            out[(g, f)] = self.comp(g, f)
        return out

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "arrows": [{"id": a, "src": s, "tgt": t} for a, (s, t) in self.arrows.items()],
            "identities": dict(self.identity),
            "compose": [[g, f, h] for (g, f), h in self.table().items()],
        }

    def same_as(self, other: "FinCategory") -> bool:
        return (set(self.objects) == set(other.objects)
                and self.arrows == other.arrows
                and self.identity == other.identity
                and self.table() == other.table())

    def __repr__(self):
        return f"FinCategory({self.name or '?'}: {len(self.objects)} objects, {len(self.arrows)} arrows)"


def make_category(objects, arrows, identity, compose, name="", check=True) -> FinCategory:
    C = FinCategory(objects, arrows, identity, compose, name)
    if check:
        check_category(C)
    return C


def check_category(C: FinCategory, associativity: bool = True) -> FinCategory:
    """Verify the category axioms on every arrow, pair and triple."""
    objs = set(C.objects)
    if len(objs) != len(C.objects):
        raise ParseError("duplicate object identifiers")
    for a, (s, t) in C.arrows.items():
        if s not in objs or t not in objs:
            raise ParseError(f"arrow {a} has an unknown endpoint", "arrows")
    for x in C.objects:
        i = C.identity.get(x)
        if i is None:
            raise IdentityViolation(f"object {x} has no identity", (x,))
        if i not in C.arrows or C.arrows[i] != (x, x):
            raise IdentityViolation(f"identity {i} of {x} is not an endo-arrow of {x}", (i,))
    if len(C._identities) != len(C.identity):
        raise IdentityViolation("two objects share an identity arrow", tuple(C.identity.values()))
    if C._table is not None:
        for (g, f), h in C._table.items():
            if g not in C.arrows or f not in C.arrows or h not in C.arrows:
                raise ParseError(f"composite entry [{g}, {f}, {h}] names an unknown arrow", "compose")
            if C.tgt(f) != C.src(g):
                raise MissingComposite(f"composite listed for non-composable pair {g} . {f}", (g, f))
            if f in C._identities and h != g or g in C._identities and h != f:
                raise IdentityViolation(f"identity law fails: {g} . {f} = {h}", (g, f, h))
    for g, f in C.composable_pairs():
        h = C.comp(g, f)
        if h not in C.arrows:
            raise MissingComposite(f"composite {g} . {f} is not an arrow", (g, f))
        if C.arrows[h] != (C.src(f), C.tgt(g)):
            raise IdentityViolation(f"composite {g} . {f} = {h} has wrong endpoints", (g, f, h))
    if associativity:
        ids = C._identities
        for g, f in C.composable_pairs():
            if f in ids or g in ids:
                continue
            gf = C.comp(g, f)
            for h in C.out_arrows(C.tgt(g)):
                if h in ids:
                    continue
                if C.comp(h, gf) != C.comp(C.comp(h, g), f):
                    raise AssociativityViolation(
                        f"({h} . {g}) . {f} != {h} . ({g} . {f})", (h, g, f))
    return C


def validate_category(raw) -> FinCategory:
    """Build and check a category from its JSON presentation."""
    if isinstance(raw, FinCategory):
        return check_category(raw)
    if not isinstance(raw, Mapping):
        raise ParseError("category presentation must be an object")
    for key in ("objects", "arrows", "identities"):
        if key not in raw:
            raise ParseError(f"missing key '{key}'")
    objects = [str(o) for o in raw["objects"]]
    arrows = {}
    for i, rec in enumerate(raw["arrows"]):
        try:
            a, s, t = str(rec["id"]), str(rec["src"]), str(rec["tgt"])
        except (KeyError, TypeError):
            raise ParseError("arrow record needs id, src, tgt", f"arrows[{i}]") from None
        if a in arrows:
            raise ParseError(f"duplicate arrow id {a}", f"arrows[{i}]")
        arrows[a] = (s, t)
    identity = {str(k): str(v) for k, v in dict(raw["identities"]).items()}
    table = {}
    for i, entry in enumerate(raw.get("compose", [])):
        if len(entry) != 3:
            raise ParseError("compose entries are [g, f, g.f]", f"compose[{i}]")
        g, f, h = (str(x) for x in entry)
        if (g, f) in table and table[(g, f)] != h:
            raise ParseError(f"conflicting composites for {g} . {f}", f"compose[{i}]")
        table[(g, f)] = h
    return check_category(FinCategory(objects, arrows, identity, table, raw.get("name", "")))


def discrete_category(objects, name="", ident=lambda o: f"1_{o}") -> FinCategory:
    objects = list(objects)
    return FinCategory(objects, {ident(o): (o, o) for o in objects},
                       {o: ident(o) for o in objects}, {}, name)


def terminal_category(name="1") -> FinCategory:
    return discrete_category(["*"], name)


def full_subcategory(C: FinCategory, objects, name="") -> FinCategory:
    keep = set(objects)
    objs = [o for o in C.objects if o in keep]
    arrows = {a: st for a, st in C.arrows.items() if st[0] in keep and st[1] in keep}
    return FinCategory(objs, arrows, {o: C.identity[o] for o in objs}, C.comp, name)


def coproduct(C: FinCategory, D: FinCategory, tags=("0", "1"), name="") -> FinCategory:
    """Disjoint union; identifiers get the prefix ``tag:``."""
    parts = {}
    objs, arrows, ident = [], {}, {}
    for tag, X in zip(tags, (C, D)):
        for o in X.objects:
            objs.append(f"{tag}:{o}")
            ident[f"{tag}:{o}"] = f"{tag}:{X.identity[o]}"
        for a, (s, t) in X.arrows.items():
            arrows[f"{tag}:{a}"] = (f"{tag}:{s}", f"{tag}:{t}")
            parts[f"{tag}:{a}"] = (tag, X, a)

    def comp(g, f):
        tag, X, a = parts[f]
        return f"{tag}:{X.comp(parts[g][2], a)}"

    return FinCategory(objs, arrows, ident, comp, name or f"{C.name}+{D.name}")


def opposite(C: FinCategory) -> FinCategory:
    return FinCategory(C.objects, {a: (t, s) for a, (s, t) in C.arrows.items()},
                       C.identity, lambda g, f: C.comp(f, g), C.name + "^op")


# ---------------------------------------------------------------------------
# functors and transformations

class FinFunctor:
    def __init__(self, dom: FinCategory, cod: FinCategory, obj_map: Mapping,
                 arr_map: Mapping, name: str = ""):
        self.dom, self.cod = dom, cod
        self.obj_map, self.arr_map = dict(obj_map), dict(arr_map)
        self.name = name

    def ob(self, x):
        return self.obj_map[x]

    def ar(self, a):
        return self.arr_map[a]

    def then(self, G: "FinFunctor") -> "FinFunctor":
        """The composite ``G . self``."""
        return FinFunctor(self.dom, G.cod,
                          {x: G.obj_map[y] for x, y in self.obj_map.items()},
                          {a: G.arr_map[b] for a, b in self.arr_map.items()},
                          f"{G.name}.{self.name}")

    def validate(self) -> "FinFunctor":
        D, C = self.dom, self.cod
        cod_objects = set(C.objects)
        for x in D.objects:
            if x not in self.obj_map or self.obj_map[x] not in cod_objects:
                raise FunctorViolation(f"object {x} is not mapped into the codomain", (x,))
        for a, (s, t) in D.arrows.items():
            b = self.arr_map.get(a)
            if b is None or b not in C.arrows:
                raise FunctorViolation(f"arrow {a} is not mapped into the codomain", (a,))
            if C.arrows[b] != (self.obj_map[s], self.obj_map[t]):
                raise FunctorViolation(f"{self.name}: image {b} of {a} has wrong endpoints", (a, b))
        for x in D.objects:
            if self.arr_map[D.identity[x]] != C.identity[self.obj_map[x]]:
                raise FunctorViolation(f"{self.name}: identity of {x} not preserved", (x,))
        for g, f in D.composable_pairs():
            if D.is_identity(f) or D.is_identity(g):
                continue
            if self.arr_map[D.comp(g, f)] != C.comp(self.arr_map[g], self.arr_map[f]):
                raise FunctorViolation(f"{self.name}: composite {g} . {f} not preserved", (g, f))
        return self

    def equals(self, other: "FinFunctor") -> bool:
        return self.obj_map == other.obj_map and self.arr_map == other.arr_map

    def __repr__(self):
        return f"FinFunctor({self.name or '?'}: {self.dom.name} -> {self.cod.name})"


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(C, C, {x: x for x in C.objects}, {a: a for a in C.arrows}, "id")


@dataclass
class FinNatTrans:
    source: FinFunctor
    target: FinFunctor
    components: dict

    def validate(self) -> "FinNatTrans":
        F, G, C = self.source, self.target, self.source.cod
        for x in F.dom.objects:
            t = self.components.get(x)
            if t is None or C.arrows.get(t) != (F.ob(x), G.ob(x)):
                raise NaturalityViolation(f"component at {x} has the wrong type", (x,))
        for a, (x, y) in F.dom.arrows.items():
            lhs = C.comp(self.components[y], F.ar(a))
            rhs = C.comp(G.ar(a), self.components[x])
            if lhs != rhs:
                raise NaturalityViolation(f"naturality square at {a} does not commute", (a,))
        return self

    def is_invertible(self) -> bool:
        C = self.source.cod
        return all(C.is_iso(t) for t in self.components.values())


# ---------------------------------------------------------------------------
# decision procedures

@dataclass
class EquivalenceVerdict:
    fully_faithful: bool
    essentially_surjective: bool
    ff_witness: Optional[tuple] = None
    eso_witness: Optional[str] = None

    @property
    def is_equivalence(self) -> bool:
        return self.fully_faithful and self.essentially_surjective

    def __bool__(self):
        return self.is_equivalence

    def to_json(self) -> dict:
        out = {"is_equivalence": self.is_equivalence,
               "fully_faithful": self.fully_faithful,
               "essentially_surjective": self.essentially_surjective}
        if self.ff_witness is not None:
            out["ff_witness"] = list(self.ff_witness)
        if self.eso_witness is not None:
            out["eso_witness"] = self.eso_witness
        return out


def is_equivalence(F: FinFunctor) -> EquivalenceVerdict:
    """Fully faithful and essentially surjective, checked by brute force."""
    A, B = F.dom, F.cod
    ff, ff_w = True, None
    for x in A.objects:
        for y in A.objects:
            src = A.hom(x, y)
            images = {F.ar(a) for a in src}
            if len(images) != len(src) or len(images) != len(B.hom(F.ob(x), F.ob(y))):
                ff, ff_w = False, (x, y)
                break
        if not ff:
            break
    image = sorted(set(F.obj_map.values()))
    eso, eso_w = True, None
    for b in B.objects:
        if not any(any(B.is_iso(a) for a in B.hom(b, c)) for c in image):
            eso, eso_w = False, b
            break
    return EquivalenceVerdict(ff, eso, ff_w, eso_w)


def pi0(C: FinCategory) -> list:
    """Connected components as sorted lists, ordered by least element."""
    parent = {x: x for x in C.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, (s, t) in C.arrows.items():
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[max(rs, rt)] = min(rs, rt)
    classes = {}
    for x in C.objects:
        classes.setdefault(find(x), []).append(x)
    return sorted((sorted(v) for v in classes.values()), key=lambda c: c[0])


@dataclass
class DiscreteVerdict(EquivalenceVerdict):
    classes: list = field(default_factory=list)
    gamma: dict = field(default_factory=dict)
    gamma_prime: dict = field(default_factory=dict)
    discrete: Optional[FinCategory] = None

    def gamma_functor(self, C: FinCategory) -> FinFunctor:
        D = self.discrete
        return FinFunctor(C, D, self.gamma,
                          {a: D.identity[self.gamma[s]] for a, (s, _) in C.arrows.items()},
                          "gamma")

    def gamma_prime_functor(self, C: FinCategory) -> FinFunctor:
        D = self.discrete
        return FinFunctor(D, C, self.gamma_prime,
                          {D.identity[r]: C.identity[r] for r in self.gamma_prime},
                          "gamma'")


def is_equivalent_to_discrete(C: FinCategory) -> DiscreteVerdict:
    """Decide whether ``C`` is equivalent to the discrete category on its components.

    Equivalently each component is a chaotic groupoid (all hom-sets inside a
    component are singletons).  The class representative is the least id.
    """
    classes = pi0(C)
    gamma = {x: cls[0] for cls in classes for x in cls}
    gamma_prime = {cls[0]: cls[0] for cls in classes}
    ff, ff_w = True, None
    for cls in classes:
        for x in cls:
            for y in cls:
                if len(C.hom(x, y)) != 1:
                    ff, ff_w = False, (x, y)
                    break
            if not ff:
                break
        if not ff:
            break
    D = discrete_category([cls[0] for cls in classes], (C.name or "C") + "^d")
    return DiscreteVerdict(ff, True, ff_w, None, classes, gamma, gamma_prime, D)


def pullback(F: FinFunctor, G: FinFunctor, name: str = ""):
    """The strict pullback of ``F: A -> C`` and ``G: B -> C``.

    Returns ``(P, p1, p2)``.  Objects and arrows of ``P`` are the pairs with
    equal images; their ids are ``(a,b)``.
    """
    A, B = F.dom, G.dom
    if F.cod is not G.cod and not F.cod.same_as(G.cod):
        raise ValueError("pullback of functors with different codomains")
    by_obj, by_arr = {}, {}
    for b in B.objects:
        by_obj.setdefault(G.ob(b), []).append(b)
    for b in B.arrows:
        by_arr.setdefault(G.ar(b), []).append(b)
    objects, arrows, parts = [], {}, {}
    obj_parts = {}
    for a in A.objects:
        for b in by_obj.get(F.ob(a), ()):
            o = pair_id(a, b)
            objects.append(o)
            obj_parts[o] = (a, b)
    back = {v: k for k, v in obj_parts.items()}
    for a, (sa, ta) in A.arrows.items():
        for b in by_arr.get(F.ar(a), ()):
            sb, tb = B.arrows[b]
            p = pair_id(a, b)
            arrows[p] = (back[(sa, sb)], back[(ta, tb)])
            parts[p] = (a, b)
    back_arr = {v: k for k, v in parts.items()}
    identity = {o: back_arr[(A.identity[a], B.identity[b])] for o, (a, b) in obj_parts.items()}

    def compose(g, f):
        (g1, g2), (f1, f2) = parts[g], parts[f]
        return back_arr[(A.comp(g1, f1), B.comp(g2, f2))]

    P = FinCategory(objects, arrows, identity, compose, name or f"{A.name}x{B.name}")
    P.parts, P.obj_parts = parts, obj_parts
    p1 = FinFunctor(P, A, {o: ab[0] for o, ab in obj_parts.items()},
                    {p: ab[0] for p, ab in parts.items()}, "p1")
    p2 = FinFunctor(P, B, {o: ab[1] for o, ab in obj_parts.items()},
                    {p: ab[1] for p, ab in parts.items()}, "p2")
    return P, p1, p2


def category_isomorphism(C: FinCategory, D: FinCategory, obj_map: Mapping,
                         arr_map: Mapping) -> bool:
    """Check that the given maps form an isomorphism of categories."""
    if len(set(obj_map.values())) != len(C.objects) or len(D.objects) != len(C.objects):
        return False
    if len(set(arr_map.values())) != len(C.arrows) or len(D.arrows) != len(C.arrows):
        return False
    try:
        FinFunctor(C, D, obj_map, arr_map, "iso").validate()
    except (FunctorViolation, KeyError):
        return False
    return True
