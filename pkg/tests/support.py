"""Shared builders and brute-force oracles for the test-suite."""
import itertools

from hypothesis import strategies as st

from wgdbl.fincat import validate_category
from wgdbl.fractions import FractionsPresentation


def preorder_category(n, pairs, name="P"):
    """Category of the preorder on ``0..n-1`` generated by ``pairs``."""
    rel = {(i, i) for i in range(n)} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (i, j), (k, l) in itertools.product(list(rel), repeat=2):
            if j == k and (i, l) not in rel:
                rel.add((i, l))
                changed = True
    nm = lambda i, j: f"1o{i}" if i == j else f"o{i}<o{j}"
    raw = {
        "name": name,
        "objects": [f"o{i}" for i in range(n)],
        "arrows": [{"id": nm(i, j), "src": f"o{i}", "tgt": f"o{j}"} for i, j in sorted(rel)],
        "identities": {f"o{i}": nm(i, i) for i in range(n)},
        "compose": [[nm(j, k), nm(i, j), nm(i, k)] for (i, j) in sorted(rel)
                    for (j2, k) in sorted(rel) if j == j2],
    }
    return validate_category(raw)


def cyclic_category(n, name=None):
    els = [f"g{i}" for i in range(n)]
    raw = {
        "name": name or f"Z{n}",
        "objects": ["*"],
        "arrows": [{"id": e, "src": "*", "tgt": "*"} for e in els],
        "identities": {"*": "g0"},
        "compose": [[f"g{i}", f"g{j}", f"g{(i + j) % n}"] for i in range(n) for j in range(n)],
    }
    return validate_category(raw)


@st.composite
def preorders(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=6))
    return preorder_category(n, pairs)


@st.composite
def finite_categories(draw):
    kind = draw(st.sampled_from(["preorder", "cyclic"]))
    if kind == "cyclic":
        return cyclic_category(draw(st.integers(1, 4)))
    return draw(preorders())


def all_arrows_presentation(C):
    return FractionsPresentation(C, list(C.arrows))


def identities_presentation(C):
    return FractionsPresentation(C, list(C.identity.values()))


def brute_is_iso(C, a):
    return any(C.tgt(b) == C.src(a) and C.src(b) == C.tgt(a)
               and C.comp(b, a) == C.identity[C.src(a)]
               and C.comp(a, b) == C.identity[C.tgt(a)] for b in C.arrows)


def one_object_double(elements, mul, unit, name="G"):
    """One object, one horizontal arrow ``I``, cells ``elements``.

    Vertical and horizontal composition of cells are both ``mul``; this is a
    double category exactly when ``mul`` is commutative.
    """
    table = [[a, b, mul(a, b)] for a in elements for b in elements]
    return {
        "name": name,
        "X0": {"objects": ["*"], "arrows": [{"id": "1*", "src": "*", "tgt": "*"}],
               "identities": {"*": "1*"}, "compose": []},
        "X1": {"objects": ["I"], "arrows": [{"id": e, "src": "I", "tgt": "I"} for e in elements],
               "identities": {"I": unit}, "compose": table},
        "d0": {"objects": {"I": "*"}, "arrows": {e: "1*" for e in elements}},
        "d1": {"objects": {"I": "*"}, "arrows": {e: "1*" for e in elements}},
        "s": {"objects": {"*": "I"}, "arrows": {"1*": unit}},
        "m": {"horizontals": [["I", "I", "I"]], "cells": table},
    }


def s3_double():
    perms = ["".join(p) for p in itertools.permutations("012")]

    def mul(a, b):   # a after b
        return "".join(a[int(b[i])] for i in range(3))

    return one_object_double(perms, mul, "012", "S3")


def composable_chains(C, k):
    """Brute-force count of composable k-chains of arrows."""
    if k == 0:
        return len(C.objects)
    chains = [(a,) for a in C.arrows]
    for _ in range(k - 1):
        chains = [c + (b,) for c in chains for b in C.arrows if C.tgt(c[-1]) == C.src(b)]
    return len(chains)


def quintets(C, name=None):
    """Q(C): horizontals and verticals both the arrows of C, cells commuting squares.

    A cell ``top|bottom|left|right`` satisfies ``right . top = bottom . left``.
    """
    from wgdbl.dblcat import DoubleCategory
    from wgdbl.fincat import FinCategory, FinFunctor

    X0 = FinCategory(C.objects, C.arrows, C.identity, C.table(), "X0")
    cells, parts = {}, {}
    for f in C.arrows:
        for g in C.arrows:
            for v in C.hom(C.src(f), C.src(g)):
                for w in C.hom(C.tgt(f), C.tgt(g)):
                    if C.comp(w, f) == C.comp(g, v):
                        k = f"{f}|{g}|{v}|{w}"
                        cells[k], parts[k] = (f, g), (f, g, v, w)
    cid = {p: k for k, p in parts.items()}

    def vc(b, a):
        f, _, v1, w1 = parts[a]
        _, g, v2, w2 = parts[b]
        return cid[(f, g, C.comp(v2, v1), C.comp(w2, w1))]

    def hc(b, a):
        f1, g1, v, _ = parts[a]
        f2, g2, _, w = parts[b]
        return cid[(C.comp(f2, f1), C.comp(g2, g1), v, w)]

    one = {f: cid[(f, f, C.identity[C.src(f)], C.identity[C.tgt(f)])] for f in C.arrows}
    X1 = FinCategory(list(C.arrows), cells, one, vc, "X1")
    d0 = FinFunctor(X1, X0, {f: C.src(f) for f in C.arrows}, {k: p[2] for k, p in parts.items()}, "d0")
    d1 = FinFunctor(X1, X0, {f: C.tgt(f) for f in C.arrows}, {k: p[3] for k, p in parts.items()}, "d1")
    ident = C.identity
    s = FinFunctor(X0, X1, {A: ident[A] for A in C.objects},
                   {v: cid[(ident[C.src(v)], ident[C.tgt(v)], v, v)] for v in C.arrows}, "s")
    return DoubleCategory(X0, X1, d0, d1, s, C.comp, hc, name or f"Q({C.name})")
