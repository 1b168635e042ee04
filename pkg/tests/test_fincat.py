import itertools

import pytest
from hypothesis import given, strategies as st

from wgdbl.errors import AssociativityViolation, IdentityViolation, MissingComposite
from wgdbl.fincat import (FinFunctor, coproduct, discrete_category, identity_functor,
                          is_equivalence, is_equivalent_to_discrete, pi0, pullback,
                          terminal_category, validate_category)
from wgdbl.fixtures import load_category, load_raw
from wgdbl.dblcat import horizontal_embedding

from support import brute_is_iso, cyclic_category, finite_categories, preorder_category


def to_terminal(C):
    T = terminal_category()
    return FinFunctor(C, T, {x: "*" for x in C.objects}, {a: "1_*" for a in C.arrows}, "!")


# -- validation ------------------------------------------------------------

def test_fixture_arrow_counts():
    assert len(load_category("FIX-ARROW").arrows) == 3
    assert len(load_category("FIX-ISO").arrows) == 4


def test_associativity_violation_names_triple():
    # Z/2 on one object with a broken table: a.a = 1, but a.(a.a) must then be a
    raw = {"objects": ["*"],
           "arrows": [{"id": "1", "src": "*", "tgt": "*"}, {"id": "a", "src": "*", "tgt": "*"},
                      {"id": "b", "src": "*", "tgt": "*"}],
           "identities": {"*": "1"},
           "compose": [["1", "1", "1"], ["a", "1", "a"], ["1", "a", "a"], ["b", "1", "b"],
                       ["1", "b", "b"], ["a", "a", "b"], ["a", "b", "a"], ["b", "a", "b"],
                       ["b", "b", "b"]]}
    with pytest.raises(AssociativityViolation) as e:
        validate_category(raw)
    assert len(e.value.arrows) == 3


def test_missing_composite_and_identity_errors():
    raw = load_raw("FIX-ISO")
    raw = dict(raw, compose=[c for c in raw["compose"] if c[:2] != ["g", "f"]])
    with pytest.raises(MissingComposite):
        validate_category(raw)
    raw = load_raw("FIX-ARROW")
    raw = dict(raw, identities={"a": "f", "b": raw["identities"]["b"]})
    with pytest.raises(IdentityViolation):
        validate_category(raw)


@given(finite_categories())
def test_validate_is_idempotent(C):
    again = validate_category(C.to_json())
    assert again.same_as(C)
    assert validate_category(again.to_json()).same_as(again)


# -- equivalence with a discrete category ----------------------------------

def test_discrete_is_discrete():
    v = is_equivalent_to_discrete(discrete_category(["a", "b", "c"]))
    assert v.is_equivalence and len(v.classes) == 3


def test_chaotic_groupoid_two_objects():
    v = is_equivalent_to_discrete(load_category("FIX-ISO"))
    assert v.is_equivalence
    assert v.classes == [["a", "b"]]
    G, Gp = v.gamma_functor(load_category("FIX-ISO")), v.gamma_prime_functor(load_category("FIX-ISO"))
    assert Gp.then(G).obj_map == {r: r for r in v.gamma_prime}


def test_z2_not_discrete():
    v = is_equivalent_to_discrete(cyclic_category(2))
    assert not v.is_equivalence and v.ff_witness == ("*", "*")


def brute_discrete(C):
    # every arrow invertible and parallel arrows equal
    for x, y in itertools.product(C.objects, repeat=2):
        if len(C.hom(x, y)) > 1:
            return False
    return all(brute_is_iso(C, a) for a in C.arrows)


@given(finite_categories())
def test_discrete_verdict_matches_bruteforce(C):
    assert bool(is_equivalent_to_discrete(C)) == brute_discrete(C)


# -- functor equivalences ---------------------------------------------------

def test_identity_is_equivalence():
    for name in ("FIX-ARROW", "FIX-ISO", "FIX-POSB"):
        assert is_equivalence(identity_functor(load_category(name)))


def test_iso_to_terminal_is_equivalence():
    assert is_equivalence(to_terminal(load_category("FIX-ISO")))
    v = is_equivalence(to_terminal(load_category("FIX-ARROW")))
    assert not v.fully_faithful and v.essentially_surjective


def test_constant_functor_not_eso():
    D = discrete_category(["a", "b"])
    F = FinFunctor(D, D, {"a": "a", "b": "a"}, {"1_a": "1_a", "1_b": "1_a"})
    v = is_equivalence(F)
    assert not v.essentially_surjective and v.eso_witness == "b"


def test_composite_of_equivalences():
    C = load_category("FIX-ISO")
    T = terminal_category()
    back = FinFunctor(T, C, {"*": "a"}, {"1_*": C.identity["a"]}, "pt")
    F, G = to_terminal(C), back
    assert is_equivalence(F) and is_equivalence(G)
    assert is_equivalence(F.then(G)) and is_equivalence(G.then(F))


@given(finite_categories())
def test_equivalence_to_terminal_iff_chaotic_connected(C):
    expected = len(pi0(C)) == 1 and brute_discrete(C)
    assert bool(is_equivalence(to_terminal(C))) == expected


# -- pullbacks --------------------------------------------------------------

def test_composable_pairs_in_horizontal_embedding():
    H = horizontal_embedding(load_category("FIX-ARROW"))
    C = load_category("FIX-ARROW")
    P, p1, p2 = pullback(H.d0, H.d1)
    brute = [(g, f) for g in C.arrows for f in C.arrows if C.tgt(f) == C.src(g)]
    assert len(brute) == 4
    assert len(P.objects) == len(brute)
    p1.validate(), p2.validate()


def test_pullback_over_terminal_is_product():
    A, B = load_category("FIX-ARROW"), load_category("FIX-ISO")
    P, _, _ = pullback(to_terminal(A), to_terminal(B))
    assert len(P.objects) == 4 and len(P.arrows) == 12


def test_pullback_of_identities():
    C = load_category("FIX-POSB")
    P, p1, _ = pullback(identity_functor(C), identity_functor(C))
    assert len(P.objects) == len(C.objects) and len(P.arrows) == len(C.arrows)
    assert is_equivalence(p1)


@given(finite_categories(), finite_categories())
def test_projections_jointly_reflect_equality(A, B):
    P, p1, p2 = pullback(to_terminal(A), to_terminal(B))
    seen = {}
    for a in P.arrows:
        key = (p1.ar(a), p2.ar(a))
        assert key not in seen
        seen[key] = a
    assert len(P.arrows) == len(A.arrows) * len(B.arrows)


# -- components -------------------------------------------------------------

def test_pi0_examples():
    assert len(pi0(discrete_category(["a", "b", "c"]))) == 3
    assert len(pi0(load_category("FIX-ISO"))) == 1
    U = coproduct(load_category("FIX-ISO"), terminal_category())
    assert len(pi0(U)) == 2


def brute_components(C):
    adj = {x: set() for x in C.objects}
    for a in C.arrows:
        adj[C.src(a)].add(C.tgt(a))
        adj[C.tgt(a)].add(C.src(a))
    seen, out = set(), []
    for x in C.objects:
        if x in seen:
            continue
        stack, comp = [x], set()
        while stack:
            y = stack.pop()
            if y not in comp:
                comp.add(y)
                stack.extend(adj[y])
        seen |= comp
        out.append(frozenset(comp))
    return set(out)


@given(finite_categories())
def test_pi0_matches_graph_search(C):
    assert {frozenset(c) for c in pi0(C)} == brute_components(C)


@given(st.integers(1, 4))
def test_pi0_invariant_under_equivalence(n):
    # collapsing a chaotic preorder onto one object is an equivalence
    C = preorder_category(n, [(i, j) for i in range(n) for j in range(n)])
    F = to_terminal(C)
    assert is_equivalence(F)
    assert len(pi0(C)) == len(pi0(F.cod))
