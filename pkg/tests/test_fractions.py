import itertools

import pytest
from hypothesis import given, strategies as st

from wgdbl.companion import find_companion, find_conjoint
from wgdbl.dblcat import (DoubleFunctor, HorizontalTransformation, check_strict_functor,
                          check_weak_globularity, double_isomorphism, horizontal_embedding,
                          identity_double_functor, pi0_double)
from wgdbl.errors import ConditionsFailed, InconsistentFrame
from wgdbl.fincat import FinFunctor, check_category, validate_category
from wgdbl.fixtures import load_category, load_double, load_presentation
from wgdbl.fractions import (FractionsPresentation, build_fractions, cell_exists,
                             check_fractions_conditions, check_w_friendly_transformation,
                             classify_for_companions, factor_cell, identities_presentation,
                             identity_pair, inclusion_JC, lift_w_friendly, nabla_W,
                             phi_functor, presentation_from_json, representative_robustness,
                             structure_for_identities)

from support import preorders

CATS = ("FIX-ARROW", "FIX-ISO", "FIX-POSB")


# -- independent oracle for the conditions -----------------------------------

def brute_conditions(C, W):
    W = set(W)
    if any(a not in W for a in C.arrows
           if any(C.comp(b, a) == C.identity[C.src(a)] and C.comp(a, b) == C.identity[C.tgt(a)]
                  for b in C.hom(C.tgt(a), C.src(a)))):
        return False
    if any(C.comp(g, f) not in W for f in W for g in W if C.tgt(f) == C.src(g)):
        return False
    for w in W:
        for f in C.arrows:
            if C.tgt(f) != C.tgt(w):
                continue
            if not any(C.comp(w, fb) == C.comp(f, wb)
                       for wb in W if C.tgt(wb) == C.src(f)
                       for fb in C.hom(C.src(wb), C.src(w))):
                return False
    for w in W:
        for f, g in itertools.combinations(C.arrows, 2):
            if C.arrows[f] != C.arrows[g] or C.tgt(f) != C.src(w):
                continue
            if C.comp(w, f) == C.comp(w, g) and not any(
                    C.comp(f, v) == C.comp(g, v) for v in W if C.tgt(v) == C.src(f)):
                return False
    return True


def kronecker():
    return validate_category({
        "name": "K", "objects": ["a", "b"],
        "arrows": [{"id": i, "src": s, "tgt": t} for i, s, t in
                   (("1a", "a", "a"), ("1b", "b", "b"), ("p", "a", "b"), ("q", "a", "b"))],
        "identities": {"a": "1a", "b": "1b"}, "compose": []})


def test_conditions_examples():
    assert check_fractions_conditions(load_presentation("FIX-POSB")).passed
    A = load_category("FIX-ARROW")
    assert check_fractions_conditions(identities_presentation(A)).passed
    P = FractionsPresentation(A, ("1a", "1b", "f"))
    assert check_fractions_conditions(P).passed == brute_conditions(A, P.W) is True


def test_identities_on_iso_fail_cf1():
    rep = check_fractions_conditions(identities_presentation(load_category("FIX-ISO")))
    assert not rep.passed and {x[1] for x in rep.cf1} == {"f", "g"}
    with pytest.raises(ConditionsFailed):
        build_fractions(identities_presentation(load_category("FIX-ISO")))


def test_kronecker_cf3():
    K = kronecker()
    # p and q are coequalized by nothing, but CF3 only asks when w p = w q
    assert check_fractions_conditions(identities_presentation(K)).passed
    P = FractionsPresentation(K, ("1a", "1b", "p"))
    assert check_fractions_conditions(P).passed == brute_conditions(K, P.W)


@given(preorders(), st.data())
def test_conditions_match_oracle(C, data):
    W = data.draw(st.sets(st.sampled_from(sorted(C.arrows))))
    W = set(W) | set(C.identity.values())
    P = FractionsPresentation(C, tuple(W))
    assert check_fractions_conditions(P).passed == brute_conditions(C, W)


def test_two_out_of_three_flag():
    C = load_category("FIX-POSB")
    P = FractionsPresentation(C, tuple(C.identity.values()) + ("bx", "bt"), True)
    rep = check_fractions_conditions(P)
    assert ("xt", "bx", "bt") in rep.two_out_of_three
    with pytest.raises(ConditionsFailed):
        nabla_W(P)


# -- the construction --------------------------------------------------------

def test_identities_give_h():
    P = identities_presentation(load_category("FIX-ARROW"))
    F = build_fractions(P)
    J = inclusion_JC(P, F)
    assert double_isomorphism(J.dom, F, J.F0, J.F1)


def test_iso_fractions_counts():
    F = build_fractions(load_presentation("FIX-ISO"))
    assert len(F.objects) == 4
    P = pi0_double(F)
    assert len(P.objects) == 2
    assert all(len(P.hom(x, y)) == 1 for x in P.objects for y in P.objects)


def test_vertical_homs_by_codomain():
    for n in CATS:
        P = load_presentation(n)
        F = build_fractions(P)
        for w1, w2 in itertools.product(P.W, repeat=2):
            hs = F.X0.hom(w1, w2)
            assert len(hs) <= 1
            assert bool(hs) == (P.cod(w1) == P.cod(w2))


def test_horizontal_hom_sizes():
    for n in CATS:
        P = load_presentation(n)
        F = build_fractions(P)
        C = P.base
        for w1, w2 in itertools.product(P.W, repeat=2):
            n_h = sum(1 for h in F.horizontals if (F.hsrc(h), F.htgt(h)) == (w1, w2))
            assert n_h == len(C.hom(P.dom(w1), P.dom(w2)))


def test_cells_posetal_and_groupoidal():
    for n in CATS:
        F = build_fractions(load_presentation(n))
        assert F.X1.is_posetal() and F.X1.is_groupoid()
        assert F.X0.is_posetal() and F.X0.is_groupoid()


def test_weakly_globular():
    for n in CATS:
        assert check_weak_globularity(build_fractions(load_presentation(n)), 3).passed


def test_witness_choice_does_not_change_tables():
    for n in CATS:
        P = load_presentation(n)
        least = build_fractions(P, witness_order="least")
        greatest = build_fractions(P, witness_order="greatest")
        assert least.same_as(greatest)
        assert least.m_table() == greatest.m_table()


@given(preorders(max_n=3))
def test_preorder_fractions_weakly_globular(C):
    P = FractionsPresentation(C, tuple(C.arrows))
    if not check_fractions_conditions(P).passed:
        return
    F = build_fractions(P)
    assert check_weak_globularity(F, 2).passed
    assert not representative_robustness(F)


# -- cells -------------------------------------------------------------------

def test_identity_frame_has_degenerate_witness():
    P = identities_presentation(load_category("FIX-ARROW"))
    x = cell_exists(P, ("1a", "f", "1b", "1a", "f", "1b"))
    assert x is not None and x.phi == "f"
    assert x.left == ("a", "1a", "1a") and x.right == ("b", "1b", "1b")
    # with more of W available the least witness may refine further
    C = load_category("FIX-ISO")
    x = cell_exists(load_presentation("FIX-ISO"), ("1a", "f", "1b", "1a", "f", "1b"))
    (_, u1, u2), (_, v1, v2) = x.left, x.right
    assert C.comp(v1, x.phi) == C.comp("f", u1) and C.comp(v2, x.phi) == C.comp("f", u2)


def test_parallel_arrows_have_no_cell():
    P = identities_presentation(kronecker())
    assert cell_exists(P, ("1a", "p", "1b", "1a", "q", "1b")) is None
    assert cell_exists(P, ("1a", "p", "1b", "1a", "p", "1b")) is not None


def test_posb_frames_refined_by_bottom():
    P = load_presentation("FIX-POSB")
    C = P.base
    for w1, w1p, w2, w2p in itertools.product(P.W, repeat=4):
        if P.cod(w1) != P.cod(w2) or P.cod(w1p) != P.cod(w2p):
            continue
        for f1 in C.hom(P.dom(w1), P.dom(w1p)):
            for f2 in C.hom(P.dom(w2), P.dom(w2p)):
                x = cell_exists(P, (w1, f1, w1p, w2, f2, w2p))
                assert x is not None and x.left[0] == "bot"


def test_inconsistent_frame():
    P = load_presentation("FIX-POSB")
    with pytest.raises(InconsistentFrame):
        cell_exists(P, ("1x", "1x", "1x", "1y", "1y", "1y"))
    with pytest.raises(InconsistentFrame):
        cell_exists(P, ("1x", "xt", "1x", "1x", "1x", "1x"))


def test_representative_robustness():
    for n in CATS:
        assert representative_robustness(build_fractions(load_presentation(n))) == []


# -- J and companions --------------------------------------------------------

def test_inclusion_strict():
    for n in CATS:
        P = load_presentation(n)
        assert check_strict_functor(inclusion_JC(P, build_fractions(P)))


def test_classification_agrees():
    for n in CATS:
        rep = classify_for_companions(build_fractions(load_presentation(n)))
        assert rep.ok, rep.disagreements()


def test_posb_vertical_normal_form():
    F = build_fractions(load_presentation("FIX-POSB"))
    rep = classify_for_companions(F)
    e = next(e for e in rep.entries
             if e["kind"] == "vertical-companion" and e["arrow"] == F.vertical("bt", "xt"))
    assert e["normal_form"] == "bx" and e["found"] is not None
    for w in F.objects:
        e = next(e for e in rep.entries
                 if e["kind"] == "vertical-companion" and e["arrow"] == F.vertical(w, w))
        assert e["normal_form"] == F.presentation.base.identity[F.presentation.dom(w)]


def test_iso_normal_form_horizontals():
    P = load_presentation("FIX-ISO")
    F = build_fractions(P)
    C = P.base
    for h, (w1, u, w2) in F.hor.items():
        if C.comp(w2, u) == w1:
            assert find_companion(F, h) is not None and find_conjoint(F, h) is not None


# -- factorization -----------------------------------------------------------

def test_factor_identity_cell():
    F = build_fractions(load_presentation("FIX-ISO"))
    h = F.horizontal("1a", "f", "1b")
    plan = factor_cell(F, F.one(h))
    assert plan.ok and len(plan.frames) == 8


def test_factor_generic_posb_cell():
    F = build_fractions(load_presentation("FIX-POSB"))
    c = F.cell_on(F.horizontal("1bot", "bx", "xt"), F.horizontal("1bot", "by", "yt"))
    assert c is not None
    plan = factor_cell(F, c)
    assert plan.ok and all(fr.cell is not None for fr in plan.frames)


# -- triangles over W and the canonical structure ----------------------------

def test_nabla_posb():
    P = load_presentation("FIX-POSB")
    N = nabla_W(P)
    C = P.base
    check_category(N.category)
    assert len(N.category.objects) == len(P.W) == 9
    triangles = [(w1, w2, v) for w1 in P.W for w2 in P.W
                 for v in C.hom(P.dom(w1), P.dom(w2)) if C.comp(w2, v) == w1]
    assert len(N.category.arrows) == len(triangles)
    assert all(N.D0.ob(w) == P.dom(w) for w in P.W)
    N.D0.validate()


def test_phi_structure():
    P = load_presentation("FIX-POSB")
    cs = phi_functor(P)
    C = P.base
    for A in C.objects:
        assert cs.phi[C.identity[A]] == cs.structure.target.Id(C.identity[A])
    assert check_strict_functor(cs.Phi)
    assert cs.structure.validate()


def test_lift_canonical_structure():
    for n in ("FIX-ISO", "FIX-POSB"):
        P = load_presentation(n)
        cs = phi_functor(P)
        res = lift_w_friendly(cs.structure, cs.structure.target)
        assert res.ok
        for A in P.base.objects:
            assert res.comparison.components[A] == cs.phi[P.base.identity[A]]


def to_bg(C, D, image):
    G0 = FinFunctor(horizontal_embedding(C).X0, D.X0, {A: "*" for A in C.objects},
                    {f"1[{A}]": "1[*]" for A in C.objects})
    H = horizontal_embedding(C)
    G1 = FinFunctor(H.X1, D.X1, image, {f"1[{f}]": f"1[{image[f]}]" for f in C.arrows})
    return DoubleFunctor(H, D, G0, G1, "G")


def test_lift_with_identities():
    C = load_category("FIX-ARROW")
    P = identities_presentation(C)
    H = horizontal_embedding(C)
    for G in (identity_double_functor(H), to_bg(C, load_double("FIX-BG"), {"1a": "e", "1b": "e", "f": "t"})):
        assert check_strict_functor(G)
        S = structure_for_identities(P, G)
        assert S.validate()
        res = lift_w_friendly(S)
        assert res.ok


def test_w_friendly_transformations():
    C = load_category("FIX-ARROW")
    P = identities_presentation(C)
    D = load_double("FIX-BG")
    G = to_bg(C, D, {"1a": "e", "1b": "e", "f": "t"})
    S = structure_for_identities(P, G)
    a, alpha = identity_pair(S)
    assert check_w_friendly_transformation(S, S, a, alpha)
    # b: G => G with every component t, and the induced beta_w = b_dom(w)
    b = HorizontalTransformation(G, G, {"a": "t", "b": "t"}, {"1[a]": "1[t]", "1[b]": "1[t]"})
    beta = HorizontalTransformation(S.Gamma, S.Gamma, {w: "t" for w in P.W},
                                    {v: S.comp.one("t") for v in S.Gamma.dom.X0.arrows})
    assert check_w_friendly_transformation(S, S, b, beta)
    beta.components = dict(beta.components, **{"1b": "e"})
    beta.cells = {v: S.comp.one(beta.components[S.Gamma.dom.X0.src(v)])
                  for v in S.Gamma.dom.X0.arrows}
    v = check_w_friendly_transformation(S, S, b, beta)
    assert not v.ok and v.data == ("1b",)


def test_presentation_json_round_trip():
    for n in CATS:
        P = load_presentation(n)
        Q = presentation_from_json(P.to_json())
        assert Q.W == P.W and Q.base.same_as(P.base)
