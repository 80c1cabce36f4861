import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexsem import (Abs, App, Arrow, Const, Context, Forall, PROP, ParseError,
                    SortRef, TyAbs, TyApp, TypeVar, TypingError, Var,
                    alpha_equiv, free_type_vars, free_vars, fresh_name,
                    parse_term, parse_type, render_term, render_type,
                    subst_term, subst_type, type_of)

import termgen

E = SortRef("e")


def ctx(**constants):
    return Context(sorts={"e", "s"}, constants=constants)


# ---------------------------------------------------------------------------
# types and contexts

def test_prop_is_a_sort_ref():
    assert PROP == SortRef("t")


def test_context_always_knows_t():
    c = Context(sorts={"e"}, constants={})
    assert "t" in c.sorts


def test_context_rejects_name_collisions():
    with pytest.raises(TypingError):
        Context(sorts={"e"}, constants={"c": E}, variables={"c": E})


def test_context_rejects_unknown_sort_in_constant():
    with pytest.raises(TypingError):
        Context(sorts={"e"}, constants={"c": SortRef("nope")})


def test_parse_type_right_associative():
    t = parse_type("e -> e -> t", {"e"})
    assert t == Arrow(E, Arrow(E, PROP))


def test_parse_type_parens_override():
    t = parse_type("(e -> e) -> t", {"e"})
    assert t == Arrow(Arrow(E, E), PROP)


def test_parse_type_pi_binds_loosest():
    t = parse_type("Pi 'a. 'a -> t", {"e"})
    assert t == Forall("a", Arrow(TypeVar("a"), PROP))


def test_parse_type_unknown_sort():
    with pytest.raises(ParseError) as err:
        parse_type("e -> q", {"e"})
    assert "q" in str(err.value)


def test_render_type_round_trip():
    for src in ["e", "e -> t", "(e -> t) -> (e -> t) -> t",
                "Pi 'a. ('a -> t) -> 'a",
                "Pi 'a. Pi 'b. ('a -> t) -> ('b -> t) -> Pi 'c. 'c -> ('c -> 'a) -> ('c -> 'b) -> t"]:
        ty = parse_type(src, {"e"})
        assert parse_type(render_type(ty), {"e"}) == ty


def test_render_type_unicode():
    ty = parse_type("Pi 'a. ('a -> t) -> 'a", {"e"})
    assert render_type(ty, "unicode") == "Πa. (a→t)→a"


# ---------------------------------------------------------------------------
# terms: parsing and rendering

def test_parse_term_application_left_assoc():
    c = ctx(f=Arrow(E, Arrow(E, PROP)), a=E, b=E)
    t = parse_term("#f #a #b", c)
    assert t == App(App(Const("f", Arrow(E, Arrow(E, PROP))), Const("a", E)),
                    Const("b", E))


def test_parse_term_unbound_identifier():
    with pytest.raises(ParseError):
        parse_term("x", ctx())


def test_parse_term_unknown_constant():
    with pytest.raises(ParseError):
        parse_term("#missing", ctx())


def test_parse_term_reserved_binder_name():
    with pytest.raises(ParseError):
        parse_term("lam lam:e. x", ctx())


def test_parse_term_type_application():
    c = ctx(q=Forall("a", Arrow(TypeVar("a"), PROP)))
    t = parse_term("lam x:e. #q{e} x", c)
    assert isinstance(t.body.fun, TyApp)
    assert t.body.fun.arg_type == E


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_term("lam x:e. (#& x", ctx())
    assert err.value.line == 1
    assert err.value.col > 1


def test_render_term_parenthesizes_reparseably():
    c = ctx(p=Arrow(E, PROP), a=E)
    cases = [
        "lam x:e. #p x",
        "(lam x:e. x) #a",
        "lam f:e -> e. lam x:e. f (f x)",
        "Lam 'a. lam x:'a. x",
        "(Lam 'a. lam x:'a. x){e} #a",
    ]
    for src in cases:
        t = parse_term(src, c)
        again = parse_term(render_term(t), c)
        assert alpha_equiv(t, again)


def test_render_term_unicode_style():
    c = ctx(p=Arrow(E, PROP))
    t = parse_term("Lam 'a. lam x:'a. x", c)
    assert render_term(t, "unicode") == "Λa. λx^a. x"
    u = parse_term("lam x:e. #p x", c)
    assert render_term(u, "unicode") == "λx^e. p x"


# ---------------------------------------------------------------------------
# free variables and alpha-equivalence

def test_free_vars_shadowing():
    t = parse_term("lam x:e. x", ctx())
    assert free_vars(t) == {}
    u = App(Abs("x", E, Var("x", E)), Var("y", E))
    assert free_vars(u) == {"y": E}


def test_free_type_vars_of_term():
    t = Abs("x", TypeVar("a"), Var("x", TypeVar("a")))
    assert free_type_vars(t) == {"a"}
    assert free_type_vars(TyAbs("a", t)) == set()


def test_fresh_name_avoids():
    assert fresh_name("x", {"x", "x1"}) not in {"x", "x1"}
    assert fresh_name("y", set()) == "y"


def test_alpha_equiv_binders():
    a = parse_term("lam x:e. lam y:e. x", ctx())
    b = parse_term("lam u:e. lam v:e. u", ctx())
    c_ = parse_term("lam u:e. lam v:e. v", ctx())
    assert alpha_equiv(a, b)
    assert not alpha_equiv(a, c_)


def test_alpha_equiv_type_binders():
    a = parse_term("Lam 'a. lam x:'a. x", ctx())
    b = parse_term("Lam 'b. lam x:'b. x", ctx())
    assert alpha_equiv(a, b)


def test_alpha_equiv_distinguishes_const_and_var():
    assert not alpha_equiv(Const("a", E), Var("a", E))


def test_alpha_equiv_free_vars_by_name():
    assert alpha_equiv(Var("x", E), Var("x", E))
    assert not alpha_equiv(Var("x", E), Var("y", E))


# ---------------------------------------------------------------------------
# substitution

def test_subst_term_capture_avoidance():
    # (lam y:e. x y)[x := y] must rename the binder
    body = Abs("y", E, App(Var("x", Arrow(E, E)), Var("y", E)))
    out = subst_term(body, "x", Var("y", Arrow(E, E)))
    assert isinstance(out, Abs)
    assert out.var != "y"
    assert free_vars(out) == {"y": Arrow(E, E)}


def test_subst_term_checks_value_type():
    with pytest.raises(TypingError):
        subst_term(Var("x", E), "x", Const("r", PROP))


def test_subst_term_shadowed_occurrences_stay():
    t = Abs("x", E, Var("x", E))
    out = subst_term(App(t, Var("x", E)), "x", Const("k", E), var_type=E)
    assert out == App(t, Const("k", E))


def test_subst_type_in_types():
    ty = Forall("a", Arrow(TypeVar("a"), TypeVar("b")))
    out = subst_type(ty, "b", E)
    assert out == Forall("a", Arrow(TypeVar("a"), E))
    # bound occurrences are untouched
    assert subst_type(ty, "a", E) == ty


def test_subst_type_capture_avoidance():
    # substituting 'a into Pi b. a -> b must not capture under b
    ty = Forall("b", Arrow(TypeVar("a"), TypeVar("b")))
    out = subst_type(ty, "a", TypeVar("b"))
    assert isinstance(out, Forall)
    assert out.var != "b"
    assert out.body.domain == TypeVar("b")


def test_subst_type_rewrites_annotations():
    t = Abs("x", TypeVar("a"), Var("x", TypeVar("a")))
    out = subst_type(t, "a", E)
    assert out == Abs("x", E, Var("x", E))


# ---------------------------------------------------------------------------
# typing

def test_type_of_application_mismatch():
    f = Const("p", Arrow(E, PROP))
    with pytest.raises(TypingError):
        type_of(App(f, Const("r", PROP)))


def test_type_of_type_application():
    poly = TyAbs("a", Abs("x", TypeVar("a"), Var("x", TypeVar("a"))))
    assert type_of(poly) == Forall("a", Arrow(TypeVar("a"), TypeVar("a")))
    assert type_of(TyApp(poly, E)) == Arrow(E, E)


def test_type_of_vacuous_quantification_allowed():
    t = TyAbs("a", Const("k", E))
    assert type_of(t) == Forall("a", E)


def test_tyabs_side_condition():
    # Lam 'a over a body whose free variable mentions 'a is rejected
    bad = TyAbs("a", Var("y", TypeVar("a")))
    with pytest.raises(TypingError):
        type_of(bad)
    # the same body under a binder for y is fine
    good = Abs("y", TypeVar("a"), TyAbs("b", Var("y", TypeVar("a"))))
    assert type_of(good) == Arrow(TypeVar("a"), Forall("b", TypeVar("a")))


def test_type_of_checks_context_declarations():
    c = ctx(k=E)
    with pytest.raises(TypingError):
        type_of(Const("k", PROP), c)
    assert type_of(Const("k", E), c) == E


def test_type_of_free_variable_consistency():
    t = App(App(Const("f", Arrow(E, Arrow(PROP, E))), Var("x", E)),
            Var("x", PROP))
    with pytest.raises(TypingError):
        type_of(t)


# ---------------------------------------------------------------------------
# generated populations

def test_generated_terms_typecheck():
    g = termgen.RandomTerms(7)
    for t in g.population(150):
        ty = type_of(t, g.ctx)
        assert ty is not None


def test_parse_render_round_trip_on_population():
    g = termgen.RandomTerms(31)
    for t in g.population(150):
        src = render_term(t)
        again = parse_term(src, g.ctx)
        assert alpha_equiv(t, again), src


@settings(max_examples=60)
@given(st.integers(0, 10_000))
def test_alpha_equiv_is_reflexive_on_random_terms(seed):
    t = termgen.RandomTerms(seed).closed_term()
    assert alpha_equiv(t, t)


@settings(max_examples=60)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_alpha_equiv_is_symmetric(s1, s2):
    a = termgen.RandomTerms(s1).closed_term()
    b = termgen.RandomTerms(s2).closed_term()
    assert alpha_equiv(a, b) == alpha_equiv(b, a)
