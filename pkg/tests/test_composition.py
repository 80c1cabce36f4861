import pytest

from lexsem import (App, Arrow, CompositionError, Const, Leaf, Node,
                    PROP, ParseError, Rejection, SortRef, alpha_equiv,
                    apply_with_coercion, compose, felicity, load_lexicon,
                    parse_tree, poly_and, quantifier_type, render_formula,
                    resolve_copredication, type_of)

from conftest import fixture_text

E = SortRef("e")


# ---------------------------------------------------------------------------
# tree syntax

def test_parse_tree_left_fold():
    assert parse_tree("(a b c)") == Node(Node(Leaf("a"), Leaf("b")), Leaf("c"))


def test_parse_tree_nesting():
    t = parse_tree("((some club) (defeated Leeds))")
    assert t == Node(Node(Leaf("some"), Leaf("club")),
                     Node(Leaf("defeated"), Leaf("Leeds")))


def test_parse_tree_singleton_unwraps():
    assert parse_tree("(x)") == Leaf("x")
    assert parse_tree("((x))") == Leaf("x")


def test_parse_tree_bare_leaf():
    assert parse_tree("  Liverpool ") == Leaf("Liverpool")


@pytest.mark.parametrize("text,fragment", [
    ("(a b", "missing ')'"),
    ("a b)", "trailing"),
    ("(a) b", "trailing"),
    ("()", "empty"),
    (")", "unexpected ')'"),
    ("", "unexpected end"),
])
def test_parse_tree_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_tree(text)
    assert fragment in str(err.value)


def test_tree_str_round_trip():
    tree = parse_tree("((AND spread_out voted) Liverpool)")
    assert str(tree) == "(((AND spread_out) voted) Liverpool)"
    assert parse_tree(str(tree)) == tree


# ---------------------------------------------------------------------------
# application with coercion

def test_apply_direct(liverpool):
    fun = liverpool.entry("voted").principal
    arg = Const("she", SortRef("P"))
    [(term, m)] = apply_with_coercion(fun, arg)
    assert m is None
    assert alpha_equiv(term, App(fun, arg))


def test_apply_mismatch_without_entry(liverpool):
    fun = liverpool.entry("spread_out").principal
    arg = liverpool.entry("Liverpool").principal
    assert apply_with_coercion(fun, arg) == []


def test_apply_through_morphism(liverpool):
    fun = liverpool.entry("spread_out").principal
    entry = liverpool.entry("Liverpool")
    [(term, m)] = apply_with_coercion(fun, entry.principal, entry)
    assert m.name == "t3"
    assert alpha_equiv(term, App(fun, App(m.term, entry.principal)))


def test_apply_no_fitting_morphism(liverpool):
    fun = Const("p", Arrow(SortRef("zz"), PROP))
    entry = liverpool.entry("Liverpool")
    assert apply_with_coercion(fun, entry.principal, entry) == []


def test_apply_non_function_raises(liverpool):
    arg = liverpool.entry("won").principal
    with pytest.raises(CompositionError):
        apply_with_coercion(liverpool.entry("Liverpool").principal, arg)


def test_apply_instantiates_quantified_functor(montague):
    fun = Const("exists", quantifier_type())
    arg = montague.entry("club").principal
    [(term, m)] = apply_with_coercion(fun, arg)
    assert m is None
    assert type_of(term) == PROP


def test_apply_quantified_no_match(montague):
    fun = Const("exists", quantifier_type())
    assert apply_with_coercion(fun, montague.entry("Leeds").principal) == []


def test_apply_requires_full_instantiation(montague):
    # only one of the two leading quantifiers is determined by the match
    assert apply_with_coercion(poly_and(),
                               montague.entry("club").principal) == []


# ---------------------------------------------------------------------------
# copredication over a shared argument

def test_resolve_copredication_one_pair(liverpool):
    entry = liverpool.entry("Liverpool")
    readings = resolve_copredication(liverpool.entry("spread_out").principal,
                                     liverpool.entry("voted").principal,
                                     entry.principal, entry)
    assert len(readings) == 1
    r = readings[0]
    assert render_formula(r.formula) == "spread_out(t3(lpl)) & voted(t2(lpl))"
    assert r.used_morphisms == (("Liverpool", (), "t3"),
                                ("Liverpool", (), "t2"))


def test_resolve_copredication_rigidity_blocks(liverpool):
    entry = liverpool.entry("Liverpool")
    readings = resolve_copredication(liverpool.entry("voted").principal,
                                     liverpool.entry("won").principal,
                                     entry.principal, entry)
    assert readings == []


def test_resolve_copredication_wants_predicates(liverpool):
    entry = liverpool.entry("Liverpool")
    with pytest.raises(CompositionError):
        resolve_copredication(entry.principal,
                              liverpool.entry("voted").principal,
                              entry.principal, entry)


# ---------------------------------------------------------------------------
# whole trees

def test_compose_plain_sentence(montague):
    [r] = compose(parse_tree("((some club) (defeated Leeds))"), montague)
    assert render_formula(r.formula) == "exists x:e. club(x) & defeated(x, Leeds)"
    assert r.used_morphisms == ()
    assert r.presuppositions == ()


def test_compose_records_morphism(liverpool):
    [r] = compose(parse_tree("(spread_out Liverpool)"), liverpool)
    assert render_formula(r.formula) == "spread_out(t3(lpl))"
    assert r.used_morphisms == (("Liverpool", (1,), "t3"),)


def test_compose_copredication(liverpool):
    [r] = compose(parse_tree("((AND spread_out voted) Liverpool)"), liverpool)
    assert render_formula(r.formula) == \
        "spread_out(t3(lpl)) & voted(t2(lpl))"
    assert r.used_morphisms == (("Liverpool", (1,), "t3"),
                                ("Liverpool", (1,), "t2"))


def test_compose_rigid_conflict_is_empty(liverpool):
    assert compose(parse_tree("((AND voted won) Liverpool)"), liverpool) == []


def test_compose_rigid_agrees_with_itself(liverpool):
    [r] = compose(parse_tree("((AND won won) Liverpool)"), liverpool)
    assert render_formula(r.formula) == "won(t1(lpl)) & won(t1(lpl))"
    assert r.used_morphisms == (("Liverpool", (1,), "t1"),
                                ("Liverpool", (1,), "t1"))


def test_definite_referent(assinatura):
    [r] = compose(parse_tree("(THE assinatura)"), assinatura)
    assert type_of(r.term) == SortRef("v")
    assert [render_formula(p) for p in r.presuppositions] == \
        ["assi(iota[v](assi))"]


def test_presupposition_propagates(assinatura):
    [r] = compose(parse_tree("(atrasou (THE assinatura))"), assinatura)
    assert render_formula(r.formula) == "atrasou(iota[v](assi))"
    assert [render_formula(p) for p in r.presuppositions] == \
        ["assi(iota[v](assi))"]
    assert r.used_morphisms == ()


def test_coerced_definite(assinatura):
    [r] = compose(parse_tree("(ilegivel (THE assinatura))"), assinatura)
    assert render_formula(r.formula) == "ilegivel(f_phi(iota[v](assi)))"
    assert r.used_morphisms == (("assinatura", (1,), "f_phi"),)


def test_nested_conjunction(assinatura):
    tree = parse_tree("((AND (AND furou ilegivel) atrasou) (THE assinatura))")
    verdict = felicity(tree, assinatura)
    assert verdict.status == "felicitous"
    [r] = verdict.readings
    assert render_formula(r.formula) == \
        "furou(f_vphi(iota[v](assi))) & ilegivel(f_phi(iota[v](assi)))" \
        " & atrasou(iota[v](assi))"
    names = [name for _, _, name in r.used_morphisms]
    assert names.count("Id_v") == 2
    assert {"f_vphi", "f_phi"} <= set(names)
    assert verdict.notes == \
        ("rigidity applies within each conjunction node separately",)


def test_two_conjunction_nodes_note():
    text = fixture_text("liverpool.mgl") + \
        "pred both : t -> t -> t\nword both : t -> t -> t = #both\n"
    lex = load_lexicon(text)
    tree = parse_tree("((both ((AND spread_out voted) Liverpool))"
                      " ((AND spread_out voted) Liverpool))")
    verdict = felicity(tree, lex)
    assert verdict.status == "felicitous"
    [r] = verdict.readings
    # an embedded proposition renders in applied form under a plain head
    assert render_formula(r.formula) == \
        "both(&(spread_out(t3(lpl)), voted(t2(lpl)))," \
        " &(spread_out(t3(lpl)), voted(t2(lpl))))"
    assert r.used_morphisms == (
        ("Liverpool", (0, 1, 1), "t3"), ("Liverpool", (0, 1, 1), "t2"),
        ("Liverpool", (1, 1), "t3"), ("Liverpool", (1, 1), "t2"))
    assert verdict.notes == \
        ("rigidity applies within each conjunction node separately",)


def test_empty_alternatives_propagate():
    text = fixture_text("liverpool.mgl") + \
        "pred both : t -> t -> t\nword both : t -> t -> t = #both\n"
    lex = load_lexicon(text)
    tree = parse_tree("((both ((AND spread_out voted) Liverpool))"
                      " ((AND voted won) Liverpool))")
    verdict = felicity(tree, lex)
    assert verdict.status == "infelicitous"
    assert verdict.readings == ()
    assert any("rigid t1 excludes t2" == str(r)
               for r in verdict.rejection_log)


def test_four_readings_when_all_flexible():
    lex = load_lexicon(
        "sorts: xi alpha\n"
        "pred k : xi\npred u : xi -> alpha\npred w : xi -> alpha\n"
        "pred pp : alpha -> t\npred qq : alpha -> t\n"
        "word N : xi = #k\n"
        "  morph u : xi -> alpha = #u [flexible]\n"
        "  morph w : xi -> alpha = #w [flexible]\n"
        "word pp : alpha -> t = #pp\n"
        "word qq : alpha -> t = #qq\n")
    readings = compose(parse_tree("((AND pp qq) N)"), lex)
    formulas = sorted(render_formula(r.formula) for r in readings)
    assert formulas == ["pp(u(k)) & qq(u(k))", "pp(u(k)) & qq(w(k))",
                        "pp(w(k)) & qq(u(k))", "pp(w(k)) & qq(w(k))"]


def test_alpha_equivalent_readings_collapse():
    # two differently named morphisms denoting the same function
    lex = load_lexicon(
        "sorts: xi alpha\n"
        "pred k : xi\npred u : xi -> alpha\n"
        "pred pp : alpha -> t\npred qq : alpha -> t\n"
        "word N : xi = #k\n"
        "  morph u : xi -> alpha = #u [flexible]\n"
        "  morph w : xi -> alpha = #u [flexible]\n"
        "word pp : alpha -> t = #pp\n"
        "word qq : alpha -> t = #qq\n")
    readings = compose(parse_tree("((AND pp qq) N)"), lex)
    assert len(readings) == 1
    assert render_formula(readings[0].formula) == "pp(u(k)) & qq(u(k))"


def test_single_predication_ignores_rigidity():
    text = fixture_text("liverpool.mgl").replace("#t3 [flexible]",
                                                 "#t3 [rigid]")
    lex = load_lexicon(text)
    [r] = compose(parse_tree("(spread_out Liverpool)"), lex)
    assert render_formula(r.formula) == "spread_out(t3(lpl))"


# ---------------------------------------------------------------------------
# verdicts

def test_verdict_felicitous(liverpool):
    v = felicity(parse_tree("(spread_out Liverpool)"), liverpool)
    assert v.status == "felicitous"
    assert len(v.readings) == 1
    assert v.rejection_log == ()
    assert v.error is None


def test_verdict_infelicitous(liverpool):
    v = felicity(parse_tree("((AND voted won) Liverpool)"), liverpool)
    assert v.status == "infelicitous"
    assert v.readings == ()
    assert str(v.rejection_log[0]) == "rigid t1 excludes t2"
    assert v.rejection_log[0].assignment == ("t2", "t1")


def test_verdict_unknown_word(liverpool):
    v = felicity(parse_tree("(spread_out Everton)"), liverpool)
    assert v.status == "typeError"
    assert "Everton" in v.error


def test_verdict_untypable_application(assinatura):
    v = felicity(parse_tree("(ilegivel assinatura)"), assinatura)
    assert v.status == "typeError"
    assert "cannot apply" in v.error


def test_verdict_non_function(liverpool):
    v = felicity(parse_tree("(Liverpool voted)"), liverpool)
    assert v.status == "typeError"
    assert "not a function type" in v.error


def test_error_paths_are_dotted(liverpool):
    with pytest.raises(CompositionError) as err:
        compose(parse_tree("(spread_out (THE missing))"), liverpool)
    assert str(err.value).startswith("at 1.1:")


def test_unapplied_marker(liverpool):
    with pytest.raises(CompositionError):
        compose(parse_tree("(AND spread_out)"), liverpool)
    with pytest.raises(CompositionError):
        compose(parse_tree("(THE AND)"), liverpool)


def test_rejection_str():
    r = Rejection(("f", "g"), "rigid f excludes g")
    assert str(r) == "rigid f excludes g"
