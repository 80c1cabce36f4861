"""Composition of binary parse trees into logical readings.

Trees are written as s-expressions over lexicon words plus two builtin
markers: `THE`, which turns a predicate noun into a definite referent,
and `AND`, which conjoins two predicates over one shared argument.  An
application may route its argument through any of the argument word's
coercion morphisms; a shared argument takes one morphism per conjunct,
and a rigid morphism tolerates no distinct partner at the same node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Union

from .kernel import (Abs, App, Arrow, Forall, KernelError, PROP, ParseError,
                     SortRef, Term, TyApp, TypeVar, Var, alpha_equiv,
                     free_type_vars, free_vars, fresh_name, render_type,
                     subst_type, type_of)
from .lexicon import (LexEntry, Lexicon, LexiconError, Morphism, RIGID,
                      candidates, iota, poly_and)
from .logic import Formula, to_formula
from .reduction import normalize

FELICITOUS = "felicitous"
INFELICITOUS = "infelicitous"
TYPE_ERROR = "typeError"

THE_MARKER = "THE"
AND_MARKER = "AND"


class CompositionError(KernelError):
    def __init__(self, message, path=()):
        at = ".".join(str(c) for c in path) or "ε"
        super().__init__(f"at {at}: {message}")
        self.path = tuple(path)


# ---------------------------------------------------------------------------
# parse trees

@dataclass(frozen=True)
class Leaf:
    word: str

    def __str__(self):
        return self.word


@dataclass(frozen=True)
class Node:
    fun: "ParseTree"
    arg: "ParseTree"

    def __str__(self):
        return f"({self.fun} {self.arg})"


ParseTree = Union[Leaf, Node]


def parse_tree(text: str) -> ParseTree:
    """Read an s-expression; longer lists associate to the left."""
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    pos = 0

    def fail(msg, at):
        raise ParseError(msg, 1, at + 1)

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            fail("unexpected end of tree", len(text))
        tok, at = tokens[pos]
        pos += 1
        if tok == ")":
            fail("unexpected ')'", at)
        if tok != "(":
            return Leaf(tok)
        items = []
        while pos < len(tokens) and tokens[pos][0] != ")":
            items.append(expr())
        if pos >= len(tokens):
            fail("missing ')'", len(text))
        pos += 1
        if not items:
            fail("empty tree", at)
        out = items[0]
        for item in items[1:]:
            out = Node(out, item)
        return out

    tree = expr()
    if pos < len(tokens):
        fail("trailing input after tree", tokens[pos][1])
    return tree


# ---------------------------------------------------------------------------
# results

@dataclass(frozen=True)
class Reading:
    term: "Term"
    formula: Optional[Formula]
    used_morphisms: tuple = ()
    presuppositions: tuple = ()
    source: Optional["Term"] = None


@dataclass(frozen=True)
class Rejection:
    """A morphism assignment that was tried and refused, with the reason."""

    assignment: tuple
    reason: str

    def __str__(self):
        return self.reason


@dataclass(frozen=True)
class Verdict:
    status: str
    readings: tuple = ()
    rejection_log: tuple = ()
    notes: tuple = ()
    error: Optional[str] = None


# ---------------------------------------------------------------------------
# internal evaluation state

@dataclass
class _State:
    lex: Lexicon
    fuel: int
    rejections: list = field(default_factory=list)
    copred_nodes: int = 0


@dataclass(frozen=True)
class _Alt:
    term: "Term"
    entry: Optional[LexEntry] = None
    morphs: tuple = ()
    presups: tuple = ()


class _The:
    pass


class _And:
    pass


@dataclass
class _AndPartial:
    left: object  # list[_Alt] | _AndFun


@dataclass
class _AndFun:
    left: object
    right: object


_THE = _The()
_AND = _And()


def _is_marker(v) -> bool:
    return isinstance(v, (_The, _And, _AndPartial, _AndFun))


# ---------------------------------------------------------------------------
# polymorphic application

def _unify(pattern, concrete, free: set, bind: dict) -> bool:
    if isinstance(pattern, TypeVar) and pattern.name in free:
        if pattern.name in bind:
            return alpha_equiv(bind[pattern.name], concrete)
        bind[pattern.name] = concrete
        return True
    if type(pattern) is not type(concrete):
        return False
    match pattern, concrete:
        case TypeVar(v), TypeVar(w):
            return v == w
        case SortRef(a), SortRef(b):
            return a == b
        case Arrow(d1, c1), Arrow(d2, c2):
            return _unify(d1, d2, free, bind) and _unify(c1, c2, free, bind)
        case Forall(v1, b1), Forall(v2, b2):
            avoid = free | free_type_vars(b1) | free_type_vars(b2)
            joint = fresh_name("z", avoid)
            return _unify(subst_type(b1, v1, TypeVar(joint)),
                          subst_type(b2, v2, TypeVar(joint)),
                          free, bind)
    return False


def _match_forall(fun_type, arg_type):
    """Instantiations making a quantified function accept the argument.

    Peels the leading quantifiers, unifies the domain against the
    argument type, and returns the instantiation list, or None.  Every
    peeled variable must be determined by the match.
    """
    peeled = []
    core = fun_type
    while isinstance(core, Forall):
        peeled.append(core.var)
        core = core.body
    if not isinstance(core, Arrow):
        return None
    bind: dict = {}
    if not _unify(core.domain, arg_type, set(peeled), bind):
        return None
    if set(bind) != set(peeled):
        return None
    return [bind[v] for v in peeled]


def apply_with_coercion(fun_term, arg_term, arg_entry=None):
    """All ways to apply a functor to an argument.

    Returns `(term, morphism)` pairs: a direct application carries no
    morphism; on a type mismatch each of the argument entry's fitting
    morphisms yields one candidate.  An empty list means nothing fits.
    Coercion happens on the argument side only; a quantified functor is
    instantiated to match and admits no coercion.
    """
    fty = type_of(fun_term)
    aty = type_of(arg_term)
    if isinstance(fty, Forall):
        inst = _match_forall(fty, aty)
        if inst is None:
            return []
        t = fun_term
        for ty in inst:
            t = TyApp(t, ty)
        return [(App(t, arg_term), None)]
    if not isinstance(fty, Arrow):
        raise CompositionError(f"{render_type(fty)} is not a function type")
    if alpha_equiv(aty, fty.domain):
        return [(App(fun_term, arg_term), None)]
    if arg_entry is None:
        return []
    try:
        ms = candidates(arg_entry, aty, fty.domain)
    except LexiconError:
        return []
    return [(App(fun_term, App(m.term, arg_term)), m) for m in ms]


# ---------------------------------------------------------------------------
# node semantics

def _leaf(leaf: Leaf, path, st: _State):
    if leaf.word == THE_MARKER:
        return _THE
    if leaf.word == AND_MARKER:
        return _AND
    try:
        entry = st.lex.entry(leaf.word)
    except LexiconError as err:
        raise CompositionError(str(err), path) from err
    return [_Alt(entry.principal, entry)]


def _apply_node(funs, args, path):
    if not funs or not args:
        return []
    out = []
    failure = None
    for f, a in product(funs, args):
        try:
            apps = apply_with_coercion(f.term, a.term, a.entry)
        except CompositionError as err:
            apps = []
            if failure is None:
                failure = str(err)
        if not apps and failure is None:
            failure = (f"cannot apply {render_type(type_of(f.term))}"
                       f" to {render_type(type_of(a.term))}")
        for term, m in apps:
            morphs = f.morphs + a.morphs
            if m is not None:
                morphs += ((a.entry.word, path + (1,), m.name),)
            out.append(_Alt(term, None, morphs, f.presups + a.presups))
    if not out:
        raise CompositionError(failure, path)
    return out


def _the_node(nouns, path, st: _State):
    if not nouns:
        return []
    out = []
    failure = None
    for alt in nouns:
        ty = type_of(alt.term)
        if not (isinstance(ty, Arrow) and ty.codomain == PROP):
            if failure is None:
                failure = (f"{THE_MARKER} needs a predicate,"
                           f" got {render_type(ty)}")
            continue
        term, presup = iota(ty.domain, alt.term, fuel=st.fuel)
        out.append(_Alt(term, alt.entry, alt.morphs,
                        alt.presups + (presup,)))
    if not out:
        raise CompositionError(failure or "nothing under THE", path)
    return out


def _conjunct_alts(side, xi, entry, arg_path, path, st: _State):
    """A conjunct as (predicate, sort, morphisms, presuppositions) tuples.

    A nested conjunction is resolved here at the shared referent type,
    so the enclosing node sees it as a predicate over that type with
    its own morphism choices already made.  The second result is a type
    failure message when the conjunct cannot be a predicate at all.
    """
    if isinstance(side, _AndFun):
        y = fresh_name("y", set(st.lex.context.constants))
        shared = _Alt(Var(y, xi), entry)
        inner = _copred_alts(side, [shared], path, arg_path, st)
        return ([(Abs(y, xi, a.term), xi, a.morphs, a.presups)
                 for a in inner], None)
    out = []
    failure = None
    for alt in side:
        ty = type_of(alt.term)
        if isinstance(ty, Arrow) and ty.codomain == PROP:
            out.append((alt.term, ty.domain, alt.morphs, alt.presups))
        elif failure is None:
            failure = (f"a conjunct must be a one-place predicate,"
                       f" got {render_type(ty)}")
    if not out and side:
        return [], failure
    return out, None


def _pair_ok(f: Morphism, g: Morphism) -> bool:
    if f.name == g.name:
        return True
    return f.rigidity != RIGID and g.rigidity != RIGID


def _rejected(f: Morphism, g: Morphism) -> Rejection:
    rigid, other = (f, g) if f.rigidity == RIGID else (g, f)
    return Rejection((f.name, g.name),
                     f"rigid {rigid.name} excludes {other.name}")


def _copred_pairs(entry, xi, alpha, beta, rejections: list):
    """Admissible morphism pairs routing one referent to two sorts."""
    def side(target):
        try:
            ms = candidates(entry, xi, target)
        except LexiconError as err:
            rejections.append(Rejection((), str(err)))
            return []
        if not ms:
            rejections.append(Rejection(
                (), f"'{entry.word}' has no morphism from {render_type(xi)}"
                    f" to {render_type(target)}"))
        return ms
    fs = side(alpha)
    gs = side(beta)
    out = []
    for f, g in product(fs, gs):
        if _pair_ok(f, g):
            out.append((f, g))
        else:
            rejections.append(_rejected(f, g))
    return out


def _copred_term(left, right, shared, xi, alpha, beta, f, g):
    t = TyApp(TyApp(poly_and(), alpha), beta)
    t = App(App(t, left), right)
    t = App(TyApp(t, xi), shared)
    return App(App(t, f.term), g.term)


def resolve_copredication(left, right, shared, entry, fuel: int = 10000):
    """Conjoin two predicates over one shared argument.

    Returns one Reading per admissible morphism pair; an empty list
    means rigidity or a missing morphism ruled every pair out.
    """
    lty = type_of(left)
    rty = type_of(right)
    for ty in (lty, rty):
        if not (isinstance(ty, Arrow) and ty.codomain == PROP):
            raise CompositionError(
                f"a conjunct must be a one-place predicate,"
                f" got {render_type(ty)}")
    xi = type_of(shared)
    pairs = _copred_pairs(entry, xi, lty.domain, rty.domain, [])
    out = []
    for f, g in pairs:
        raw = _copred_term(left, right, shared, xi, lty.domain, rty.domain,
                           f, g)
        nf, _ = normalize(raw, fuel=fuel)
        formula = None
        if type_of(nf) == PROP and not free_vars(nf):
            formula = to_formula(nf)
        recs = ((entry.word, (), f.name), (entry.word, (), g.name))
        out.append(Reading(nf, formula, recs, (), raw))
    return out


def _copred_alts(fun: _AndFun, args, path, arg_path, st: _State):
    st.copred_nodes += 1
    out = []
    for arg in args:
        if arg.entry is None:
            raise CompositionError(
                "a shared argument must carry a lexical entry", path)
        xi = type_of(arg.term)
        lefts, lfail = _conjunct_alts(fun.left, xi, arg.entry,
                                      arg_path, path, st)
        rights, rfail = _conjunct_alts(fun.right, xi, arg.entry,
                                       arg_path, path, st)
        if lfail or rfail:
            raise CompositionError(lfail or rfail, path)
        for (lt, la, lm, lp), (rt, ra, rm, rp) in product(lefts, rights):
            pairs = _copred_pairs(arg.entry, xi, la, ra, st.rejections)
            for f, g in pairs:
                term = _copred_term(lt, rt, arg.term, xi, la, ra, f, g)
                recs = (lm + rm + arg.morphs
                        + ((arg.entry.word, tuple(arg_path), f.name),
                           (arg.entry.word, tuple(arg_path), g.name)))
                out.append(_Alt(term, None, recs,
                                lp + rp + arg.presups))
    return out


def _node(tree, path, st: _State):
    if isinstance(tree, Leaf):
        return _leaf(tree, path, st)
    lv = _node(tree.fun, path + (0,), st)
    rv = _node(tree.arg, path + (1,), st)
    if isinstance(lv, _The):
        if _is_marker(rv):
            raise CompositionError(f"{THE_MARKER} needs a noun", path)
        return _the_node(rv, path, st)
    if isinstance(lv, _And):
        if isinstance(rv, (_The, _And, _AndPartial)):
            raise CompositionError(f"{AND_MARKER} needs a predicate", path)
        return _AndPartial(rv)
    if isinstance(lv, _AndPartial):
        if isinstance(rv, (_The, _And, _AndPartial)):
            raise CompositionError(f"{AND_MARKER} needs a predicate", path)
        return _AndFun(lv.left, rv)
    if isinstance(lv, _AndFun):
        if _is_marker(rv):
            raise CompositionError("a conjunction needs a term argument", path)
        return _copred_alts(lv, rv, path, path + (1,), st)
    if _is_marker(rv):
        raise CompositionError("a marker cannot be an argument", path)
    return _apply_node(lv, rv, path)


def _finish(alts, st: _State):
    readings = []
    seen = []
    for alt in alts:
        nf, _ = normalize(alt.term, fuel=st.fuel)
        if any(alpha_equiv(nf, other) for other in seen):
            continue
        seen.append(nf)
        formula = None
        if type_of(nf) == PROP and not free_vars(nf):
            formula = to_formula(nf)
        readings.append(Reading(nf, formula, alt.morphs, alt.presups,
                                alt.term))
    return readings


def _run(tree, lex, fuel):
    st = _State(lex, fuel)
    value = _node(tree, (), st)
    if _is_marker(value):
        raise CompositionError("the tree is an unapplied marker")
    return _finish(value, st), st


def compose(tree: ParseTree, lex: Lexicon, fuel: int = 10000):
    """All readings of a tree, deduplicated up to alpha-equivalence.

    Raises CompositionError when the tree cannot be typed at all; an
    empty result means every candidate reading was rejected.
    """
    readings, _ = _run(tree, lex, fuel)
    return readings


def felicity(tree: ParseTree, lex: Lexicon, fuel: int = 10000) -> Verdict:
    """Judge a tree: felicitous, infelicitous, or a type error."""
    try:
        readings, st = _run(tree, lex, fuel)
    except KernelError as err:
        return Verdict(TYPE_ERROR, error=str(err))
    notes = ()
    if st.copred_nodes > 1:
        notes = ("rigidity applies within each conjunction node separately",)
    if readings:
        return Verdict(FELICITOUS, tuple(readings),
                       tuple(st.rejections), notes)
    if st.rejections:
        return Verdict(INFELICITOUS, (), tuple(st.rejections), notes)
    return Verdict(TYPE_ERROR, (), (), notes, error="no readings")
