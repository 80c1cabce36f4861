"""The logical signature and the view of normal terms as many-sorted
formulae.

The signature provides binary connectives over `t`, polymorphic
quantifiers, and a polymorphic choice operator.  A closed normal term of
type `t` built over it converts to a Formula; the converse direction
rebuilds a term, so eta-long formulae round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .kernel import (Abs, App, Arrow, Const, Context, Forall, KernelError,
                     PROP, SortRef, Term, TyApp, Type, TypeVar, Var,
                     alpha_equiv, free_vars, fresh_name, render_term,
                     render_type, type_of)
from .reduction import find_redexes

AND_NAME = "&"
OR_NAME = "|"
IMPLIES_NAME = "=>"
EXISTS_NAME = "exists"
FORALL_NAME = "forall"
IOTA_NAME = "iota"

_CONNECTIVES = (AND_NAME, OR_NAME, IMPLIES_NAME)
_QUANTIFIERS = (EXISTS_NAME, FORALL_NAME)


class LogicError(KernelError):
    pass


def connective_type() -> Type:
    return Arrow(PROP, Arrow(PROP, PROP))


def quantifier_type() -> Type:
    return Forall("a", Arrow(Arrow(TypeVar("a"), PROP), PROP))


def choice_type() -> Type:
    """The choice operator turns a predicate into one of its witnesses."""
    return Forall("a", Arrow(Arrow(TypeVar("a"), PROP), TypeVar("a")))


def logical_constants() -> dict:
    conn = connective_type()
    quant = quantifier_type()
    return {
        AND_NAME: conn,
        OR_NAME: conn,
        IMPLIES_NAME: conn,
        EXISTS_NAME: quant,
        FORALL_NAME: quant,
        IOTA_NAME: choice_type(),
    }


def logical_signature(sorts) -> Context:
    """A context holding the six logical constants over the given sorts."""
    if isinstance(sorts, Context):
        names = set(sorts.sorts)
    elif isinstance(sorts, dict):
        names = set(sorts)
    else:
        names = {getattr(s, "name", s) for s in sorts}
    if "t" not in names:
        raise LogicError("the proposition sort 't' must be declared")
    return Context(sorts=names, constants=logical_constants())


# ---------------------------------------------------------------------------
# formulae

@dataclass(frozen=True)
class ConstRef:
    name: str


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class Description:
    """A choice-operator description: the `pred` such that iota[sort](pred)."""

    sort: "Type"
    pred: "Term"


@dataclass(frozen=True)
class Applied:
    fun: "Ref"
    args: tuple


@dataclass(frozen=True)
class TermRef:
    """Fallback for higher-order arguments with no first-order shape."""

    term: "Term"


Ref = Union[ConstRef, VarRef, Description, Applied, TermRef]


@dataclass(frozen=True)
class Atom:
    pred: "Ref"
    args: tuple

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Quant:
    kind: str  # "exists" | "forall"
    var: str
    sort: "Type"
    body: "Formula"

    def __str__(self):
        return render_formula(self)


Formula = Union[Atom, And, Or, Implies, Quant]

_BINARY = {AND_NAME: And, OR_NAME: Or, IMPLIES_NAME: Implies}


# ---------------------------------------------------------------------------
# term -> formula

def to_formula(term) -> Formula:
    """Read a closed normal term of type `t` as a formula.

    A quantifier applied to a non-abstraction is eta-expanded on the fly;
    no eta step is ever applied to the term itself.
    """
    fv = free_vars(term)
    if fv:
        name = next(iter(fv))
        raise LogicError(f"term is open: free variable '{name}'")
    ty = type_of(term)
    if ty != PROP:
        raise LogicError(f"term has type {render_type(ty)}, expected t")
    if find_redexes(term):
        raise LogicError("term is not in normal form")
    return _formula(term)


def _spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, list(reversed(args))


def _formula(t):
    match t:
        case App(App(Const(name, _), a), b) if name in _CONNECTIVES:
            return _BINARY[name](_formula(a), _formula(b))
        case App(TyApp(Const(name, _), sort), p) if name in _QUANTIFIERS:
            if isinstance(p, Abs):
                return Quant(name, p.var, sort, _formula(p.body))
            x = fresh_name("x", set(free_vars(p)))
            return Quant(name, x, sort, _formula(App(p, Var(x, sort))))
    head, args = _spine(t)
    return Atom(_head_ref(head, args), tuple(_ref(a) for a in _tail(head, args)))


def _is_iota_head(head):
    return (isinstance(head, TyApp) and isinstance(head.fun, Const)
            and head.fun.name == IOTA_NAME)


def _head_ref(head, args):
    if _is_iota_head(head) and args:
        return Description(head.arg_type, args[0])
    if isinstance(head, (Var, Const)):
        return _ref(head)
    return TermRef(head)


def _tail(head, args):
    return args[1:] if _is_iota_head(head) and args else args


def _ref(t):
    match t:
        case Var(n, _):
            return VarRef(n)
        case Const(n, _):
            return ConstRef(n)
    head, args = _spine(t)
    if _is_iota_head(head) and args:
        desc = Description(head.arg_type, args[0])
        rest = args[1:]
        if not rest:
            return desc
        return Applied(desc, tuple(_ref(a) for a in rest))
    if isinstance(head, (Var, Const)) and args:
        return Applied(_ref(head), tuple(_ref(a) for a in args))
    return TermRef(t)


# ---------------------------------------------------------------------------
# formula -> term

def formula_to_term(f, ctx: Context):
    """Rebuild a term from a formula; constants take their types from `ctx`."""
    return _to_term(f, ctx, {})


def _to_term(f, ctx, env):
    match f:
        case And(l, r):
            op = Const(AND_NAME, connective_type())
        case Or(l, r):
            op = Const(OR_NAME, connective_type())
        case Implies(l, r):
            op = Const(IMPLIES_NAME, connective_type())
        case Quant(kind, var, sort, body):
            inner = dict(env)
            inner[var] = sort
            pred = Abs(var, sort, _to_term(body, ctx, inner))
            return App(TyApp(Const(kind, quantifier_type()), sort), pred)
        case Atom(pred, args):
            t = _ref_term(pred, ctx, env)
            for a in args:
                t = App(t, _ref_term(a, ctx, env))
            return t
        case _:
            raise LogicError(f"not a formula: {f!r}")
    return App(App(op, _to_term(l, ctx, env)), _to_term(r, ctx, env))


def _ref_term(r, ctx, env):
    match r:
        case VarRef(n):
            if n not in env:
                raise LogicError(f"unbound variable '{n}' in formula")
            return Var(n, env[n])
        case ConstRef(n):
            if n not in ctx.constants:
                raise LogicError(f"unknown constant '#{n}' in formula")
            return Const(n, ctx.constants[n])
        case Description(sort, pred):
            return App(TyApp(Const(IOTA_NAME, choice_type()), sort), pred)
        case Applied(fun, args):
            t = _ref_term(fun, ctx, env)
            for a in args:
                t = App(t, _ref_term(a, ctx, env))
            return t
        case TermRef(t):
            return t
    raise LogicError(f"not a term reference: {r!r}")


# ---------------------------------------------------------------------------
# rendering

_PREC_QUANT, _PREC_IMPLIES, _PREC_OR, _PREC_AND = 0, 1, 2, 3

_SYMBOLS = {
    "ascii": {"and": "&", "or": "|", "implies": "=>",
              "exists": "exists ", "forall": "forall ", "iota": "iota"},
    "unicode": {"and": "∧", "or": "∨", "implies": "⇒",
                "exists": "∃", "forall": "∀", "iota": "ι"},
}


def render_formula(f, style: str = "ascii") -> str:
    """Pretty-print with minimal parentheses.

    Quantifiers bind weakest, then implication, disjunction, conjunction.
    Binders shadowing an enclosing binder are renamed first so every
    rendered quantifier has a distinct name in its scope.
    """
    if style not in _SYMBOLS:
        raise ValueError(f"unknown style {style!r}")
    return _render(_freshen(f, frozenset()), _PREC_QUANT, _SYMBOLS[style], style)


def _formula_names(f) -> set:
    match f:
        case Atom(pred, args):
            out = set()
            for r in (pred,) + args:
                out |= _ref_names(r)
            return out
        case And(l, r) | Or(l, r) | Implies(l, r):
            return _formula_names(l) | _formula_names(r)
        case Quant(_, var, _, body):
            return {var} | _formula_names(body)
    return set()


def _ref_names(r) -> set:
    match r:
        case VarRef(n) | ConstRef(n):
            return {n}
        case Applied(fun, args):
            out = _ref_names(fun)
            for a in args:
                out |= _ref_names(a)
            return out
    return set()


def _freshen(f, scope):
    match f:
        case Quant(kind, var, sort, body):
            if var in scope:
                new = fresh_name(var, scope | _formula_names(body))
                body = _rename(body, var, new)
                var = new
            return Quant(kind, var, sort, _freshen(body, scope | {var}))
        case And(l, r):
            return And(_freshen(l, scope), _freshen(r, scope))
        case Or(l, r):
            return Or(_freshen(l, scope), _freshen(r, scope))
        case Implies(l, r):
            return Implies(_freshen(l, scope), _freshen(r, scope))
    return f


def _rename(f, old, new):
    match f:
        case Quant(kind, var, sort, body):
            if var == old:
                return f
            return Quant(kind, var, sort, _rename(body, old, new))
        case And(l, r):
            return And(_rename(l, old, new), _rename(r, old, new))
        case Or(l, r):
            return Or(_rename(l, old, new), _rename(r, old, new))
        case Implies(l, r):
            return Implies(_rename(l, old, new), _rename(r, old, new))
        case Atom(pred, args):
            return Atom(_rename_ref(pred, old, new),
                        tuple(_rename_ref(a, old, new) for a in args))
    return f


def _rename_ref(r, old, new):
    match r:
        case VarRef(n):
            return VarRef(new) if n == old else r
        case Applied(fun, args):
            return Applied(_rename_ref(fun, old, new),
                           tuple(_rename_ref(a, old, new) for a in args))
    return r


def _render(f, prec, sym, style):
    match f:
        case Quant(kind, var, sort, body):
            s = (f"{sym[kind]}{var}:{_sort_text(sort, style)}. "
                 f"{_render(body, _PREC_QUANT, sym, style)}")
            return f"({s})" if prec > _PREC_QUANT else s
        case Implies(l, r):
            s = (f"{_render(l, _PREC_OR, sym, style)} {sym['implies']} "
                 f"{_render(r, _PREC_IMPLIES, sym, style)}")
            return f"({s})" if prec > _PREC_IMPLIES else s
        case Or(l, r):
            s = (f"{_render(l, _PREC_OR, sym, style)} {sym['or']} "
                 f"{_render(r, _PREC_AND, sym, style)}")
            return f"({s})" if prec > _PREC_OR else s
        case And(l, r):
            s = (f"{_render(l, _PREC_AND, sym, style)} {sym['and']} "
                 f"{_render(r, _PREC_AND + 1, sym, style)}")
            return f"({s})" if prec > _PREC_AND else s
        case Atom(pred, args):
            head = _render_ref(pred, sym, style)
            if not args:
                return head
            return f"{head}({', '.join(_render_ref(a, sym, style) for a in args)})"
    raise LogicError(f"not a formula: {f!r}")


def _sort_text(sort, style):
    s = render_type(sort, style)
    if not isinstance(sort, (SortRef, TypeVar)):
        s = f"({s})"
    return s


def _render_ref(r, sym, style):
    match r:
        case VarRef(n) | ConstRef(n):
            return n
        case Description(sort, pred):
            return f"{sym['iota']}[{render_type(sort, style)}]({_pred_text(pred, sym, style)})"
        case Applied(fun, args):
            inner = ", ".join(_render_ref(a, sym, style) for a in args)
            return f"{_render_ref(fun, sym, style)}({inner})"
        case TermRef(t):
            return render_term(t, style)
    raise LogicError(f"not a term reference: {r!r}")


def _eta_head(pred) -> Optional[str]:
    """Name of the predicate when it is one, or an eta-expansion of one."""
    match pred:
        case Const(n, _) | Var(n, _):
            return n
        case Abs(x, _, App(Const(n, _) as h, Var(y, _))) if x == y:
            return n
        case Abs(x, _, App(Var(n, _), Var(y, _))) if x == y and n != x:
            return n
    return None


def _pred_text(pred, sym, style):
    name = _eta_head(pred)
    if name is not None:
        return name
    if isinstance(pred, Abs):
        try:
            body = _render(_formula(pred.body), _PREC_QUANT, sym, style)
            return f"{pred.var}. {body}"
        except KernelError:
            pass
    return render_term(pred, style)
