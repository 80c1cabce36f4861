"""Core calculus: many-sorted types, Church-style second-order terms,
typing, substitution and alpha-equivalence.

Concrete ASCII syntax (also produced by the ``ascii`` renderers, so terms
and types round-trip through the parsers):

    types   T ::= sort | 'a | T -> T          arrows associate right
                | Pi 'a. T                    binds as far right as possible
    terms   u ::= x | #c | u u                application associates left
                | u{T}                        type application
                | lam x:T. u | Lam 'a. u

Every binder and every constant carries its type, so a term determines its
type without inference.  All values are immutable and every function here
is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union


class KernelError(Exception):
    """Base class for errors raised by the calculus."""


class ParseError(KernelError):
    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)
        self.line = line
        self.col = col


class TypingError(KernelError):
    """A term violates the typing rules."""


# ---------------------------------------------------------------------------
# types

@dataclass(frozen=True)
class Sort:
    """A declared base type: propositions `t` or an individual sort."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class SortRef:
    name: str

    def __str__(self):
        return render_type(self)


@dataclass(frozen=True)
class TypeVar:
    name: str

    def __str__(self):
        return render_type(self)


@dataclass(frozen=True)
class Arrow:
    domain: "Type"
    codomain: "Type"

    def __str__(self):
        return render_type(self)


@dataclass(frozen=True)
class Forall:
    """Second-order quantification; the bound variable may be vacuous."""

    var: str
    body: "Type"

    def __str__(self):
        return render_type(self)


Type = Union[SortRef, TypeVar, Arrow, Forall]

PROP = SortRef("t")


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str
    type: "Type"

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class Const:
    name: str
    type: "Type"

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class Abs:
    var: str
    var_type: "Type"
    body: "Term"

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class TyApp:
    fun: "Term"
    arg_type: "Type"

    def __str__(self):
        return render_term(self)


@dataclass(frozen=True)
class TyAbs:
    var: str
    body: "Term"

    def __str__(self):
        return render_term(self)


Term = Union[Var, Const, App, Abs, TyApp, TyAbs]


def is_type(x) -> bool:
    return isinstance(x, (SortRef, TypeVar, Arrow, Forall))


def is_term(x) -> bool:
    return isinstance(x, (Var, Const, App, Abs, TyApp, TyAbs))


# ---------------------------------------------------------------------------
# contexts

def _check_sorts(ty, sorts, what):
    match ty:
        case SortRef(name):
            if name not in sorts:
                raise TypingError(f"unknown sort '{name}' in {what}")
        case TypeVar(_):
            pass
        case Arrow(d, c):
            _check_sorts(d, sorts, what)
            _check_sorts(c, sorts, what)
        case Forall(_, b):
            _check_sorts(b, sorts, what)


class Context:
    """Declared sorts plus typed constants and typed free variables.

    Constants and variables live in disjoint namespaces (the syntax already
    separates them: constants are written `#c`).  The proposition sort `t`
    is always present.
    """

    def __init__(self, sorts=(), constants=None, variables=None):
        self.sorts: dict[str, Sort] = {}
        for s in sorts:
            name = s.name if isinstance(s, Sort) else str(s)
            self.sorts[name] = Sort(name)
        self.sorts.setdefault("t", Sort("t"))
        self.constants: dict[str, Type] = dict(constants or {})
        self.variables: dict[str, Type] = dict(variables or {})
        clash = self.constants.keys() & self.variables.keys()
        if clash:
            raise TypingError(
                f"names used both as constant and as variable: {sorted(clash)}")
        for name, ty in self.constants.items():
            _check_sorts(ty, self.sorts, f"the type of constant '#{name}'")
        for name, ty in self.variables.items():
            _check_sorts(ty, self.sorts, f"the type of variable '{name}'")

    def __repr__(self):
        return (f"Context(sorts={sorted(self.sorts)}, "
                f"constants={len(self.constants)}, variables={len(self.variables)})")


# ---------------------------------------------------------------------------
# free variables

def free_vars(term) -> dict:
    """Free term variables of a term, mapped to their annotated types."""
    out: dict[str, Type] = {}

    def go(t, bound):
        match t:
            case Var(name, ty):
                if name not in bound:
                    out.setdefault(name, ty)
            case Const(_, _):
                pass
            case App(f, a):
                go(f, bound)
                go(a, bound)
            case Abs(x, _, b):
                go(b, bound | {x})
            case TyApp(f, _):
                go(f, bound)
            case TyAbs(_, b):
                go(b, bound)

    go(term, frozenset())
    return out


def free_type_vars(target) -> set:
    """Free type variables of a type, or of a term's type annotations."""
    if is_type(target):
        match target:
            case SortRef(_):
                return set()
            case TypeVar(n):
                return {n}
            case Arrow(d, c):
                return free_type_vars(d) | free_type_vars(c)
            case Forall(v, b):
                return free_type_vars(b) - {v}
    match target:
        case Var(_, ty) | Const(_, ty):
            return free_type_vars(ty)
        case App(f, a):
            return free_type_vars(f) | free_type_vars(a)
        case Abs(_, ty, b):
            return free_type_vars(ty) | free_type_vars(b)
        case TyApp(f, ty):
            return free_type_vars(f) | free_type_vars(ty)
        case TyAbs(v, b):
            return free_type_vars(b) - {v}
    raise KernelError(f"not a type or term: {target!r}")


def fresh_name(base: str, avoid) -> str:
    """Smallest `base`, `base1`, `base2`, ... not contained in `avoid`."""
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


# ---------------------------------------------------------------------------
# alpha-equivalence

def _env_match(env, na, nb):
    for pa, pb in reversed(env):
        if pa == na or pb == nb:
            return pa == na and pb == nb
    return na == nb


def _aeq_type(a, b, tenv):
    match (a, b):
        case (SortRef(x), SortRef(y)):
            return x == y
        case (TypeVar(x), TypeVar(y)):
            return _env_match(tenv, x, y)
        case (Arrow(d1, c1), Arrow(d2, c2)):
            return _aeq_type(d1, d2, tenv) and _aeq_type(c1, c2, tenv)
        case (Forall(v1, b1), Forall(v2, b2)):
            return _aeq_type(b1, b2, tenv + ((v1, v2),))
    return False


def _aeq_term(a, b, venv, tenv):
    match (a, b):
        case (Var(x, tx), Var(y, ty)):
            return _env_match(venv, x, y) and _aeq_type(tx, ty, tenv)
        case (Const(c, tc), Const(d, td)):
            return c == d and _aeq_type(tc, td, tenv)
        case (App(f1, a1), App(f2, a2)):
            return _aeq_term(f1, f2, venv, tenv) and _aeq_term(a1, a2, venv, tenv)
        case (Abs(x, tx, b1), Abs(y, ty, b2)):
            return (_aeq_type(tx, ty, tenv)
                    and _aeq_term(b1, b2, venv + ((x, y),), tenv))
        case (TyApp(f1, t1), TyApp(f2, t2)):
            return _aeq_term(f1, f2, venv, tenv) and _aeq_type(t1, t2, tenv)
        case (TyAbs(v1, b1), TyAbs(v2, b2)):
            return _aeq_term(b1, b2, venv, tenv + ((v1, v2),))
    return False


def alpha_equiv(a, b) -> bool:
    """True iff `a` and `b` are identical up to consistent renaming of bound
    term and type variables.  Both arguments must be of the same kind."""
    if is_type(a) and is_type(b):
        return _aeq_type(a, b, ())
    if is_term(a) and is_term(b):
        return _aeq_term(a, b, (), ())
    return False


# ---------------------------------------------------------------------------
# substitution

def subst_type(target, tyvar: str, replacement):
    """Capture-avoiding substitution of a type for a type variable.

    Works on types and on terms; on terms it rewrites the type annotations
    of variables, constants, abstractions and type applications.
    """
    if is_type(target):
        return _subst_ty(target, tyvar, replacement)
    return _subst_ty_term(target, tyvar, replacement)


def _subst_ty(ty, a, rep):
    match ty:
        case SortRef(_):
            return ty
        case TypeVar(n):
            return rep if n == a else ty
        case Arrow(d, c):
            return Arrow(_subst_ty(d, a, rep), _subst_ty(c, a, rep))
        case Forall(v, b):
            if v == a:
                return ty
            if v in free_type_vars(rep) and a in free_type_vars(b):
                v1 = fresh_name(v, free_type_vars(rep) | free_type_vars(b) | {a})
                b = _subst_ty(b, v, TypeVar(v1))
                return Forall(v1, _subst_ty(b, a, rep))
            return Forall(v, _subst_ty(b, a, rep))
    raise KernelError(f"not a type: {ty!r}")


def _subst_ty_term(t, a, rep):
    match t:
        case Var(n, ty):
            return Var(n, _subst_ty(ty, a, rep))
        case Const(n, ty):
            return Const(n, _subst_ty(ty, a, rep))
        case App(f, x):
            return App(_subst_ty_term(f, a, rep), _subst_ty_term(x, a, rep))
        case Abs(x, ty, b):
            return Abs(x, _subst_ty(ty, a, rep), _subst_ty_term(b, a, rep))
        case TyApp(f, ty):
            return TyApp(_subst_ty_term(f, a, rep), _subst_ty(ty, a, rep))
        case TyAbs(v, b):
            if v == a:
                return t
            if v in free_type_vars(rep) and a in free_type_vars(b):
                v1 = fresh_name(v, free_type_vars(rep) | free_type_vars(b) | {a})
                b = _subst_ty_term(b, v, TypeVar(v1))
                return TyAbs(v1, _subst_ty_term(b, a, rep))
            return TyAbs(v, _subst_ty_term(b, a, rep))
    raise KernelError(f"not a term: {t!r}")


def subst_term(body, var: str, value, var_type=None):
    """Capture-avoiding substitution of `value` for free occurrences of `var`.

    The value's type must agree with the type at which `var` occurs (or with
    `var_type` when given explicitly); bound variables and bound type
    variables are renamed as needed.
    """
    expected = var_type
    if expected is None:
        expected = free_vars(body).get(var)
    if expected is not None:
        actual = type_of(value)
        if not alpha_equiv(actual, expected):
            raise TypingError(
                f"cannot substitute a term of type {actual} for '{var}' of type {expected}")
    return _subst(body, var, value, set(free_vars(value)), free_type_vars(value))


def _subst(t, x, v, v_fvs, v_ftvs):
    match t:
        case Var(n, _):
            return v if n == x else t
        case Const(_, _):
            return t
        case App(f, a):
            return App(_subst(f, x, v, v_fvs, v_ftvs), _subst(a, x, v, v_fvs, v_ftvs))
        case Abs(y, ty, b):
            if y == x:
                return t
            if y in v_fvs and x in free_vars(b):
                y1 = fresh_name(y, v_fvs | set(free_vars(b)) | {x})
                b = _subst(b, y, Var(y1, ty), {y1}, set())
                return Abs(y1, ty, _subst(b, x, v, v_fvs, v_ftvs))
            return Abs(y, ty, _subst(b, x, v, v_fvs, v_ftvs))
        case TyApp(f, ty):
            return TyApp(_subst(f, x, v, v_fvs, v_ftvs), ty)
        case TyAbs(a, b):
            if a in v_ftvs and x in free_vars(b):
                a1 = fresh_name(a, v_ftvs | free_type_vars(b))
                b = _subst_ty_term(b, a, TypeVar(a1))
                return TyAbs(a1, _subst(b, x, v, v_fvs, v_ftvs))
            return TyAbs(a, _subst(b, x, v, v_fvs, v_ftvs))
    raise KernelError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# typing

def type_of(term, ctx: Optional[Context] = None):
    """The unique type of a Church-annotated term.

    With a context, free variables and constants must be declared there and
    annotations must agree with the declarations; without one, leaf
    annotations are trusted.  Raises TypingError on any rule violation,
    including the side condition on type abstraction.
    """
    return _type_of(term, ctx, {}, {})


def _type_of(t, ctx, bound, free_seen):
    match t:
        case Var(name, ty):
            if name in bound:
                if not alpha_equiv(ty, bound[name]):
                    raise TypingError(
                        f"variable '{name}' is annotated {ty} but bound at {bound[name]}")
                return ty
            if ctx is not None:
                declared = ctx.variables.get(name)
                if declared is None:
                    raise TypingError(f"unbound variable '{name}'")
                if not alpha_equiv(ty, declared):
                    raise TypingError(
                        f"variable '{name}' is annotated {ty} but declared {declared}")
            seen = free_seen.setdefault(name, ty)
            if not alpha_equiv(seen, ty):
                raise TypingError(
                    f"free variable '{name}' occurs at both {seen} and {ty}")
            return ty
        case Const(name, ty):
            if ctx is not None:
                declared = ctx.constants.get(name)
                if declared is None:
                    raise TypingError(f"unknown constant '#{name}'")
                if not alpha_equiv(ty, declared):
                    raise TypingError(
                        f"constant '#{name}' is annotated {ty} but declared {declared}")
            return ty
        case App(fun, arg):
            fun_ty = _type_of(fun, ctx, bound, free_seen)
            arg_ty = _type_of(arg, ctx, bound, free_seen)
            if not isinstance(fun_ty, Arrow):
                raise TypingError(f"cannot apply a term of type {fun_ty}")
            if not alpha_equiv(fun_ty.domain, arg_ty):
                raise TypingError(
                    f"application mismatch: function expects {fun_ty.domain}, "
                    f"argument has type {arg_ty}")
            return fun_ty.codomain
        case Abs(var, var_type, body):
            if ctx is not None:
                _check_sorts(var_type, ctx.sorts, f"the binder '{var}'")
            inner = dict(bound)
            inner[var] = var_type
            return Arrow(var_type, _type_of(body, ctx, inner, free_seen))
        case TyApp(fun, arg_type):
            fun_ty = _type_of(fun, ctx, bound, free_seen)
            if not isinstance(fun_ty, Forall):
                raise TypingError(f"cannot type-apply a term of type {fun_ty}")
            if ctx is not None:
                _check_sorts(arg_type, ctx.sorts, "a type argument")
            return subst_type(fun_ty.body, fun_ty.var, arg_type)
        case TyAbs(var, body):
            body_ty = _type_of(body, ctx, bound, free_seen)
            for name, vty in free_vars(body).items():
                if var in free_type_vars(vty):
                    raise TypingError(
                        f"cannot generalize over '{var}': it occurs free in the "
                        f"type of free variable '{name}'")
            return Forall(var, body_ty)
    raise TypingError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# concrete syntax

_TOKEN_RE = re.compile(
    r"(?P<const>#(?:[A-Za-z_][A-Za-z0-9_]*|&|\||=>))"
    r"|(?P<tyvar>'[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<arrow>->)"
    r"|(?P<lparen>\()|(?P<rparen>\))|(?P<lbrace>\{)|(?P<rbrace>\})"
    r"|(?P<dot>\.)|(?P<colon>:)"
)

_KEYWORDS = ("lam", "Lam", "Pi")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text):
    toks = []
    i, line, col = 0, 1, 1
    while i < len(text):
        c = text[i]
        if c in " \t\r\n":
            if c == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {c!r}", line, col)
        toks.append(_Tok(m.lastgroup, m.group(), line, col))
        col += m.end() - i
        i = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text, sorts, constants=None, variables=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.sorts = sorts
        self.constants = constants or {}
        self.variables = variables or {}
        self.bound = []

    def peek(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        tok = self.peek()
        found = repr(tok.text) if tok.text else "end of input"
        raise ParseError(f"{message}, found {found}", tok.line, tok.col)

    def expect(self, kind, message):
        if self.peek().kind != kind:
            self.fail(message)
        return self.advance()

    def expect_eof(self):
        if self.peek().kind != "eof":
            self.fail("unexpected trailing input")

    # -- types

    def type_(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "Pi":
            self.advance()
            v = self.expect("tyvar", "expected a type variable after 'Pi'")
            self.expect("dot", "expected '.' after the quantified variable")
            return Forall(v.text[1:], self.type_())
        left = self.type_atom()
        if self.peek().kind == "arrow":
            self.advance()
            return Arrow(left, self.type_())
        return left

    def type_atom(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            self.advance()
            if tok.text not in self.sorts:
                raise ParseError(f"unknown sort '{tok.text}'", tok.line, tok.col)
            return SortRef(tok.text)
        if tok.kind == "tyvar":
            self.advance()
            return TypeVar(tok.text[1:])
        if tok.kind == "lparen":
            self.advance()
            ty = self.type_()
            self.expect("rparen", "expected ')'")
            return ty
        self.fail("expected a type")

    # -- terms

    def term(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "lam":
            self.advance()
            name = self.expect("ident", "expected a variable name after 'lam'")
            if name.text in _KEYWORDS:
                raise ParseError(f"'{name.text}' is reserved", name.line, name.col)
            self.expect("colon", "expected ':' after the bound variable")
            ty = self.type_()
            self.expect("dot", "expected '.' after the binder")
            self.bound.append((name.text, ty))
            body = self.term()
            self.bound.pop()
            return Abs(name.text, ty, body)
        if tok.kind == "ident" and tok.text == "Lam":
            self.advance()
            v = self.expect("tyvar", "expected a type variable after 'Lam'")
            self.expect("dot", "expected '.' after the binder")
            return TyAbs(v.text[1:], self.term())
        return self.app()

    def _starts_atom(self, tok):
        if tok.kind in ("const", "lparen"):
            return True
        return tok.kind == "ident" and tok.text not in _KEYWORDS

    def app(self):
        out = self.postfix()
        while self._starts_atom(self.peek()):
            out = App(out, self.postfix())
        return out

    def postfix(self):
        out = self.primary()
        while self.peek().kind == "lbrace":
            self.advance()
            ty = self.type_()
            self.expect("rbrace", "expected '}'")
            out = TyApp(out, ty)
        return out

    def primary(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            self.advance()
            for name, ty in reversed(self.bound):
                if name == tok.text:
                    return Var(name, ty)
            if tok.text in self.variables:
                return Var(tok.text, self.variables[tok.text])
            raise ParseError(f"unbound identifier '{tok.text}'", tok.line, tok.col)
        if tok.kind == "const":
            self.advance()
            name = tok.text[1:]
            if name not in self.constants:
                raise ParseError(f"unknown constant '#{name}'", tok.line, tok.col)
            return Const(name, self.constants[name])
        if tok.kind == "lparen":
            self.advance()
            t = self.term()
            self.expect("rparen", "expected ')'")
            return t
        self.fail("expected a term")


def _sort_names(env):
    if isinstance(env, Context):
        return set(env.sorts)
    if isinstance(env, dict):
        names = set(env)
    else:
        names = {s.name if isinstance(s, Sort) else str(s) for s in env}
    return names | {"t"}


def parse_type(text: str, env):
    """Parse the ASCII type syntax against a sort environment."""
    p = _Parser(text, _sort_names(env))
    ty = p.type_()
    p.expect_eof()
    return ty


def parse_term(text: str, ctx: Context):
    """Parse the ASCII term syntax and type-check the result against `ctx`."""
    p = _Parser(text, set(ctx.sorts), ctx.constants, ctx.variables)
    t = p.term()
    p.expect_eof()
    type_of(t, ctx)
    return t


# ---------------------------------------------------------------------------
# rendering

def render_type(ty, style: str = "ascii") -> str:
    if style == "ascii":
        return _rty_ascii(ty)
    if style == "unicode":
        return _rty_uni(ty)
    raise ValueError(f"unknown style {style!r}")


def _rty_ascii(ty):
    match ty:
        case SortRef(n):
            return n
        case TypeVar(n):
            return f"'{n}"
        case Arrow(d, c):
            dom = _rty_ascii(d)
            if isinstance(d, (Arrow, Forall)):
                dom = f"({dom})"
            return f"{dom} -> {_rty_ascii(c)}"
        case Forall(v, b):
            return f"Pi '{v}. {_rty_ascii(b)}"
    raise KernelError(f"not a type: {ty!r}")


def _rty_uni(ty):
    match ty:
        case SortRef(n):
            return n
        case TypeVar(n):
            return n
        case Arrow(d, c):
            dom = _rty_uni(d)
            if isinstance(d, (Arrow, Forall)):
                dom = f"({dom})"
            return f"{dom}→{_rty_uni(c)}"
        case Forall(v, b):
            return f"Π{v}. {_rty_uni(b)}"
    raise KernelError(f"not a type: {ty!r}")


def render_term(term, style: str = "ascii") -> str:
    """ASCII rendering re-parses to an alpha-equivalent term; the unicode
    rendering is for display only."""
    if style == "ascii":
        return _rt_ascii(term)
    if style == "unicode":
        return _rt_uni(term)
    raise ValueError(f"unknown style {style!r}")


def _rt_ascii(t):
    match t:
        case Var(name, _):
            return name
        case Const(name, _):
            return f"#{name}"
        case Abs(x, ty, b):
            return f"lam {x}:{_rty_ascii(ty)}. {_rt_ascii(b)}"
        case TyAbs(a, b):
            return f"Lam '{a}. {_rt_ascii(b)}"
        case App(f, a):
            fun = _rt_ascii(f)
            if isinstance(f, (Abs, TyAbs)):
                fun = f"({fun})"
            arg = _rt_ascii(a)
            if isinstance(a, (App, Abs, TyAbs)):
                arg = f"({arg})"
            return f"{fun} {arg}"
        case TyApp(f, ty):
            fun = _rt_ascii(f)
            if isinstance(f, (App, Abs, TyAbs)):
                fun = f"({fun})"
            return f"{fun}{{{_rty_ascii(ty)}}}"
    raise KernelError(f"not a term: {t!r}")


def _rt_uni(t):
    match t:
        case Var(name, _):
            return name
        case Const(name, _):
            return name
        case Abs(x, ty, b):
            ann = _rty_uni(ty)
            if isinstance(ty, (Arrow, Forall)):
                ann = f"({ann})"
            return f"λ{x}^{ann}. {_rt_uni(b)}"
        case TyAbs(a, b):
            return f"Λ{a}. {_rt_uni(b)}"
        case App(f, a):
            fun = _rt_uni(f)
            if isinstance(f, (Abs, TyAbs)):
                fun = f"({fun})"
            arg = _rt_uni(a)
            if isinstance(a, (App, Abs, TyAbs)):
                arg = f"({arg})"
            return f"{fun} {arg}"
        case TyApp(f, ty):
            fun = _rt_uni(f)
            if isinstance(f, (App, Abs, TyAbs)):
                fun = f"({fun})"
            return f"{fun}{{{_rty_uni(ty)}}}"
    raise KernelError(f"not a term: {t!r}")
