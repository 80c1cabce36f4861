"""Beta and type-beta reduction with step traces.

The default strategy is leftmost-outermost; a randomized strategy is
available for cross-checking confluence.  Well-typed terms always
normalize, but every loop is still fuel-guarded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import (Abs, App, KernelError, Term, TyAbs, TyApp, render_term,
                     subst_term, subst_type)

BETA = "beta"
TYPE_BETA = "type-beta"


class FuelExhausted(KernelError):
    pass


@dataclass(frozen=True)
class TraceStep:
    path: tuple
    rule: str
    result: "Term"


@dataclass
class ReductionTrace:
    steps: list

    def __len__(self):
        return len(self.steps)


def find_redexes(term) -> list:
    """All redex positions in preorder, as (path, rule) pairs.

    Paths are tuples of child indices: App has children 0 (function) and
    1 (argument); Abs, TyApp and TyAbs have a single child 0.  Preorder
    means the first entry is the leftmost-outermost redex.
    """
    out = []

    def go(t, path):
        match t:
            case App(Abs(_, _, _), _):
                out.append((path, BETA))
            case TyApp(TyAbs(_, _), _):
                out.append((path, TYPE_BETA))
        match t:
            case App(f, a):
                go(f, path + (0,))
                go(a, path + (1,))
            case Abs(_, _, b):
                go(b, path + (0,))
            case TyApp(f, _):
                go(f, path + (0,))
            case TyAbs(_, b):
                go(b, path + (0,))

    go(term, ())
    return out


def reduce_at(term, path):
    """Contract the redex at `path` and return the whole term."""
    if not path:
        match term:
            case App(Abs(x, xt, body), arg):
                return subst_term(body, x, arg, var_type=xt)
            case TyApp(TyAbs(v, body), ty):
                return subst_type(body, v, ty)
        raise KernelError(f"no redex at the given position: {render_term(term)}")
    head, rest = path[0], path[1:]
    match term:
        case App(f, a):
            if head == 0:
                return App(reduce_at(f, rest), a)
            return App(f, reduce_at(a, rest))
        case Abs(x, ty, b):
            return Abs(x, ty, reduce_at(b, rest))
        case TyApp(f, ty):
            return TyApp(reduce_at(f, rest), ty)
        case TyAbs(v, b):
            return TyAbs(v, reduce_at(b, rest))
    raise KernelError("path leads outside the term")


def reduce_step(term):
    """One leftmost-outermost step: (term', path, rule), or None if normal."""
    redexes = find_redexes(term)
    if not redexes:
        return None
    path, rule = redexes[0]
    return reduce_at(term, path), path, rule


def normalize(term, fuel: int = 10000, strategy: str = "leftmost", rng=None):
    """Reduce to normal form; returns (normal form, trace).

    `fuel` bounds the number of steps and must be at least 1.  With
    strategy "random" the redex contracted at each step is drawn from
    `rng` (a random.Random).
    """
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    if strategy not in ("leftmost", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "random" and rng is None:
        raise ValueError("the random strategy needs an rng")
    steps = []
    current = term
    for _ in range(fuel):
        redexes = find_redexes(current)
        if not redexes:
            return current, ReductionTrace(steps)
        path, rule = redexes[0] if strategy == "leftmost" else rng.choice(redexes)
        current = reduce_at(current, path)
        steps.append(TraceStep(path, rule, current))
    if not find_redexes(current):
        return current, ReductionTrace(steps)
    raise FuelExhausted(f"no normal form after {fuel} steps")


def render_trace(trace) -> str:
    """One line per step: `<step#> <rule> at <path> ⇒ <term>`."""
    lines = []
    for i, step in enumerate(trace.steps, 1):
        at = ".".join(str(c) for c in step.path) or "ε"
        lines.append(f"{i} {step.rule} at {at} ⇒ {render_term(step.result)}")
    return "\n".join(lines)
