"""Terms: immutable operator trees reduced by the engine.

Nodes are never mutated after construction, so a reduction step builds new
nodes and leaves every existing reference valid.  Substitution may alias one
node from several parents; since nothing is updated in place this stays
observationally equivalent to copying (there is no sharing of reduction
results).  Equality and hashing are by object identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from termbeat import ast_nodes as A
from termbeat.source import SourceRange


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True, eq=False)
class TApp(Term):
    fun: Term
    arg: Term
    origin: SourceRange | None


@dataclass(frozen=True, slots=True, eq=False)
class TIdent(Term):
    name: str
    origin: SourceRange | None


@dataclass(frozen=True, slots=True, eq=False)
class TCon(Term):
    name: str
    origin: SourceRange | None


@dataclass(frozen=True, slots=True, eq=False)
class TInt(Term):
    value: int
    origin: SourceRange | None


@dataclass(frozen=True, slots=True, eq=False)
class TText(Term):
    value: str
    origin: SourceRange | None


@dataclass(frozen=True, slots=True, eq=False)
class TLam(Term):
    params: tuple[A.Pattern, ...]
    body: Term
    origin: SourceRange | None


@dataclass(frozen=True, slots=True, eq=False)
class THole(Term):
    """Stands for elided structure in reparsed, depth-truncated renderings."""

    origin: SourceRange | None


def from_expression(expr: A.Expression, env: dict[str, Term] | None = None) -> Term:
    """Instantiate an expression, mapping bound variables to argument terms.

    Every occurrence of a bound variable receives the bound term; node origins
    come from the expression's own source ranges.  Unbound identifiers stay as
    identifier nodes and resolve against the rule set when reduced.
    """
    match expr:
        case A.Ident(name=name, range=r):
            if env is not None and name in env:
                return env[name]
            return TIdent(name, r)
        case A.Con(name=name, range=r):
            return TCon(name, r)
        case A.IntLit(value=v, range=r):
            return TInt(v, r)
        case A.TextLit(value=v, range=r):
            return TText(v, r)
        case A.App(fun=f, arg=a, range=r):
            return TApp(from_expression(f, env), from_expression(a, env), r)
        case A.Lam(params=ps, body=b, range=r):
            inner = env
            if env is not None:
                bound = {v for p in ps for v in A.pattern_vars(p)}
                inner = {k: t for k, t in env.items() if k not in bound}
            return TLam(ps, from_expression(b, inner), r)
        case A.Hole(range=r):
            return THole(r)
    raise AssertionError(f"unhandled expression {expr!r}")


def substitute_term(term: Term, env: dict[str, Term]) -> Term:
    """Replace identifier nodes named in env (used for lambda application)."""
    if not env:
        return term
    match term:
        case TIdent(name=name):
            return env.get(name, term)
        case TApp(fun=f, arg=a, origin=r):
            nf, na = substitute_term(f, env), substitute_term(a, env)
            if nf is f and na is a:
                return term
            return TApp(nf, na, r)
        case TLam(params=ps, body=b, origin=r):
            bound = {v for p in ps for v in A.pattern_vars(p)}
            inner = {k: t for k, t in env.items() if k not in bound}
            nb = substitute_term(b, inner)
            return term if nb is b else TLam(ps, nb, r)
        case _:
            return term


def unwind_spine(term: Term) -> tuple[Term, list[Term]]:
    """Split nested applications into (head, [arg1, .., argN])."""
    args: list[Term] = []
    t = term
    while isinstance(t, TApp):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def make_app(head: Term, args: list[Term]) -> Term:
    for a in args:
        head = TApp(head, a, None)
    return head


def cons(head: Term, tail: Term) -> Term:
    return TApp(TApp(TCon(":", None), head, None), tail, None)


NIL = TCon("[]", None)


def term_size(term: Term) -> int:
    """Count tree nodes; a node aliased into several positions counts at each.

    Sizes are cached per node within one call, so the walk stays linear in
    the number of distinct nodes even when substitution aliased large subtrees.
    """
    sizes: dict[Term, int] = {}
    stack: list[tuple[Term, bool]] = [(term, False)]
    while stack:
        t, ready = stack.pop()
        if t in sizes:
            continue
        if isinstance(t, TApp):
            if ready:
                sizes[t] = 1 + sizes[t.fun] + sizes[t.arg]
            else:
                stack.append((t, True))
                stack.append((t.fun, False))
                stack.append((t.arg, False))
        elif isinstance(t, TLam):
            if ready:
                sizes[t] = 1 + sizes[t.body]
            else:
                stack.append((t, True))
                stack.append((t.body, False))
        else:
            sizes[t] = 1
    return sizes[term]


def same_structure(a: Term, b: Term) -> bool:
    """Structural equality ignoring origins (for tests and snapshots)."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        match x, y:
            case TApp(fun=f1, arg=a1), TApp(fun=f2, arg=a2):
                stack.append((f1, f2))
                stack.append((a1, a2))
            case TIdent(name=n1), TIdent(name=n2):
                if n1 != n2:
                    return False
            case TCon(name=n1), TCon(name=n2):
                if n1 != n2:
                    return False
            case TInt(value=v1), TInt(value=v2):
                if v1 != v2:
                    return False
            case TText(value=v1), TText(value=v2):
                if v1 != v2:
                    return False
            case TLam(params=p1, body=b1), TLam(params=p2, body=b2):
                if len(p1) != len(p2) or not all(
                    A.same_pattern(u, v) for u, v in zip(p1, p2)
                ):
                    return False
                stack.append((b1, b2))
            case THole(), THole():
                pass
            case _:
                return False
    return True
