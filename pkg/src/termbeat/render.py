"""Term display: infix operators, deterministic parenthesization.

Operands whose precedence is less than or equal to the surrounding operator
are parenthesized, so nesting is always visible (`a : (b : c)`); application
arguments keep parentheses whenever they are not atoms.  Output reparses to a
structurally identical term; depth-truncated positions print as `...`, which
the expression grammar accepts as an atom.
"""

from __future__ import annotations

from termbeat import ast_nodes as A
from termbeat import terms as T
from termbeat.fixity import OPERATORS

_ATOM = 11
_APP = 10
_LOOSE = 0  # lambdas and negative literals: parenthesized in any child slot


def render_term(term: T.Term, max_depth: int | None = None) -> str:
    text, _ = _render(term, 0, max_depth)
    return text


def _render(t: T.Term, depth: int, max_depth: int | None) -> tuple[str, int]:
    head, args = T.unwind_spine(t)
    if max_depth is not None and depth >= max_depth:
        if args or isinstance(head, T.TLam):
            return "...", _ATOM
    if not args:
        return _render_leaf(head, depth, max_depth)
    op = _operator_name(head)
    if op is not None and len(args) == 2:
        prec = OPERATORS[op].precedence
        left = _child(args[0], depth + 1, max_depth, prec)
        right = _child(args[1], depth + 1, max_depth, prec)
        return f"{left} {op} {right}", prec
    head_text, head_prec = _render_leaf(head, depth + 1, max_depth)
    parts = [head_text if head_prec > _APP else f"({head_text})"]
    for a in args:
        text, prec = _render(a, depth + 1, max_depth)
        parts.append(text if prec > _APP else f"({text})")
    return " ".join(parts), _APP


def _child(t: T.Term, depth: int, max_depth: int | None, parent_prec: int) -> str:
    text, prec = _render(t, depth, max_depth)
    return text if prec > parent_prec else f"({text})"


def _operator_name(head: T.Term) -> str | None:
    if isinstance(head, T.TIdent) and head.name in OPERATORS:
        return head.name
    if isinstance(head, T.TCon) and head.name == ":":
        return ":"
    return None


def _render_leaf(head: T.Term, depth: int, max_depth: int | None) -> tuple[str, int]:
    match head:
        case T.TInt(value=v):
            # literals are non-negative; negative results print as negate calls
            return (str(v), _ATOM) if v >= 0 else (f"negate {-v}", _APP)
        case T.TText(value=v):
            return f'"{v}"', _ATOM
        case T.TIdent(name=name):
            return (f"({name})", _ATOM) if name in OPERATORS else (name, _ATOM)
        case T.TCon(name=name):
            return ("(:)", _ATOM) if name == ":" else (name, _ATOM)
        case T.THole():
            return "...", _ATOM
        case T.TLam(params=ps, body=b):
            if max_depth is not None and depth >= max_depth:
                return "...", _ATOM
            body_text, _ = _render(b, depth + 1, max_depth)
            params = " ".join(render_pattern(p, atom=True) for p in ps)
            return f"\\{params} -> {body_text}", _LOOSE
    raise AssertionError(f"unhandled term {head!r}")


def render_pattern(p: A.Pattern, atom: bool = False) -> str:
    return _render_pat(p, 2 if atom else 0)


def _render_pat(p: A.Pattern, level: int) -> str:
    """level 0: full pattern; 1: left of `:` (cons needs parens); 2: atom."""
    match p:
        case A.PVar(name=name):
            return name
        case A.PWild():
            return "_"
        case A.PInt(value=v):
            return str(v)
        case A.PCon(name="[]", args=()):
            return "[]"
        case A.PCon(name=":", args=(h, t)):
            text = f"{_render_pat(h, 1)} : {_render_pat(t, 0)}"
            return f"({text})" if level >= 1 else text
        case A.PCon(name=name, args=args):
            if not args:
                return name
            text = " ".join([name] + [_render_pat(a, 2) for a in args])
            return f"({text})" if level >= 2 else text
    raise AssertionError(f"unhandled pattern {p!r}")
