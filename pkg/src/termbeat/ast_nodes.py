"""Parsed syntax: expressions, patterns, declarations, whole modules.

Infix uses and list sugar are desugared during parsing, so these nodes never
contain operator or sugar variants.  Every node carries the SourceRange of the
text it was parsed from; identifier ranges are exact (position fidelity).
"""

from __future__ import annotations

from dataclasses import dataclass

from termbeat.source import SourceRange


@dataclass(frozen=True, slots=True)
class Ident:
    name: str
    range: SourceRange


@dataclass(frozen=True, slots=True)
class Con:
    name: str
    range: SourceRange


@dataclass(frozen=True, slots=True)
class IntLit:
    value: int
    range: SourceRange


@dataclass(frozen=True, slots=True)
class TextLit:
    value: str
    range: SourceRange


@dataclass(frozen=True, slots=True)
class App:
    fun: Expression
    arg: Expression
    range: SourceRange


@dataclass(frozen=True, slots=True)
class Lam:
    params: tuple[Pattern, ...]
    body: Expression
    range: SourceRange


@dataclass(frozen=True, slots=True)
class Hole:
    """Placeholder atom `...` produced by depth-truncated term rendering."""

    range: SourceRange


Expression = Ident | Con | IntLit | TextLit | App | Lam | Hole


@dataclass(frozen=True, slots=True)
class PVar:
    name: str
    range: SourceRange


@dataclass(frozen=True, slots=True)
class PWild:
    range: SourceRange


@dataclass(frozen=True, slots=True)
class PInt:
    value: int
    range: SourceRange


@dataclass(frozen=True, slots=True)
class PCon:
    name: str
    args: tuple[Pattern, ...]
    range: SourceRange


Pattern = PVar | PWild | PInt | PCon


@dataclass(frozen=True, slots=True)
class Declaration:
    """One equation: `name p1 .. pn = body ;` (infix heads normalized)."""

    name: str
    name_range: SourceRange
    patterns: tuple[Pattern, ...]
    body: Expression

    @property
    def arity(self) -> int:
        return len(self.patterns)


@dataclass(frozen=True, slots=True)
class NameAt:
    """A bare name in a header list, with its position for diagnostics."""

    name: str
    line: int
    col: int


@dataclass(frozen=True, slots=True)
class ModuleAst:
    name: str
    exports: tuple[NameAt, ...] | None
    imports: tuple[NameAt, ...]
    declarations: tuple[Declaration, ...]
    editable_from_line: int | None


def pattern_vars(pattern: Pattern) -> list[str]:
    """Variable names bound by a pattern, in textual order."""
    match pattern:
        case PVar(name=name):
            return [name]
        case PCon(args=args):
            out: list[str] = []
            for a in args:
                out.extend(pattern_vars(a))
            return out
        case _:
            return []


def same_structure(a: Expression, b: Expression) -> bool:
    """Structural equality ignoring source ranges."""
    match a, b:
        case Ident(name=n1), Ident(name=n2):
            return n1 == n2
        case Con(name=n1), Con(name=n2):
            return n1 == n2
        case IntLit(value=v1), IntLit(value=v2):
            return v1 == v2
        case TextLit(value=v1), TextLit(value=v2):
            return v1 == v2
        case App(fun=f1, arg=a1), App(fun=f2, arg=a2):
            return same_structure(f1, f2) and same_structure(a1, a2)
        case Lam(params=p1, body=b1), Lam(params=p2, body=b2):
            return (
                len(p1) == len(p2)
                and all(same_pattern(x, y) for x, y in zip(p1, p2))
                and same_structure(b1, b2)
            )
        case Hole(), Hole():
            return True
        case _:
            return False


def same_pattern(a: Pattern, b: Pattern) -> bool:
    match a, b:
        case PVar(name=n1), PVar(name=n2):
            return n1 == n2
        case PWild(), PWild():
            return True
        case PInt(value=v1), PInt(value=v2):
            return v1 == v2
        case PCon(name=n1, args=a1), PCon(name=n2, args=a2):
            return (
                n1 == n2
                and len(a1) == len(a2)
                and all(same_pattern(x, y) for x, y in zip(a1, a2))
            )
        case _:
            return False
