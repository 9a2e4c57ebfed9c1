"""The fixed table of infix operators.  Operators are not user-definable."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Assoc(enum.Enum):
    LEFT = enum.auto()
    RIGHT = enum.auto()
    NON = enum.auto()


@dataclass(frozen=True, slots=True)
class Fixity:
    precedence: int
    assoc: Assoc


OPERATORS: dict[str, Fixity] = {
    ":": Fixity(5, Assoc.RIGHT),
    "++": Fixity(5, Assoc.RIGHT),
    "=:=": Fixity(5, Assoc.RIGHT),
    "+": Fixity(6, Assoc.LEFT),
    "-": Fixity(6, Assoc.LEFT),
    "*": Fixity(7, Assoc.LEFT),
    "div": Fixity(7, Assoc.LEFT),
    "mod": Fixity(7, Assoc.LEFT),
    "<": Fixity(4, Assoc.NON),
    "<=": Fixity(4, Assoc.NON),
    "==": Fixity(4, Assoc.NON),
    "/=": Fixity(4, Assoc.NON),
    ">=": Fixity(4, Assoc.NON),
    ">": Fixity(4, Assoc.NON),
}

# Application binds tighter than every operator.
APP_PRECEDENCE = 10

# Integer primitives evaluated by the engine itself; equations may not
# redefine them.  `negate` exists because literals are non-negative.
BUILTIN_NAMES = frozenset(
    ["+", "-", "*", "div", "mod", "<", "<=", "==", "/=", ">=", ">", "negate"]
)

# `:` builds list cells; `[]` is the empty list.  Neither is definable.
CONSTRUCTOR_OPERATORS = frozenset([":"])
