"""termbeat - a live-coding MIDI sequencer.

Programs are written in a small, lazily evaluated functional language and
denote (possibly infinite) lists of MIDI events.  The interpreter treats the
program as a set of term rewriting rules and reduces the current term just far
enough to produce the next event.  Module definitions can be replaced while
the term keeps reducing, so the music changes without a restart.
"""

from termbeat.engine import (
    BudgetExhausted,
    BuiltinError,
    EngineError,
    NoMatchingEquation,
    RuleSet,
    StepRecord,
    UnboundIdentifier,
    compile_rules,
    normal_form,
    term_size,
    whnf,
)
from termbeat.events import Machine, MachineStatus, classify_element, run
from termbeat.parser import parse_expression, parse_module
from termbeat.program import (
    ProgramState,
    load_program,
    load_program_dir,
    swap_editable,
    swap_module,
)
from termbeat.render import render_term
from termbeat.session import Session, SessionSnapshot, snapshot_to_json
from termbeat.source import EDITABLE_MARKER, Diagnostic, SourceError, SourceRange

__all__ = [
    "BudgetExhausted",
    "BuiltinError",
    "Diagnostic",
    "EDITABLE_MARKER",
    "EngineError",
    "Machine",
    "MachineStatus",
    "NoMatchingEquation",
    "ProgramState",
    "RuleSet",
    "Session",
    "SessionSnapshot",
    "SourceError",
    "SourceRange",
    "StepRecord",
    "UnboundIdentifier",
    "classify_element",
    "compile_rules",
    "load_program",
    "load_program_dir",
    "normal_form",
    "parse_expression",
    "parse_module",
    "render_term",
    "run",
    "snapshot_to_json",
    "swap_editable",
    "swap_module",
    "term_size",
    "whnf",
]
