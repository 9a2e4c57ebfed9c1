"""Module registry and atomic hot swap.

A ProgramState is an immutable value: swapping builds a new state with a
freshly compiled rule set and bumped versions, or raises and leaves the old
state untouched.  The live term is never part of this state; identifiers in
it resolve against whichever rule set is current when they are reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from termbeat import ast_nodes as A
from termbeat.engine import RuleSet, compile_rules
from termbeat.parser import parse_module
from termbeat.prelude import PRELUDE_NAME, PRELUDE_TEXT
from termbeat.source import Diagnostic, SourceError, split_editable

MODULE_SUFFIX = ".lhsq"


class ModuleNotFound(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


class NoEditableRegion(Exception):
    def __init__(self, name: str):
        super().__init__(f"module {name} has no editable region")
        self.name = name


@dataclass(frozen=True, slots=True)
class ModuleSource:
    name: str
    full_text: str
    protected_text: str
    editable_text: str | None
    ast: A.ModuleAst
    version: int

    @property
    def has_editable_region(self) -> bool:
        return self.editable_text is not None


@dataclass(frozen=True, slots=True)
class ProgramState:
    modules: dict[str, ModuleSource]
    compiled: RuleSet
    program_version: int


def _make_source(name: str, text: str, version: int) -> ModuleSource:
    ast = parse_module(name, text)
    protected, editable = split_editable(text)
    if editable is not None and protected and not protected.endswith("\n"):
        # marker at end of file without newline: keep the concatenation
        # invariant by terminating the protected part
        protected += "\n"
        text = protected + editable
    return ModuleSource(name, text, protected, editable, ast, version)


def load_program(sources: list[tuple[str, str]]) -> ProgramState:
    """Parse and compile all modules plus the shipped Prelude, atomically.

    Raises SourceError with every collected diagnostic; nothing is loaded on
    failure.  A user module named Prelude replaces the shipped one.
    """
    names = [name for name, _ in sources]
    if PRELUDE_NAME not in names:
        sources = [(PRELUDE_NAME, PRELUDE_TEXT)] + list(sources)
    modules: dict[str, ModuleSource] = {}
    diags: list[Diagnostic] = []
    for name, text in sources:
        if name in modules:
            diags.append(Diagnostic(name, 1, 1, f"module `{name}` given twice"))
            continue
        try:
            modules[name] = _make_source(name, text, 1)
        except SourceError as e:
            diags.extend(e.diagnostics)
    if diags:
        raise SourceError(diags)
    compiled = compile_rules([m.ast for m in modules.values()], generation=1)
    return ProgramState(modules, compiled, 1)


def swap_module(state: ProgramState, name: str, new_full_text: str) -> ProgramState:
    """Replace (or create) one module's full text; all-or-nothing."""
    old = state.modules.get(name)
    version = old.version + 1 if old else 1
    source = _make_source(name, new_full_text, version)
    modules = dict(state.modules)
    modules[name] = source
    new_version = state.program_version + 1
    compiled = compile_rules([m.ast for m in modules.values()], generation=new_version)
    return ProgramState(modules, compiled, new_version)


def swap_editable(state: ProgramState, name: str, new_editable_text: str) -> ProgramState:
    """Replace the text below the marker; the protected part is kept verbatim."""
    module = state.modules.get(name)
    if module is None:
        raise ModuleNotFound(name)
    if module.editable_text is None:
        raise NoEditableRegion(name)
    return swap_module(state, name, module.protected_text + new_editable_text)


def get_module(state: ProgramState, name: str) -> ModuleSource:
    module = state.modules.get(name)
    if module is None:
        raise ModuleNotFound(name)
    return module


def module_versions(state: ProgramState) -> dict[str, int]:
    return {name: m.version for name, m in state.modules.items()}


def load_program_dir(directory: str | Path) -> ProgramState:
    """Load every `.lhsq` file of a directory; file stem = module name."""
    path = Path(directory)
    if not path.is_dir():
        raise SourceError([Diagnostic(str(directory), 1, 1, "program directory not found")])
    sources = [
        (p.stem, p.read_text(encoding="utf-8"))
        for p in sorted(path.glob(f"*{MODULE_SUFFIX}"))
    ]
    if not sources:
        raise SourceError([Diagnostic(str(directory), 1, 1, "no .lhsq modules in directory")])
    return load_program(sources)
