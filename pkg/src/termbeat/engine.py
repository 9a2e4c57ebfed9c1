"""Rule compilation and normal-order term reduction under a step budget.

The reducer rewrites leftmost-outermost: identifiers resolve against the
current rule set at the moment they are reduced, equations are tried top to
bottom, and patterns force arguments only as far as they demand.  Every rule
firing (including builtin arithmetic and lambda application) costs one budget
step and lands in the step trace.

Reduction results are cached per rule-set snapshot, keyed by node identity.
Because nodes are immutable and a cache hit replays the recorded steps into
the trace and charges them against the budget, a run with the cache is
step-for-step indistinguishable from one without it; swapping rules installs
a fresh rule set and thereby an empty cache.
"""

from __future__ import annotations

import sys
from collections.abc import Sequence
from dataclasses import dataclass

from termbeat import ast_nodes as A
from termbeat import terms as T
from termbeat.fixity import BUILTIN_NAMES
from termbeat.render import render_term
from termbeat.source import Diagnostic, SourceError, SourceRange

DEFAULT_BUDGET = 100000
_MEMO_CAP = 250000

sys.setrecursionlimit(max(sys.getrecursionlimit(), 30000))


class EngineError(Exception):
    """A reduction failure; playback pauses with the term retained."""

    def __init__(
        self,
        message: str,
        origin: SourceRange | None = None,
        rendering: str | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.origin = origin
        self.rendering = rendering


class UnboundIdentifier(EngineError):
    def __init__(self, name: str, origin: SourceRange | None = None):
        super().__init__(f"unbound identifier `{name}`", origin)
        self.name = name


class NoMatchingEquation(EngineError):
    def __init__(
        self,
        name: str,
        origin: SourceRange | None = None,
        rendering: str | None = None,
    ):
        super().__init__(f"no equation of `{name}` matches", origin, rendering)
        self.name = name


class BudgetExhausted(EngineError):
    def __init__(self, max_steps: int):
        super().__init__(f"step budget of {max_steps} exhausted")
        self.max_steps = max_steps


class BuiltinError(EngineError):
    pass


@dataclass(frozen=True, slots=True)
class StepRecord:
    fired_rule: str
    redex_origin: SourceRange | None
    step_index: int


_Entry = tuple[str, SourceRange | None]


class StepTrace(Sequence):
    """Steps of one reduction request; records materialize on access."""

    __slots__ = ("_entries", "_base")

    def __init__(self, entries: list[_Entry], base: int = 0):
        self._entries = entries
        self._base = base

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, index):
        if isinstance(index, slice):
            rng = range(*index.indices(len(self._entries)))
            return [self._make(i) for i in rng]
        if index < 0:
            index += len(self._entries)
        if not 0 <= index < len(self._entries):
            raise IndexError(index)
        return self._make(index)

    def _make(self, i: int) -> StepRecord:
        name, origin = self._entries[i]
        return StepRecord(name, origin, self._base + i)


@dataclass(frozen=True, slots=True)
class Equation:
    name: str
    patterns: tuple[A.Pattern, ...]
    body: A.Expression


class RuleSet:
    """Immutable snapshot of compiled rules plus its private reduction cache."""

    __slots__ = ("table", "generation", "_whnf_memo", "_nf_memo")

    def __init__(
        self, table: dict[str, tuple[int, tuple[Equation, ...]]], generation: int = 0
    ):
        self.table = table
        self.generation = generation
        self._whnf_memo: dict[T.Term, tuple[T.Term, tuple[_Entry, ...]]] = {}
        self._nf_memo: dict[T.Term, tuple[T.Term, tuple[_Entry, ...]]] = {}

    def with_generation(self, generation: int) -> RuleSet:
        return RuleSet(self.table, generation)

    def names(self) -> list[str]:
        return sorted(self.table)


def compile_rules(
    modules: Sequence[A.ModuleAst], generation: int = 0
) -> RuleSet:
    """Assemble one flat rule table from parsed modules.

    All diagnostics are collected before failing: duplicate names across
    modules, redefinition of builtins, arity mismatches, exports of undefined
    names, imports of unknown modules, import cycles, and editable-region
    redefinition of a name from the protected region of the same module.
    """
    diags: list[Diagnostic] = []
    loaded = {m.name for m in modules}

    for m in modules:
        if m.editable_from_line is not None:
            protected = {
                d.name
                for d in m.declarations
                if d.name_range.start_line < m.editable_from_line
            }
            seen: set[str] = set()
            for d in m.declarations:
                if (
                    d.name_range.start_line >= m.editable_from_line
                    and d.name in protected
                    and d.name not in seen
                ):
                    seen.add(d.name)
                    diags.append(
                        _diag(d, f"duplicate definition of `{d.name}`: already defined in the protected region")
                    )
        seen_builtin: set[str] = set()
        for d in m.declarations:
            if d.name in BUILTIN_NAMES and d.name not in seen_builtin:
                seen_builtin.add(d.name)
                diags.append(_diag(d, f"cannot redefine builtin `{d.name}`"))
        if m.exports is not None:
            defined = {d.name for d in m.declarations}
            for item in m.exports:
                if item.name not in defined:
                    diags.append(
                        Diagnostic(m.name, item.line, item.col, f"export of undefined name `{item.name}`")
                    )
        for imp in m.imports:
            if imp.name not in loaded:
                diags.append(
                    Diagnostic(m.name, imp.line, imp.col, f"import of unknown module `{imp.name}`")
                )

    diags.extend(_cycle_diagnostics(modules, loaded))

    owner: dict[str, str] = {}
    flagged: set[str] = set()
    table: dict[str, tuple[int, list[Equation]]] = {}
    for m in modules:
        for d in m.declarations:
            prev = owner.setdefault(d.name, m.name)
            if prev != m.name:
                if d.name not in flagged:
                    flagged.add(d.name)
                    diags.append(
                        _diag(d, f"duplicate definition of `{d.name}`: already defined in module {prev}")
                    )
                continue
            eq = Equation(d.name, d.patterns, d.body)
            if d.name not in table:
                table[d.name] = (d.arity, [eq])
            else:
                arity, eqs = table[d.name]
                if arity != d.arity:
                    diags.append(
                        _diag(d, f"`{d.name}` has equations of different arities ({arity} and {d.arity})")
                    )
                else:
                    eqs.append(eq)

    if diags:
        raise SourceError(diags)
    frozen = {name: (arity, tuple(eqs)) for name, (arity, eqs) in table.items()}
    return RuleSet(frozen, generation)


def _diag(d: A.Declaration, message: str) -> Diagnostic:
    r = d.name_range
    return Diagnostic(r.module, r.start_line, r.start_col, message)


def _cycle_diagnostics(
    modules: Sequence[A.ModuleAst], loaded: set[str]
) -> list[Diagnostic]:
    graph = {
        m.name: [i.name for i in m.imports if i.name in loaded] for m in modules
    }
    state: dict[str, int] = {}  # 1 visiting, 2 done
    path: list[str] = []

    def visit(node: str) -> list[str] | None:
        state[node] = 1
        path.append(node)
        for nxt in graph[node]:
            if state.get(nxt) == 1:
                return path[path.index(nxt):] + [nxt]
            if state.get(nxt) is None:
                cycle = visit(nxt)
                if cycle:
                    return cycle
        path.pop()
        state[node] = 2
        return None

    for m in modules:
        if state.get(m.name) is None:
            cycle = visit(m.name)
            if cycle:
                first = next(mm for mm in modules if mm.name == cycle[0])
                imp = next(i for i in first.imports if i.name == cycle[1])
                return [
                    Diagnostic(
                        first.name, imp.line, imp.col,
                        "import cycle: " + " -> ".join(cycle),
                    )
                ]
    return []


def apply_builtin(op: str, lhs: int, rhs: int | None = None) -> T.Term:
    """Integer primitives; comparisons yield the constructors True/False."""
    if op == "negate":
        return T.TInt(-lhs, None)
    if rhs is None:
        raise BuiltinError(f"`{op}` needs two operands")
    match op:
        case "+":
            return T.TInt(lhs + rhs, None)
        case "-":
            return T.TInt(lhs - rhs, None)
        case "*":
            return T.TInt(lhs * rhs, None)
        case "div":
            if rhs == 0:
                raise BuiltinError("division by zero")
            return T.TInt(lhs // rhs, None)
        case "mod":
            if rhs == 0:
                raise BuiltinError("division by zero")
            return T.TInt(lhs % rhs, None)
        case "<":
            return _bool(lhs < rhs)
        case "<=":
            return _bool(lhs <= rhs)
        case "==":
            return _bool(lhs == rhs)
        case "/=":
            return _bool(lhs != rhs)
        case ">=":
            return _bool(lhs >= rhs)
        case ">":
            return _bool(lhs > rhs)
    raise BuiltinError(f"unknown builtin `{op}`")


def _bool(b: bool) -> T.Term:
    return T.TCon("True" if b else "False", None)


def _redex_origin(
    head: T.Term, rev_nodes: list[T.Term], arity: int
) -> SourceRange | None:
    """Source span of the application node consuming the matched arguments.

    Zero-arity rules reduce the head itself; rebuilt spine nodes carry no
    origin, in which case the head's own span is the best anchor left.
    """
    if arity:
        node_origin = rev_nodes[-arity].origin
        if node_origin is not None:
            return node_origin
    return head.origin


def substitute(rhs: A.Expression, bindings: dict[str, T.Term]) -> T.Term:
    """Instantiate an equation right-hand side with pattern bindings."""
    return T.from_expression(rhs, bindings)


class _Request:
    """One whnf/normal-form request: shared budget and step trace."""

    __slots__ = ("rules", "remaining", "max_steps", "trace")

    def __init__(self, rules: RuleSet, budget: int):
        self.rules = rules
        self.remaining = budget
        self.max_steps = budget
        self.trace: list[_Entry] = []

    def _spend(self, n: int) -> None:
        self.remaining -= n
        if self.remaining < 0:
            raise BudgetExhausted(self.max_steps)

    def _step(self, name: str, origin: SourceRange | None) -> None:
        self._spend(1)
        self.trace.append((name, origin))

    # weak head normal form ------------------------------------------------

    def whnf(self, t: T.Term) -> T.Term:
        if not isinstance(t, (T.TApp, T.TIdent)):
            return t
        memo = self.rules._whnf_memo
        hit = memo.get(t)
        if hit is not None:
            result, chunk = hit
            if chunk:
                self._spend(len(chunk))
                self.trace.extend(chunk)
            return result
        mark = len(self.trace)
        result = self._reduce(t)
        if len(memo) >= _MEMO_CAP:
            memo.clear()
        memo[t] = (result, tuple(self.trace[mark:]))
        return result

    def _reduce(self, t0: T.Term) -> T.Term:
        head = t0
        rev_args: list[T.Term] = []  # outermost first; argument #1 is [-1]
        rev_nodes: list[T.Term] = []  # the application node that supplied each arg
        changed = False
        while True:
            while isinstance(head, T.TApp):
                rev_args.append(head.arg)
                rev_nodes.append(head)
                head = head.fun

            if isinstance(head, T.TIdent):
                name = head.name
                if name in BUILTIN_NAMES:
                    result = self._builtin(name, head, rev_args, rev_nodes)
                    if result is None:
                        break  # under-applied
                    head = result
                    changed = True
                    continue
                entry = self.rules.table.get(name)
                if entry is None:
                    raise UnboundIdentifier(name, head.origin)
                arity, equations = entry
                if len(rev_args) < arity:
                    break
                origin = _redex_origin(head, rev_nodes, arity)
                body = self._fire(name, origin, equations, arity, rev_args)
                if arity:
                    del rev_args[-arity:]
                    del rev_nodes[-arity:]
                head = body
                changed = True
                continue

            if isinstance(head, T.TLam) and len(rev_args) >= len(head.params):
                body = self._beta(head, rev_args, _redex_origin(head, rev_nodes, len(head.params)))
                del rev_args[-len(head.params):]
                del rev_nodes[-len(head.params):]
                head = body
                changed = True
                continue

            if isinstance(head, (T.TInt, T.TText)) and rev_args:
                kind = "an integer" if isinstance(head, T.TInt) else "a text"
                raise EngineError(
                    f"cannot apply {kind} to arguments",
                    head.origin,
                    render_term(self._rebuild(head, rev_args)),
                )
            break  # constructor, hole, or under-applied function: weak head

        if not changed:
            return t0
        return self._rebuild(head, rev_args)

    @staticmethod
    def _rebuild(head: T.Term, rev_args: list[T.Term]) -> T.Term:
        for a in reversed(rev_args):
            head = T.TApp(head, a, None)
        return head

    def _builtin(
        self, name: str, head: T.TIdent, rev_args: list[T.Term], rev_nodes: list[T.Term]
    ) -> T.Term | None:
        arity = 1 if name == "negate" else 2
        if len(rev_args) < arity:
            return None
        origin = _redex_origin(head, rev_nodes, arity)
        values: list[int] = []
        for i in range(arity):
            forced = self.whnf(rev_args[-1 - i])
            rev_args[-1 - i] = forced
            if not isinstance(forced, T.TInt):
                raise BuiltinError(
                    f"`{name}` applied to a non-integer",
                    origin,
                    render_term(self._rebuild(head, rev_args)),
                )
            values.append(forced.value)
        try:
            result = apply_builtin(name, *values)
        except BuiltinError as e:
            e.origin = origin
            e.rendering = render_term(self._rebuild(head, rev_args))
            raise
        self._step(name, origin)
        del rev_args[-arity:]
        del rev_nodes[-arity:]
        return result

    def _fire(
        self,
        name: str,
        origin: SourceRange | None,
        equations: tuple[Equation, ...],
        arity: int,
        rev_args: list[T.Term],
    ) -> T.Term:
        for eq in equations:
            bindings: dict[str, T.Term] = {}
            ok = True
            for i, pat in enumerate(eq.patterns):
                forced, matched = self._match(pat, rev_args[-1 - i], bindings)
                rev_args[-1 - i] = forced
                if not matched:
                    ok = False
                    break
            if ok:
                self._step(name, origin)
                return substitute(eq.body, bindings)
        shown = self._rebuild(
            T.TIdent(name, origin), rev_args[len(rev_args) - arity:] if arity else []
        )
        raise NoMatchingEquation(name, origin, render_term(shown))

    def _beta(self, lam: T.TLam, rev_args: list[T.Term], origin: SourceRange | None) -> T.Term:
        bindings: dict[str, T.Term] = {}
        for i, pat in enumerate(lam.params):
            forced, matched = self._match(pat, rev_args[-1 - i], bindings)
            rev_args[-1 - i] = forced
            if not matched:
                raise NoMatchingEquation("\\", origin, render_term(lam))
        self._step("\\", origin)
        return T.substitute_term(lam.body, bindings)

    def _match(
        self, pat: A.Pattern, term: T.Term, bindings: dict[str, T.Term]
    ) -> tuple[T.Term, bool]:
        """Match one pattern, forcing only as deep as the pattern demands.

        Returns the term with any forced positions replaced, so progress is
        kept when a later equation re-examines the same argument.
        """
        match pat:
            case A.PVar(name=name):
                bindings[name] = term
                return term, True
            case A.PWild():
                return term, True
            case A.PInt(value=v):
                w = self.whnf(term)
                return w, isinstance(w, T.TInt) and w.value == v
            case A.PCon(name=name, args=pargs):
                w = self.whnf(term)
                chead, cargs = T.unwind_spine(w)
                if (
                    not isinstance(chead, T.TCon)
                    or chead.name != name
                    or len(cargs) != len(pargs)
                ):
                    return w, False
                rebuilt = False
                for i, sub in enumerate(pargs):
                    forced, matched = self._match(sub, cargs[i], bindings)
                    if forced is not cargs[i]:
                        cargs[i] = forced
                        rebuilt = True
                    if not matched:
                        return (self._rebuild_con(chead, cargs) if rebuilt else w), False
                return (self._rebuild_con(chead, cargs) if rebuilt else w), True
        raise AssertionError(f"unhandled pattern {pat!r}")

    @staticmethod
    def _rebuild_con(head: T.Term, args: list[T.Term]) -> T.Term:
        for a in args:
            head = T.TApp(head, a, None)
        return head

    # full normalization ----------------------------------------------------

    def normal_form(self, t: T.Term) -> T.Term:
        memo = self.rules._nf_memo
        hit = memo.get(t)
        if hit is not None:
            result, chunk = hit
            if chunk:
                self._spend(len(chunk))
                self.trace.extend(chunk)
            return result
        mark = len(self.trace)
        result = self._normalize(t)
        if len(memo) >= _MEMO_CAP:
            memo.clear()
        memo[t] = (result, tuple(self.trace[mark:]))
        return result

    def _normalize(self, t0: T.Term) -> T.Term:
        """Weak head everywhere beneath constructor roots, iteratively."""
        results: list[T.Term] = []
        work: list[tuple[int, T.Term]] = [(0, t0)]  # 0 visit, 1 rebuild
        counts: list[tuple[T.Term, list[T.Term], int]] = []
        while work:
            phase, t = work.pop()
            if phase == 0:
                w = self.whnf(t)
                head, args = T.unwind_spine(w)
                if isinstance(head, T.TCon) and args:
                    counts.append((head, args, len(args)))
                    work.append((1, w))
                    for a in reversed(args):
                        work.append((0, a))
                else:
                    results.append(w)
            else:
                head, args, n = counts.pop()
                done = results[-n:]
                del results[-n:]
                if all(d is a for d, a in zip(done, args)):
                    results.append(t)
                else:
                    results.append(self._rebuild_con(head, done))
        assert len(results) == 1
        return results[0]


def whnf(
    term: T.Term,
    rules: RuleSet,
    budget: int = DEFAULT_BUDGET,
    step_base: int = 0,
) -> tuple[T.Term, StepTrace]:
    """Reduce until the root is a constructor, literal, lambda, or
    under-applied function.  Raises EngineError; the input term stays valid."""
    req = _Request(rules, budget)
    try:
        out = req.whnf(term)
    except RecursionError:
        raise EngineError("reduction nested too deeply") from None
    return out, StepTrace(req.trace, step_base)


def normal_form(
    term: T.Term,
    rules: RuleSet,
    budget: int = DEFAULT_BUDGET,
    step_base: int = 0,
) -> tuple[T.Term, StepTrace]:
    """Fully reduce the root and all constructor arguments (head elements)."""
    req = _Request(rules, budget)
    try:
        out = req.normal_form(term)
    except RecursionError:
        raise EngineError("reduction nested too deeply") from None
    return out, StepTrace(req.trace, step_base)


term_size = T.term_size
