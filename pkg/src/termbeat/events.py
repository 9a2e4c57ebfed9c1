"""Event stream: element classification, the machine, and the run loop.

The machine repeatedly takes the current term to weak head normal form; a
non-empty list yields one fully normalized head element that is classified as
a wait or a MIDI message.  Reduction failures flip the machine to Errored
with the pre-advance term retained, so a rule swap plus resume retries the
same element.
"""

from __future__ import annotations

import enum
import queue
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import IO, NoReturn, Union

from termbeat import terms as T
from termbeat.engine import (
    DEFAULT_BUDGET,
    EngineError,
    RuleSet,
    StepTrace,
    normal_form,
    whnf,
)
from termbeat.render import render_term

# MIDI messages -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class NoteOn:
    pitch: int
    velocity: int


@dataclass(frozen=True, slots=True)
class NoteOff:
    pitch: int
    velocity: int


@dataclass(frozen=True, slots=True)
class ProgramChange:
    program: int


@dataclass(frozen=True, slots=True)
class Controller:
    number: int
    value: int


MessageKind = Union[NoteOn, NoteOff, ProgramChange, Controller]


@dataclass(frozen=True, slots=True)
class MidiMessage:
    kind: MessageKind
    channel: int = 0


@dataclass(frozen=True, slots=True)
class Wait:
    duration_ms: int


@dataclass(frozen=True, slots=True)
class Emit:
    message: MidiMessage


Payload = Union[Wait, Emit]


@dataclass(frozen=True, slots=True)
class OutputEvent:
    at_ms: int
    payload: Payload


class MalformedElement(EngineError):
    def __init__(self, rendering: str, reason: str):
        super().__init__(f"malformed element: {reason}", rendering=rendering)
        self.reason = reason


def classify_element(nf: T.Term) -> Payload:
    """Recognize `Wait n` and `Event m`, m optionally `Channel c` wrapped."""
    rendering = render_term(nf)

    def bad(reason: str):
        return MalformedElement(rendering, reason)

    head, args = T.unwind_spine(nf)
    if not isinstance(head, T.TCon):
        raise bad("not an event constructor")
    if head.name == "Wait":
        if len(args) != 1:
            raise bad("Wait takes one duration")
        ms = _int_arg(args[0], 0, None, bad, "duration")
        return Wait(ms)
    if head.name != "Event":
        raise bad(f"unknown element constructor {head.name}")
    if len(args) != 1:
        raise bad("Event takes one message")
    mhead, margs = T.unwind_spine(args[0])
    if not isinstance(mhead, T.TCon):
        raise bad("message is not a constructor")
    channel = 0
    if mhead.name == "Channel":
        if len(margs) != 2:
            raise bad("Channel takes channel and message")
        channel = _int_arg(margs[0], 0, 15, bad, "channel")
        mhead, margs = T.unwind_spine(margs[1])
        if not isinstance(mhead, T.TCon):
            raise bad("message is not a constructor")
        if mhead.name == "Channel":
            raise bad("Channel may wrap a message only once")
    kind = _message_kind(mhead.name, margs, bad)
    return Emit(MidiMessage(kind, channel))


def _message_kind(name: str, args: list[T.Term], bad) -> MessageKind:
    if name == "On" or name == "Off":
        if len(args) != 2:
            raise bad(f"{name} takes pitch and velocity")
        pitch = _int_arg(args[0], 0, 127, bad, "pitch")
        velocity = _int_arg(args[1], 0, 127, bad, "velocity")
        return NoteOn(pitch, velocity) if name == "On" else NoteOff(pitch, velocity)
    if name == "PgmChange":
        if len(args) != 1:
            raise bad("PgmChange takes a program")
        return ProgramChange(_int_arg(args[0], 0, 127, bad, "program"))
    if name == "Controller":
        if len(args) != 2:
            raise bad("Controller takes number and value")
        number = _int_arg(args[0], 0, 127, bad, "controller number")
        value = _int_arg(args[1], 0, 127, bad, "controller value")
        return Controller(number, value)
    raise bad(f"unknown message constructor {name}")


def _int_arg(t: T.Term, low: int, high: int | None, bad, what: str) -> int:
    if not isinstance(t, T.TInt):
        raise bad(f"{what} is not an integer")
    if t.value < low or (high is not None and t.value > high):
        raise bad(f"{what} {t.value} out of range")
    return t.value


# execution modes and control commands ---------------------------------------


@dataclass(frozen=True, slots=True)
class Realtime:
    pass


@dataclass(frozen=True, slots=True)
class SlowMotion:
    pause_ms: int = 0


@dataclass(frozen=True, slots=True)
class SingleStep:
    pass


ExecutionMode = Union[Realtime, SlowMotion, SingleStep]


@dataclass(slots=True)
class Command:
    """Run-loop command; reply (when present) receives (ok, message)."""

    reply: "queue.SimpleQueue[tuple[bool, str]] | None" = None

    def ack(self, ok: bool, message: str = "") -> None:
        if self.reply is not None:
            self.reply.put((ok, message))


@dataclass(slots=True)
class SetMode(Command):
    mode: ExecutionMode = field(default_factory=Realtime)


@dataclass(slots=True)
class Pause(Command):
    pass


@dataclass(slots=True)
class Resume(Command):
    pass


@dataclass(slots=True)
class Step(Command):
    pass


@dataclass(slots=True)
class Restart(Command):
    pass


@dataclass(slots=True)
class Stop(Command):
    pass


@dataclass(slots=True)
class Notify(Command):
    """Wakes the loop after an out-of-band change (rule swap) to publish.

    When rules are attached the loop installs them before its next advance,
    so a swap never lands in the middle of producing an element.
    """

    rules: "RuleSet | None" = None


# the machine ----------------------------------------------------------------


class MachineStatus(enum.Enum):
    RUNNING = "running"
    PAUSED = "paused"
    ERRORED = "errored"
    FINISHED = "finished"


class Machine:
    """Holds the current term and drives one element per advance call."""

    def __init__(
        self,
        rules: RuleSet,
        term: T.Term | None = None,
        budget: int = DEFAULT_BUDGET,
    ):
        self.rules = rules
        self.current_term: T.Term = term if term is not None else T.TIdent("main", None)
        self.budget = budget
        self.elapsed_ms = 0
        self.element_count = 0
        self.steps_taken = 0
        self.status = MachineStatus.RUNNING
        self.error: EngineError | None = None

    def set_rules(self, rules: RuleSet) -> None:
        """Install a new rule snapshot; the current term is left alone."""
        self.rules = rules

    def restart(self) -> None:
        self.current_term = T.TIdent("main", None)
        self.elapsed_ms = 0
        self.element_count = 0
        self.steps_taken = 0
        self.status = MachineStatus.RUNNING
        self.error = None

    def resume(self) -> None:
        if self.status in (MachineStatus.PAUSED, MachineStatus.ERRORED):
            self.status = MachineStatus.RUNNING
            self.error = None

    def advance(self) -> tuple[StepTrace, OutputEvent | None]:
        """Produce the next element, or None when the list has ended.

        On EngineError the machine flips to Errored and re-raises.  The term
        keeps whatever reduction progress preceded the error (the element
        itself is never consumed), so a rule swap plus resume retries the
        same element.
        """
        try:
            root, head_trace = whnf(
                self.current_term, self.rules, self.budget, step_base=self.steps_taken
            )
        except EngineError as e:
            self._fail(e)
        self.current_term = root
        self.steps_taken += len(head_trace)
        head, args = T.unwind_spine(root)
        if isinstance(head, T.TCon) and head.name == "[]" and not args:
            self.status = MachineStatus.FINISHED
            return head_trace, None
        if not (isinstance(head, T.TCon) and head.name == ":" and len(args) == 2):
            self._fail(MalformedElement(render_term(root), "term is not a list"))
        element, rest = args
        try:
            nf, element_trace = normal_form(
                element, self.rules, self.budget, step_base=self.steps_taken
            )
        except EngineError as e:
            self._fail(e)
        if nf is not element:
            self.current_term = T.cons(nf, rest)
        self.steps_taken += len(element_trace)
        try:
            payload = classify_element(nf)
        except MalformedElement as e:
            self._fail(e)
        trace = StepTrace(
            list(head_trace._entries) + list(element_trace._entries),
            self.steps_taken - len(head_trace) - len(element_trace),
        )
        self.current_term = rest
        self.element_count += 1
        if isinstance(payload, Wait):
            self.elapsed_ms += payload.duration_ms
        return trace, OutputEvent(self.elapsed_ms, payload)

    def _fail(self, e: EngineError) -> NoReturn:
        self.status = MachineStatus.ERRORED
        self.error = e
        raise e


# run loop -------------------------------------------------------------------

Sink = Callable[[OutputEvent], None]
AdvanceHook = Callable[[StepTrace | None, OutputEvent | None], None]
CommandHook = Callable[[Command], None]


def run(
    machine: Machine,
    mode: ExecutionMode,
    sink: Sink,
    inbox: "queue.Queue[Command] | None" = None,
    *,
    max_elements: int | None = None,
    halt_on_error: bool = False,
    after_advance: AdvanceHook | None = None,
    after_command: CommandHook | None = None,
    clock: Callable[[], float] = time.monotonic,
) -> MachineStatus:
    """Drive the machine until it finishes, stops, or hits an element cap.

    Commands interrupt realtime sleeps immediately; Paused, Errored, and
    idle SingleStep machines block on the inbox.  SlowMotion ignores wait
    durations and pauses after every element instead; Realtime sleeps each
    wait's duration before computing the next element.
    """
    pending_steps = 0
    wake_at: float | None = None

    def handle(cmd: Command) -> bool:
        nonlocal mode, pending_steps, wake_at
        ok, message = True, ""
        if isinstance(cmd, SetMode):
            mode = cmd.mode
            wake_at = None
            pending_steps = 0
        elif isinstance(cmd, Pause):
            if machine.status is MachineStatus.RUNNING:
                machine.status = MachineStatus.PAUSED
        elif isinstance(cmd, Resume):
            machine.resume()
        elif isinstance(cmd, Step):
            if isinstance(mode, SingleStep):
                pending_steps += 1
            else:
                ok, message = False, "step is only valid in single-step mode"
        elif isinstance(cmd, Restart):
            machine.restart()
            wake_at = None
        elif isinstance(cmd, Notify):
            if cmd.rules is not None:
                machine.set_rules(cmd.rules)
        elif isinstance(cmd, Stop):
            if machine.status is MachineStatus.RUNNING:
                machine.status = MachineStatus.PAUSED
            cmd.ack(True)
            if after_command:
                after_command(cmd)
            return False
        cmd.ack(ok, message)
        if after_command:
            after_command(cmd)
        return True

    while True:
        if machine.status is MachineStatus.FINISHED:
            return machine.status

        cmd: Command | None = None
        if inbox is not None:
            blocked = machine.status in (MachineStatus.PAUSED, MachineStatus.ERRORED)
            idle_step = (
                machine.status is MachineStatus.RUNNING
                and isinstance(mode, SingleStep)
                and pending_steps == 0
            )
            if blocked or idle_step:
                cmd = inbox.get()
            elif wake_at is not None:
                remaining = wake_at - clock()
                if remaining > 0:
                    try:
                        cmd = inbox.get(timeout=remaining)
                    except queue.Empty:
                        wake_at = None
                else:
                    wake_at = None
            else:
                try:
                    cmd = inbox.get_nowait()
                except queue.Empty:
                    cmd = None
        elif wake_at is not None:
            remaining = wake_at - clock()
            if remaining > 0:
                time.sleep(remaining)
            wake_at = None
        if cmd is not None:
            if not handle(cmd):
                return machine.status
            continue
        if wake_at is not None:
            continue
        if machine.status is not MachineStatus.RUNNING:
            if inbox is None:
                return machine.status
            continue

        try:
            trace, event = machine.advance()
        except EngineError:
            if after_advance:
                after_advance(None, None)
            if halt_on_error or inbox is None:
                return machine.status
            continue

        if event is not None:
            sink(event)
        if after_advance:
            after_advance(trace, event)
        if event is None:
            continue

        if isinstance(mode, Realtime):
            if isinstance(event.payload, Wait) and event.payload.duration_ms > 0:
                wake_at = clock() + event.payload.duration_ms / 1000.0
        elif isinstance(mode, SlowMotion):
            if mode.pause_ms > 0:
                wake_at = clock() + mode.pause_ms / 1000.0
        else:
            pending_steps -= 1

        if max_elements is not None and machine.element_count >= max_elements:
            return machine.status


# event log ------------------------------------------------------------------


def format_event(event: OutputEvent) -> str:
    p = event.payload
    if isinstance(p, Wait):
        return f"{event.at_ms} wait {p.duration_ms}"
    m = p.message
    k = m.kind
    if isinstance(k, NoteOn):
        return f"{event.at_ms} on {m.channel} {k.pitch} {k.velocity}"
    if isinstance(k, NoteOff):
        return f"{event.at_ms} off {m.channel} {k.pitch} {k.velocity}"
    if isinstance(k, ProgramChange):
        return f"{event.at_ms} pgm {m.channel} {k.program}"
    return f"{event.at_ms} ctrl {m.channel} {k.number} {k.value}"


def write_event_log(events: Iterable[OutputEvent], out: IO[str]) -> None:
    for event in events:
        out.write(format_event(event) + "\n")
    out.flush()


class LogSink:
    """Writes one line per event as it happens; flushes per line."""

    def __init__(self, out: IO[str]):
        self.out = out

    def __call__(self, event: OutputEvent) -> None:
        self.out.write(format_event(event) + "\n")
        self.out.flush()
