"""One live session: program store + machine + run loop + state feed.

HTTP handlers mutate the module store under the session lock and poke the
run loop through its command inbox; the loop owns the machine and is the
only thread that touches it.  Every advance and every command produces a
fresh immutable snapshot that is pushed to all feed subscribers.
"""

from __future__ import annotations

import queue
import threading
from collections import deque
from dataclasses import dataclass

from termbeat import events as E
from termbeat import program as P
from termbeat.engine import DEFAULT_BUDGET, StepTrace
from termbeat.highlights import EMPTY_HIGHLIGHTS, HighlightSet, HighlightTracker
from termbeat.render import render_term
from termbeat.source import SourceError, SourceRange

RENDER_DEPTH = 24
RECENT_WINDOW = 64


@dataclass(frozen=True, slots=True)
class SessionSnapshot:
    program_version: int
    machine_status: str
    error_message: str | None
    mode: E.ExecutionMode
    elapsed_ms: int
    element_count: int
    rendered_term: str
    latest_highlights: HighlightSet
    recent_events: tuple[E.OutputEvent, ...]


def mode_to_json(mode: E.ExecutionMode) -> dict:
    if isinstance(mode, E.Realtime):
        return {"kind": "realtime"}
    if isinstance(mode, E.SlowMotion):
        return {"kind": "slow", "pauseMs": mode.pause_ms}
    return {"kind": "step"}


def parse_mode(name: str, pause_ms: int | None = None) -> E.ExecutionMode:
    if name == "realtime":
        return E.Realtime()
    if name == "slow":
        pause = 0 if pause_ms is None else pause_ms
        if pause < 0:
            raise ValueError("pauseMs must be >= 0")
        return E.SlowMotion(pause)
    if name == "step":
        return E.SingleStep()
    raise ValueError(f"unknown mode `{name}`")


def range_to_json(r: SourceRange) -> dict:
    return {
        "module": r.module,
        "startLine": r.start_line,
        "startCol": r.start_col,
        "endLine": r.end_line,
        "endCol": r.end_col,
    }


def event_to_json(event: E.OutputEvent) -> dict:
    p = event.payload
    if isinstance(p, E.Wait):
        return {"atMs": event.at_ms, "kind": "wait", "durationMs": p.duration_ms}
    m = p.message
    k = m.kind
    if isinstance(k, E.NoteOn):
        return {"atMs": event.at_ms, "kind": "on", "channel": m.channel, "pitch": k.pitch, "velocity": k.velocity}
    if isinstance(k, E.NoteOff):
        return {"atMs": event.at_ms, "kind": "off", "channel": m.channel, "pitch": k.pitch, "velocity": k.velocity}
    if isinstance(k, E.ProgramChange):
        return {"atMs": event.at_ms, "kind": "pgm", "channel": m.channel, "program": k.program}
    return {"atMs": event.at_ms, "kind": "ctrl", "channel": m.channel, "number": k.number, "value": k.value}


def snapshot_to_json(snap: SessionSnapshot) -> dict:
    ranges = sorted(
        snap.latest_highlights.ranges,
        key=lambda r: (r.module, r.start_line, r.start_col, r.end_line, r.end_col),
    )
    return {
        "programVersion": snap.program_version,
        "machineStatus": snap.machine_status,
        "errorMessage": snap.error_message,
        "mode": mode_to_json(snap.mode),
        "elapsedMs": snap.elapsed_ms,
        "elementCount": snap.element_count,
        "renderedTerm": snap.rendered_term,
        "latestHighlights": {
            "phaseIndex": snap.latest_highlights.phase_index,
            "ranges": [range_to_json(r) for r in ranges],
        },
        "recentEvents": [event_to_json(e) for e in snap.recent_events],
    }


def _diag_json(d) -> dict:
    return {"module": d.module, "line": d.line, "col": d.col, "message": d.message}


class Session:
    def __init__(
        self,
        state: P.ProgramState,
        mode: E.ExecutionMode | None = None,
        budget: int = DEFAULT_BUDGET,
        render_depth: int = RENDER_DEPTH,
    ):
        self._lock = threading.RLock()
        self.store = state
        self.machine = E.Machine(state.compiled, budget=budget)
        self.mode: E.ExecutionMode = mode if mode is not None else E.Realtime()
        self.render_depth = render_depth
        self.tracker = HighlightTracker()
        self.inbox: queue.Queue[E.Command] = queue.Queue()
        self._recent: deque[E.OutputEvent] = deque(maxlen=RECENT_WINDOW)
        self._latest_highlights: HighlightSet = EMPTY_HIGHLIGHTS
        self._subscribers: list[queue.Queue] = []
        self._snapshot = self._build_snapshot()
        self._thread: threading.Thread | None = None

    # run loop -------------------------------------------------------------

    def start(self) -> None:
        self._thread = threading.Thread(target=self._run_loop, daemon=True)
        self._thread.start()

    def stop(self, timeout: float = 5.0) -> None:
        self.inbox.put(E.Stop())
        if self._thread is not None:
            self._thread.join(timeout)

    def _run_loop(self) -> None:
        E.run(
            self.machine,
            self.mode,
            sink=lambda event: None,
            inbox=self.inbox,
            after_advance=self._after_advance,
            after_command=self._after_command,
        )

    def _after_advance(self, trace: StepTrace | None, event: E.OutputEvent | None) -> None:
        with self._lock:
            versions = P.module_versions(self.store)
            if trace is not None and len(trace):
                self.tracker.record_steps(trace, versions)
            if event is not None:
                self._recent.append(event)
                if isinstance(event.payload, E.Wait):
                    self._latest_highlights = self.tracker.flush_on_wait(versions)
            self._publish_locked()

    def _after_command(self, cmd: E.Command) -> None:
        with self._lock:
            if isinstance(cmd, E.SetMode):
                self.mode = cmd.mode
            elif isinstance(cmd, E.Restart):
                self.tracker = HighlightTracker()
                self._latest_highlights = EMPTY_HIGHLIGHTS
                self._recent.clear()
            self._publish_locked()

    # snapshots ------------------------------------------------------------

    def _build_snapshot(self) -> SessionSnapshot:
        m = self.machine
        return SessionSnapshot(
            program_version=self.store.program_version,
            machine_status=m.status.value,
            error_message=m.error.message if m.error else None,
            mode=self.mode,
            elapsed_ms=m.elapsed_ms,
            element_count=m.element_count,
            rendered_term=render_term(m.current_term, self.render_depth),
            latest_highlights=self._latest_highlights,
            recent_events=tuple(self._recent),
        )

    def _publish_locked(self) -> None:
        snap = self._build_snapshot()
        self._snapshot = snap
        for q in self._subscribers:
            q.put(snap)

    @property
    def snapshot(self) -> SessionSnapshot:
        with self._lock:
            return self._snapshot

    def subscribe(self) -> queue.Queue:
        with self._lock:
            q: queue.Queue = queue.Queue()
            q.put(self._snapshot)
            self._subscribers.append(q)
            return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    # module access ----------------------------------------------------------

    def list_modules(self) -> list[dict]:
        with self._lock:
            return [
                {
                    "name": m.name,
                    "version": m.version,
                    "hasEditableRegion": m.has_editable_region,
                }
                for m in sorted(self.store.modules.values(), key=lambda m: m.name)
            ]

    def get_module(self, name: str) -> dict | None:
        with self._lock:
            m = self.store.modules.get(name)
            if m is None:
                return None
            return {
                "name": m.name,
                "protectedText": m.protected_text,
                "editableText": m.editable_text,
                "editableFromLine": m.ast.editable_from_line,
                "version": m.version,
            }

    # mutations --------------------------------------------------------------

    def submit_editable(self, name: str, editable_text: str, base_version: int) -> tuple[int, dict]:
        with self._lock:
            module = self.store.modules.get(name)
            if module is None:
                return 404, _result(False, [], message=f"no module `{name}`")
            if module.editable_text is None:
                return 422, _result(
                    False,
                    [{"module": name, "line": 1, "col": 1, "message": "module has no editable region"}],
                )
            if base_version != module.version:
                return 409, _result(
                    False, [], message=f"version {base_version} is stale (current {module.version})"
                )
            try:
                new_state = P.swap_editable(self.store, name, editable_text)
            except SourceError as e:
                return 422, _result(False, [_diag_json(d) for d in e.diagnostics])
            return self._install(new_state, name)

    def submit_full(self, name: str, full_text: str) -> tuple[int, dict]:
        with self._lock:
            try:
                new_state = P.swap_module(self.store, name, full_text)
            except SourceError as e:
                return 422, _result(False, [_diag_json(d) for d in e.diagnostics])
            return self._install(new_state, name)

    def _install(self, new_state: P.ProgramState, name: str) -> tuple[int, dict]:
        self.store = new_state
        self.inbox.put(E.Notify(rules=new_state.compiled))
        return 200, _result(True, [], new_version=new_state.modules[name].version)

    # control ------------------------------------------------------------------

    def control(self, command: str, mode: str | None = None, pause_ms: int | None = None) -> tuple[int, dict]:
        reply: queue.SimpleQueue = queue.SimpleQueue()
        if command == "setMode":
            if mode is None:
                return 400, {"ok": False, "message": "setMode needs a mode"}
            try:
                cmd: E.Command = E.SetMode(reply=reply, mode=parse_mode(mode, pause_ms))
            except ValueError as e:
                return 400, {"ok": False, "message": str(e)}
        elif command == "pause":
            cmd = E.Pause(reply=reply)
        elif command == "resume":
            cmd = E.Resume(reply=reply)
        elif command == "step":
            cmd = E.Step(reply=reply)
        elif command == "restart":
            cmd = E.Restart(reply=reply)
        elif command == "stop":
            cmd = E.Stop(reply=reply)
        else:
            return 400, {"ok": False, "message": f"unknown command `{command}`"}
        self.inbox.put(cmd)
        try:
            ok, message = reply.get(timeout=10.0)
        except queue.Empty:
            return 500, {"ok": False, "message": "session loop did not answer"}
        return (200 if ok else 400), {"ok": ok, "message": message}


def _result(accepted: bool, diagnostics: list, new_version: int | None = None, message: str | None = None) -> dict:
    body: dict = {"accepted": accepted, "diagnostics": diagnostics, "newVersion": new_version}
    if message:
        body["message"] = message
    return body
