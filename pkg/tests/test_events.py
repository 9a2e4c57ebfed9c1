import io
import queue
import threading
import time

import pytest

from termbeat import terms as T
from termbeat.engine import BudgetExhausted, UnboundIdentifier
from termbeat.events import (
    Controller,
    Emit,
    LogSink,
    Machine,
    MachineStatus,
    MalformedElement,
    NoteOff,
    NoteOn,
    Notify,
    OutputEvent,
    Pause,
    ProgramChange,
    Realtime,
    Restart,
    Resume,
    SetMode,
    SingleStep,
    SlowMotion,
    Step,
    Stop,
    Wait,
    classify_element,
    format_event,
    run,
    write_event_log,
)

from .conftest import (
    DIVERGE_DIR,
    GOLDEN_MELODY_LOG,
    LOOP_DIR,
    MELODY_DIR,
    collect_events,
    machine_for,
)
from .test_engine import rules_of, term_of


def wait_until(pred, timeout=5.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if pred():
            return True
        time.sleep(0.005)
    return False


def start_loop(machine, mode, inbox, events, **kw):
    done = {}

    def target():
        done["status"] = run(machine, mode, events.append, inbox, **kw)

    thread = threading.Thread(target=target, daemon=True)
    thread.start()
    return thread, done


# element classification -------------------------------------------------------


def test_classify_wait():
    assert classify_element(term_of("Wait 200")) == Wait(200)


def test_classify_note_on_defaults_to_channel_zero():
    payload = classify_element(term_of("Event (On 60 64)"))
    assert payload.message.channel == 0
    assert payload.message.kind == NoteOn(60, 64)


def test_classify_channel_wrapper():
    payload = classify_element(term_of("Event (Channel 3 (Off 60 0))"))
    assert payload.message.channel == 3
    assert payload.message.kind == NoteOff(60, 0)


def test_classify_program_change_and_controller():
    assert classify_element(term_of("Event (PgmChange 5)")).message.kind == ProgramChange(5)
    assert classify_element(term_of("Event (Controller 1 64)")).message.kind == Controller(1, 64)


def test_negative_wait_is_malformed():
    bad = T.make_app(T.TCon("Wait", None), [T.TInt(-5, None)])
    with pytest.raises(MalformedElement) as exc:
        classify_element(bad)
    assert "out of range" in exc.value.reason
    assert "negate 5" in exc.value.rendering


def test_pitch_and_channel_ranges():
    with pytest.raises(MalformedElement, match="out of range"):
        classify_element(term_of("Event (On 128 64)"))
    with pytest.raises(MalformedElement, match="out of range"):
        classify_element(term_of("Event (Channel 16 (On 60 64))"))
    classify_element(term_of("Event (Channel 15 (On 127 127))"))


def test_channel_wraps_only_once():
    with pytest.raises(MalformedElement, match="only once"):
        classify_element(term_of("Event (Channel 1 (Channel 2 (On 60 64)))"))


def test_unknown_constructors_are_malformed():
    with pytest.raises(MalformedElement, match="unknown element constructor"):
        classify_element(term_of("Boom 1"))
    with pytest.raises(MalformedElement, match="unknown message constructor"):
        classify_element(term_of("Event (Blip 3)"))


def test_non_constructor_heads_are_malformed():
    with pytest.raises(MalformedElement, match="not an event constructor"):
        classify_element(term_of("5"))
    with pytest.raises(MalformedElement, match="not a constructor"):
        classify_element(term_of("Event 5"))


def test_wrong_arities_are_malformed():
    with pytest.raises(MalformedElement, match="one duration"):
        classify_element(term_of("Wait 1 2"))
    with pytest.raises(MalformedElement, match="pitch and velocity"):
        classify_element(term_of("Event (On 60)"))


def test_non_integer_duration_is_malformed():
    with pytest.raises(MalformedElement, match="not an integer"):
        classify_element(term_of("Wait (1 : [])"))


# machine ------------------------------------------------------------------------


def test_melody_machine_matches_the_golden_log():
    machine = machine_for(MELODY_DIR)
    events = collect_events(machine)
    log = "".join(format_event(e) + "\n" for e in events)
    assert log == GOLDEN_MELODY_LOG
    assert machine.status is MachineStatus.FINISHED
    assert machine.element_count == 18
    assert machine.elapsed_ms == 1600


def test_looped_melody_is_periodic():
    machine = machine_for(LOOP_DIR)
    events = collect_events(machine, limit=54)
    assert machine.status is MachineStatus.RUNNING
    payloads = [e.payload for e in events]
    assert payloads[:18] == payloads[18:36] == payloads[36:54]


def test_timestamps_accumulate_only_on_waits():
    machine = machine_for(MELODY_DIR)
    first = machine.advance()[1]
    assert first.at_ms == 0
    second = machine.advance()[1]
    assert second.payload == Wait(200)
    assert second.at_ms == 200


def test_unbound_tail_flips_errored_and_swap_retries():
    machine = Machine(rules_of("main = Wait 1 : boom ;"))
    machine.advance()
    with pytest.raises(UnboundIdentifier):
        machine.advance()
    assert machine.status is MachineStatus.ERRORED
    assert machine.error is not None
    assert machine.element_count == 1
    machine.set_rules(rules_of("main = Wait 1 : boom ;\nboom = Wait 9 : [] ;"))
    machine.resume()
    assert machine.status is MachineStatus.RUNNING
    _, event = machine.advance()
    assert event.payload == Wait(9)
    assert machine.advance()[1] is None
    assert machine.status is MachineStatus.FINISHED


def test_element_error_keeps_the_element_unconsumed():
    machine = Machine(rules_of("main = Wait boom : [] ;"))
    with pytest.raises(UnboundIdentifier):
        machine.advance()
    assert machine.element_count == 0
    machine.set_rules(rules_of("main = Wait boom : [] ;\nboom = 4 + 3 ;"))
    machine.resume()
    _, event = machine.advance()
    assert event.payload == Wait(7)


def test_budget_exhaustion_preserves_the_term():
    machine = machine_for(DIVERGE_DIR, budget=100)
    with pytest.raises(BudgetExhausted) as exc:
        machine.advance()
    assert exc.value.max_steps == 100
    assert machine.status is MachineStatus.ERRORED
    assert machine.current_term is not None


def test_non_list_term_is_malformed():
    machine = Machine(rules_of("main = 42 ;"))
    with pytest.raises(MalformedElement, match="not a list"):
        machine.advance()
    assert machine.status is MachineStatus.ERRORED


def test_restart_resets_the_machine():
    machine = machine_for(MELODY_DIR)
    collect_events(machine, limit=5)
    machine.restart()
    assert machine.element_count == 0
    assert machine.elapsed_ms == 0
    assert machine.steps_taken == 0
    assert machine.status is MachineStatus.RUNNING
    assert format_event(machine.advance()[1]) == "0 on 0 60 64"


def test_steps_taken_grows_with_work():
    machine = machine_for(MELODY_DIR)
    machine.advance()
    first = machine.steps_taken
    assert first > 0
    machine.advance()
    assert machine.steps_taken > first


# run loop ------------------------------------------------------------------------


def test_slow_motion_runs_the_melody_to_the_end():
    machine = machine_for(MELODY_DIR)
    events = []
    status = run(machine, SlowMotion(0), events.append)
    assert status is MachineStatus.FINISHED
    assert "".join(format_event(e) + "\n" for e in events) == GOLDEN_MELODY_LOG


def test_realtime_sleeps_for_wait_durations():
    machine = Machine(rules_of("main = Wait 20 : Wait 20 : Wait 20 : [] ;"))
    events = []
    began = time.monotonic()
    status = run(machine, Realtime(), events.append)
    elapsed = time.monotonic() - began
    assert status is MachineStatus.FINISHED
    assert len(events) == 3
    assert elapsed >= 0.045


def test_event_log_is_mode_independent():
    text = (
        "main = Event (On 60 64) : Wait 1 : Event (Off 60 64) : Wait 2 :"
        " Event (On 62 64) : Wait 3 : Event (Off 62 64) : [] ;"
    )

    def log_for(mode, preload=()):
        machine = Machine(rules_of(text))
        inbox = queue.Queue()
        for cmd in preload:
            inbox.put(cmd)
        events = []
        run(machine, mode, events.append, inbox if preload else None)
        return [format_event(e) for e in events]

    slow = log_for(SlowMotion(0))
    fast = log_for(Realtime())
    stepped = log_for(SingleStep(), preload=[Step() for _ in range(10)])
    assert slow == fast == stepped
    assert len(slow) == 7


def test_max_elements_is_cumulative_and_swaps_land_between_elements():
    machine = Machine(rules_of("main = Wait 1 : more ;\nmore = Wait 2 : [] ;"))
    inbox = queue.Queue()
    events = []
    status = run(machine, SlowMotion(0), events.append, inbox, max_elements=1)
    assert status is MachineStatus.RUNNING
    assert [e.payload for e in events] == [Wait(1)]
    inbox.put(Notify(rules=rules_of("main = Wait 1 : more ;\nmore = Wait 9 : [] ;")))
    status = run(machine, SlowMotion(0), events.append, inbox, max_elements=2)
    assert status is MachineStatus.RUNNING
    assert [e.payload for e in events] == [Wait(1), Wait(9)]


def test_stop_is_handled_before_any_advance():
    machine = machine_for(MELODY_DIR)
    inbox = queue.Queue()
    reply: queue.SimpleQueue = queue.SimpleQueue()
    inbox.put(Stop(reply=reply))
    events = []
    status = run(machine, Realtime(), events.append, inbox)
    assert status is MachineStatus.PAUSED
    assert events == []
    assert reply.get_nowait() == (True, "")


def test_step_outside_single_step_is_rejected():
    machine = machine_for(MELODY_DIR)
    inbox = queue.Queue()
    reply: queue.SimpleQueue = queue.SimpleQueue()
    inbox.put(Step(reply=reply))
    inbox.put(Stop())
    run(machine, Realtime(), lambda e: None, inbox)
    ok, message = reply.get_nowait()
    assert not ok
    assert "single-step" in message


def test_restart_command_rewinds_before_the_next_element():
    machine = machine_for(MELODY_DIR)
    collect_events(machine, limit=5)
    inbox = queue.Queue()
    inbox.put(Restart())
    events = []
    status = run(machine, SlowMotion(0), events.append, inbox, max_elements=1)
    assert status is MachineStatus.RUNNING
    assert machine.element_count == 1
    assert format_event(events[0]) == "0 on 0 60 64"


def test_halt_on_error_returns_and_reports():
    machine = machine_for(DIVERGE_DIR, budget=100)
    calls = []
    status = run(
        machine,
        SlowMotion(0),
        lambda e: None,
        queue.Queue(),
        halt_on_error=True,
        after_advance=lambda trace, event: calls.append((trace, event)),
    )
    assert status is MachineStatus.ERRORED
    assert calls == [(None, None)]


def test_error_without_inbox_ends_the_run():
    machine = machine_for(DIVERGE_DIR, budget=50)
    assert run(machine, SlowMotion(0), lambda e: None) is MachineStatus.ERRORED


def test_pause_resume_and_stop_from_another_thread():
    machine = machine_for(LOOP_DIR)
    inbox = queue.Queue()
    events = []
    thread, done = start_loop(machine, SlowMotion(2), inbox, events)

    assert wait_until(lambda: len(events) >= 3)
    reply: queue.SimpleQueue = queue.SimpleQueue()
    inbox.put(Pause(reply=reply))
    assert reply.get(timeout=5) == (True, "")
    seen = len(events)
    time.sleep(0.05)
    assert len(events) == seen
    assert machine.status is MachineStatus.PAUSED

    inbox.put(Resume())
    assert wait_until(lambda: len(events) > seen)

    reply2: queue.SimpleQueue = queue.SimpleQueue()
    inbox.put(Stop(reply=reply2))
    assert reply2.get(timeout=5) == (True, "")
    thread.join(timeout=5)
    assert not thread.is_alive()
    assert done["status"] is MachineStatus.PAUSED


def test_single_step_produces_exactly_the_requested_elements():
    machine = machine_for(LOOP_DIR)
    inbox = queue.Queue()
    events = []
    thread, _ = start_loop(machine, SingleStep(), inbox, events)

    for _ in range(3):
        inbox.put(Step())
    assert wait_until(lambda: len(events) == 3)
    time.sleep(0.05)
    assert len(events) == 3

    inbox.put(Stop())
    thread.join(timeout=5)
    assert not thread.is_alive()


def test_stop_interrupts_a_realtime_wait():
    machine = Machine(rules_of("main = Wait 500 : Wait 500 : [] ;"))
    inbox = queue.Queue()
    events = []
    thread, done = start_loop(machine, Realtime(), inbox, events)
    assert wait_until(lambda: len(events) >= 1)
    asked = time.monotonic()
    reply: queue.SimpleQueue = queue.SimpleQueue()
    inbox.put(Stop(reply=reply))
    assert reply.get(timeout=5) == (True, "")
    assert time.monotonic() - asked < 0.3
    thread.join(timeout=5)
    assert done["status"] is MachineStatus.PAUSED


def test_set_mode_switches_midstream():
    machine = machine_for(LOOP_DIR)
    inbox = queue.Queue()
    events = []
    thread, _ = start_loop(machine, SingleStep(), inbox, events)
    inbox.put(Step())
    assert wait_until(lambda: len(events) == 1)
    inbox.put(SetMode(mode=SlowMotion(0)))
    assert wait_until(lambda: len(events) >= 20)
    inbox.put(SetMode(mode=SingleStep()))
    assert wait_until(lambda: inbox.empty())
    settled = None
    for _ in range(40):
        count = len(events)
        time.sleep(0.01)
        if len(events) == count:
            settled = count
            break
    assert settled is not None
    inbox.put(Stop())
    thread.join(timeout=5)


# event log ------------------------------------------------------------------------


def test_format_event_covers_every_kind():
    from termbeat.events import MidiMessage

    assert format_event(OutputEvent(120, Wait(80))) == "120 wait 80"
    assert format_event(OutputEvent(0, Emit(MidiMessage(NoteOn(60, 64), 0)))) == "0 on 0 60 64"
    assert format_event(OutputEvent(5, Emit(MidiMessage(NoteOff(60, 0), 2)))) == "5 off 2 60 0"
    assert format_event(OutputEvent(7, Emit(MidiMessage(ProgramChange(12), 1)))) == "7 pgm 1 12"
    assert format_event(OutputEvent(9, Emit(MidiMessage(Controller(7, 100), 3)))) == "9 ctrl 3 7 100"


def test_write_event_log_and_log_sink_agree():
    machine = machine_for(MELODY_DIR)
    events = collect_events(machine)
    whole = io.StringIO()
    write_event_log(events, whole)
    streamed = io.StringIO()
    sink = LogSink(streamed)
    for event in events:
        sink(event)
    assert whole.getvalue() == streamed.getvalue() == GOLDEN_MELODY_LOG
