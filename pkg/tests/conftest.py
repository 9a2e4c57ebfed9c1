from __future__ import annotations

from pathlib import Path

import pytest

from termbeat import Machine, MachineStatus, load_program_dir
from termbeat.engine import DEFAULT_BUDGET

REPO = Path(__file__).resolve().parents[1]
PROGRAMS = REPO / "programs"

MELODY_DIR = PROGRAMS / "melody"
LOOP_DIR = PROGRAMS / "melody_loop"
DIVERGE_DIR = PROGRAMS / "diverge"
DUET_DIR = PROGRAMS / "duet"

GOLDEN_MELODY_LOG = """0 on 0 60 64
200 wait 200
200 off 0 60 64
200 on 0 62 64
400 wait 200
400 off 0 62 64
400 on 0 64 64
600 wait 200
600 off 0 64 64
600 on 0 65 64
800 wait 200
800 off 0 65 64
800 on 0 67 64
1200 wait 400
1200 off 0 67 64
1200 on 0 67 64
1600 wait 400
1600 off 0 67 64
"""

SEVEN_NOTE_MAIN = """main =
   note qn c ++ note qn d ++ note qn e ++ note qn f ++
   note qn g ++ note qn e ++ note hn g ++ main ;
"""


def collect_events(machine: Machine, limit: int | None = None):
    """Advance until the list ends or `limit` elements were produced."""
    events = []
    while machine.status is MachineStatus.RUNNING:
        if limit is not None and len(events) >= limit:
            break
        trace, event = machine.advance()
        if event is None:
            break
        events.append(event)
    return events


def machine_for(directory: Path, budget: int = DEFAULT_BUDGET) -> Machine:
    state = load_program_dir(directory)
    return Machine(state.compiled, budget=budget)


@pytest.fixture
def melody_text() -> str:
    return (MELODY_DIR / "Melody.lhsq").read_text()


@pytest.fixture
def loop_text() -> str:
    return (LOOP_DIR / "Melody.lhsq").read_text()
