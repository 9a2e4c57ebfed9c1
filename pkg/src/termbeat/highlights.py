"""Accumulates reduced source ranges between wait phases for the UI."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from termbeat.engine import StepRecord
from termbeat.source import SourceRange


@dataclass(frozen=True, slots=True)
class HighlightSet:
    phase_index: int
    ranges: frozenset[SourceRange]


EMPTY_HIGHLIGHTS = HighlightSet(0, frozenset())


class HighlightTracker:
    """Collects redex origins; flushed on every wait event.

    Each recorded range is tagged with its module's version at record time;
    ranges whose module changed before the flush are dropped as stale.
    """

    def __init__(self) -> None:
        self._pending: dict[SourceRange, int] = {}
        self._phase = 0

    def record_steps(
        self, steps: Iterable[StepRecord], versions: Mapping[str, int]
    ) -> None:
        for step in steps:
            origin = step.redex_origin
            if origin is None:
                continue
            version = versions.get(origin.module)
            if version is None:
                continue
            self._pending[origin] = version

    def flush_on_wait(self, versions: Mapping[str, int]) -> HighlightSet:
        self._phase += 1
        ranges = frozenset(
            r for r, v in self._pending.items() if versions.get(r.module) == v
        )
        self._pending.clear()
        return HighlightSet(self._phase, ranges)

    @property
    def pending_ranges(self) -> frozenset[SourceRange]:
        return frozenset(self._pending)

    @property
    def phase_count(self) -> int:
        return self._phase
