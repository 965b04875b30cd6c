from __future__ import annotations

import enum
from dataclasses import asdict, dataclass


class Verdict(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"

    @classmethod
    def of(cls, ok: bool) -> "Verdict":
        return cls.SAT if ok else cls.UNSAT


class TypeViolation(RuntimeError):
    """A splitter produced a part with more splitting nodes than allowed."""


class WorkBudgetExceeded(RuntimeError):
    """A run passed its work budget; ``stats`` holds the counters at that moment."""

    def __init__(self, stats: "SolveStats"):
        super().__init__(f"work budget {stats._budget} exceeded")
        self.stats = stats


@dataclass
class SolveStats:
    work_units: int = 0
    peak_entries: int = 0
    max_type_seen: int = 0
    measured_splitting_depth: int = 0
    wall_time: float = 0.0
    peak_frames: int = 0
    views: int = 0
    bound_checks: int = 0
    bound_violations: int = 0
    # live counters, not reported
    _live_entries: int = 0
    _live_frames: int = 0
    _budget: int | None = None

    def charge(self, units: int = 1):
        """Count work; counters only grow, so passing the budget proves the final total exceeds it."""
        self.work_units += units
        if self._budget is not None and self.work_units > self._budget:
            raise WorkBudgetExceeded(self)

    def hold(self, entries: int):
        self._live_entries += entries
        if self._live_entries > self.peak_entries:
            self.peak_entries = self._live_entries

    def release(self, entries: int):
        self._live_entries -= entries

    def enter(self, depth: int, kind: int):
        self._live_frames += 1
        self.views += 1
        if self._live_frames > self.peak_frames:
            self.peak_frames = self._live_frames
        if depth > self.measured_splitting_depth:
            self.measured_splitting_depth = depth
        if kind > self.max_type_seen:
            self.max_type_seen = kind

    def leave(self):
        self._live_frames -= 1

    def check_bound(self, count: int, bound: int):
        self.bound_checks += 1
        if count > bound:
            self.bound_violations += 1

    def as_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if not k.startswith("_")}


@dataclass
class SolveResult:
    verdict: Verdict
    stats: SolveStats

    @property
    def sat(self) -> bool:
        return self.verdict is Verdict.SAT
