"""Cubic quotient-space trajectories with zero endpoint velocity, plus the
feasibility gate that keeps them inside the regular region.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .invariants import InvariantPoint

DELTA_FLOOR = 1e-4


def _as_coords(point) -> np.ndarray:
    if isinstance(point, InvariantPoint):
        return point.coords
    a = np.asarray(point, dtype=float)
    if a.shape != (3,):
        raise ValueError("invariant point must have three coordinates")
    return a


@dataclass(frozen=True)
class TrajectorySpec:
    """start + (goal-start) * (3 s^2 - 2 s^3), s = t / t2, per coordinate."""

    t2: float
    start: np.ndarray
    goal: np.ndarray

    def position(self, t: float) -> np.ndarray:
        s = t / self.t2
        return self.start + (self.goal - self.start) * (3.0 * s * s - 2.0 * s**3)

    def velocity(self, t: float) -> np.ndarray:
        if t < -1e-12 or t > self.t2 + 1e-12:
            raise ValueError(f"t={t} outside [0, {self.t2}]")
        s = t / self.t2
        return (self.goal - self.start) * 6.0 * (s - s * s) / self.t2

    def delta(self, t: float) -> float:
        x1, x2, x3 = self.position(t)
        return (1.0 - x1 * x1) * (1.0 - x2 * x2) - x3 * x3


def plan_cubic(start, goal, t2: float) -> TrajectorySpec:
    if t2 <= 0.0:
        raise ValueError("t2 must be positive")
    return TrajectorySpec(t2=t2, start=_as_coords(start), goal=_as_coords(goal))


@dataclass
class ValidationReport:
    passed: bool
    min_delta: float
    violation_time: Optional[float] = None
    reason: Optional[str] = None
    times: np.ndarray = field(default_factory=lambda: np.empty(0))
    delta_trace: np.ndarray = field(default_factory=lambda: np.empty(0))


def validate(spec: TrajectorySpec, samples: int = 1000,
             delta_floor: float = DELTA_FLOOR) -> ValidationReport:
    """Grid check: |x1|, |x2| < 1, the x3 box constraint, and Delta >= floor.

    The report carries the Delta trace for plotting/inspection; on failure
    it pinpoints the first violating time.
    """
    if samples < 100:
        raise ValueError("need at least 100 validation samples")
    ts = np.linspace(0.0, spec.t2, samples)
    pos = np.array([spec.position(t) for t in ts])
    x1, x2, x3 = pos[:, 0], pos[:, 1], pos[:, 2]
    deltas = (1.0 - x1**2) * (1.0 - x2**2) - x3**2
    report = ValidationReport(passed=True, min_delta=float(deltas.min()),
                              times=ts, delta_trace=deltas)

    def fail(mask, reason):
        i = int(np.argmax(mask))
        report.passed = False
        report.violation_time = float(ts[i])
        report.reason = reason
        return report

    if np.any(np.abs(x1) >= 1.0):
        return fail(np.abs(x1) >= 1.0, "|x1| reached 1")
    if np.any(np.abs(x2) >= 1.0):
        return fail(np.abs(x2) >= 1.0, "|x2| reached 1")
    box = (x3 < -1.0 - x1 * x2 - 1e-12) | (x3 > 1.0 - x1 * x2 + 1e-12)
    if np.any(box):
        return fail(box, "x3 outside the Schwartz box")
    if np.any(deltas < delta_floor):
        return fail(deltas < delta_floor, "Delta below floor")
    return report


def export_csv(spec: TrajectorySpec, path, samples: int = 1001) -> None:
    ts = np.linspace(0.0, spec.t2, samples)
    with open(path, "w") as f:
        f.write("t,x1,x2,x3,dx1,dx2,dx3,Delta\n")
        for t in ts:
            p = spec.position(t)
            v = spec.velocity(t)
            f.write(",".join(f"{val:.17g}" for val in
                             (t, *p, *v, spec.delta(t))) + "\n")
