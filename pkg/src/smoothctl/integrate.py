"""Fixed-step RK4 propagation of the coupled pair dynamics.

Two equivalent routes are provided: driving the pair with controls obtained
from the reduction-matrix inverse at each step, and advancing the reduced
eight-real ODE system directly. Both renormalize the two unit 4-vectors
every step, which is exactly the projection back onto the group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .invariants import InvariantPoint, UnitaryPair, invariants_of
from .planner import TrajectorySpec
from .reduction import SingularReduction, control_from_reals
from .su2 import Su2, Su2Algebra

DEFAULT_STEP = 1e-3


class StartMismatch(Exception):
    """Initial pair does not project onto the trajectory's start point."""


@dataclass(frozen=True)
class SystemParams:
    gamma: float
    step: float = DEFAULT_STEP

    def __post_init__(self):
        if abs(abs(self.gamma) - 1.0) < 1e-12:
            raise ValueError("|gamma| = 1 is excluded by the model")
        if self.step <= 0.0:
            raise ValueError("step must be positive")


@dataclass
class ControlSignal:
    """Sampled (t, ux, uy, uz) series with endpoint/seam metadata."""

    times: np.ndarray
    values: np.ndarray  # shape (N, 3)
    zero_start: bool = True
    zero_end: bool = True
    seams: List[int] = field(default_factory=list)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if len(self.times) != len(self.values):
            raise ValueError("times/values length mismatch")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def value_at(self, t: float) -> np.ndarray:
        """Linear interpolation between samples, clamped at the ends."""
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        if i < 0:
            return self.values[0].copy()
        if i >= len(self.times) - 1:
            return self.values[-1].copy()
        t0, t1 = self.times[i], self.times[i + 1]
        w = (t - t0) / (t1 - t0)
        return (1.0 - w) * self.values[i] + w * self.values[i + 1]

    def concat(self, other: "ControlSignal") -> "ControlSignal":
        """Append a signal whose clock restarts at zero; a seam marker is
        recorded at the junction."""
        offset = self.times[-1]
        keep = other.times > 1e-15
        times = np.concatenate([self.times, offset + other.times[keep]])
        values = np.concatenate([self.values, other.values[keep]])
        seams = self.seams + [len(self.times) - 1] + [
            len(self.times) + s for s in other.seams]
        return ControlSignal(times, values, self.zero_start, other.zero_end,
                             seams)

    def max_jump(self) -> float:
        if len(self.values) < 2:
            return 0.0
        return float(np.max(np.linalg.norm(np.diff(self.values, axis=0),
                                           axis=1)))

    def rotated(self, rot: np.ndarray) -> "ControlSignal":
        return ControlSignal(self.times.copy(), self.values @ rot.T,
                             self.zero_start, self.zero_end, list(self.seams))

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("t,ux,uy,uz\n")
            for t, u in zip(self.times, self.values):
                f.write(f"{t:.17g},{u[0]:.17g},{u[1]:.17g},{u[2]:.17g}\n")

    @classmethod
    def from_csv(cls, path) -> "ControlSignal":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if data.shape[1] != 4:
            raise ValueError("controls CSV needs columns t,ux,uy,uz")
        return cls(data[:, 0], data[:, 1:4])


@dataclass
class StateTrace:
    times: np.ndarray
    reals: np.ndarray   # (N, 8)
    coords: np.ndarray  # (N, 3)
    deltas: np.ndarray

    def to_csv(self, path) -> None:
        header = "t,xR,xI,yR,yI,zR,zI,wR,wI,x1,x2,x3,Delta\n"
        with open(path, "w") as f:
            f.write(header)
            for i, t in enumerate(self.times):
                row = (t, *self.reals[i], *self.coords[i], self.deltas[i])
                f.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _renorm(x: complex, y: complex) -> Tuple[complex, complex]:
    n = math.sqrt(abs(x) ** 2 + abs(y) ** 2)
    return x / n, y / n


def _pair_rhs(state, u, gamma):
    """d/dt of (x, y, z, w) under the control triple u."""
    x, y, z, w = state
    d = 1j * u[2]                 # diagonal generator entry
    o = 1j * u[0] + u[1]          # off-diagonal generator entry
    dx = d * x - o * y.conjugate()
    dy = d * y + o * x.conjugate()
    dz = gamma * (d * z - o * w.conjugate())
    dw = gamma * (d * w + o * z.conjugate())
    return (dx, dy, dz, dw)


def _rk4_step(state, t, h, u_of):
    """One RK4 step of the pair dynamics; u_of(t, state) -> control triple."""
    def add(s, k, c):
        return tuple(si + c * ki for si, ki in zip(s, k))

    g = u_of.gamma
    k1 = _pair_rhs(state, u_of(t, state), g)
    s2 = add(state, k1, h / 2)
    k2 = _pair_rhs(s2, u_of(t + h / 2, s2), g)
    s3 = add(state, k2, h / 2)
    k3 = _pair_rhs(s3, u_of(t + h / 2, s3), g)
    s4 = add(state, k3, h)
    k4 = _pair_rhs(s4, u_of(t + h, s4), g)
    out = tuple(s + h / 6 * (a + 2 * b + 2 * c + d)
                for s, a, b, c, d in zip(state, k1, k2, k3, k4))
    x, y = _renorm(out[0], out[1])
    z, w = _renorm(out[2], out[3])
    return (x, y, z, w)


class _ControlSource:
    """Adapter giving the RK4 loop a uniform (t, state) -> u interface."""

    def __init__(self, fn, gamma):
        self.fn = fn
        self.gamma = gamma

    def __call__(self, t, state):
        return self.fn(t, state)


def _state_of(p: UnitaryPair):
    return (p.u.x, p.u.y, p.v.x, p.v.y)


def _pair_of(state) -> UnitaryPair:
    return UnitaryPair(Su2(state[0], state[1]), Su2(state[2], state[3]))


def _reals_of(state):
    x, y, z, w = state
    return (x.real, x.imag, y.real, y.imag, z.real, z.imag, w.real, w.imag)


def integrate_pair(p0: UnitaryPair, sigma: Callable[[float], Su2Algebra],
                   params: SystemParams, t_span: Tuple[float, float]
                   ) -> Tuple[UnitaryPair, ControlSignal]:
    """Propagate dU/dt = sigma U, dV/dt = gamma sigma V over t_span."""
    t0, tf = t_span
    h = params.step
    n = max(1, int(round((tf - t0) / h)))
    h = (tf - t0) / n

    def u_fn(t, _state):
        a = sigma(t)
        if not all(math.isfinite(c) for c in a.components):
            raise ValueError(f"non-finite control at t={t}")
        return a.components

    src = _ControlSource(u_fn, params.gamma)
    state = _state_of(p0)
    times = np.empty(n + 1)
    values = np.empty((n + 1, 3))
    t = t0
    for i in range(n):
        times[i] = t
        values[i] = sigma(t).components
        state = _rk4_step(state, t, h, src)
        t = t0 + (i + 1) * h
    times[n] = tf
    values[n] = sigma(tf).components
    zs = bool(np.linalg.norm(values[0]) <= 1e-9)
    ze = bool(np.linalg.norm(values[-1]) <= 1e-9)
    return _pair_of(state), ControlSignal(times, values, zs, ze)


def steer_on_quotient(p0: UnitaryPair, spec: TrajectorySpec,
                      params: SystemParams, start_tol: float = 1e-6
                      ) -> Tuple[UnitaryPair, ControlSignal, StateTrace]:
    """Track the quotient trajectory by inverting the reduction matrix at
    every step; fails with SingularReduction if Delta collapses mid-flight."""
    iv = invariants_of(p0)
    if np.max(np.abs(iv.coords - spec.position(0.0))) > start_tol:
        raise StartMismatch(
            f"pair projects to {iv.coords}, trajectory starts at "
            f"{spec.position(0.0)}")

    h = params.step
    n = max(1, int(round(spec.t2 / h)))
    h = spec.t2 / n

    def u_fn(t, state):
        t = min(t, spec.t2)
        return control_from_reals(_reals_of(state), params.gamma,
                                  tuple(spec.velocity(t)))

    src = _ControlSource(u_fn, params.gamma)
    state = _state_of(p0)
    times = np.empty(n + 1)
    values = np.empty((n + 1, 3))
    reals = np.empty((n + 1, 8))
    coords = np.empty((n + 1, 3))
    deltas = np.empty(n + 1)

    def record(i, t, state):
        times[i] = t
        reals[i] = _reals_of(state)
        pt = invariants_of(_pair_of(state))
        coords[i] = pt.coords
        deltas[i] = pt.delta
        values[i] = u_fn(t, state)

    t = 0.0
    for i in range(n):
        record(i, t, state)
        state = _rk4_step(state, t, h, src)
        t = (i + 1) * h
    record(n, spec.t2, state)

    signal = ControlSignal(times, values,
                           zero_start=bool(np.linalg.norm(values[0]) <= 1e-9),
                           zero_end=bool(np.linalg.norm(values[-1]) <= 1e-9))
    trace = StateTrace(times, reals, coords, deltas)
    return _pair_of(state), signal, trace


def reduced_rhs(state, abc, gamma: float) -> np.ndarray:
    """Right-hand side of the reduced eight-real system.

    Obtained from the pair dynamics by eliminating the control in favor of
    the quotient velocity (a, b, c); valid only where Delta != 0.
    """
    xR, xI, yR, yI, zR, zI, wR, wI = state
    a, b, c = abc
    g = gamma
    d1 = zI * yR - xI * wR
    d2 = zI * yI - xI * wI
    d3 = wR * yI - wI * yR
    D = d1 * d1 + d2 * d2 + d3 * d3
    if D == 0.0:
        raise ZeroDivisionError("Delta = 0: reduced system undefined")
    Z = xI * zI + yR * wR + yI * wI
    g1 = g * (g - 1.0)
    fU = g * g * zR * a + g * c + g * b * xR
    fV = g * zR * a + g * c + xR * b
    return np.array([
        a,
        ((1 - g) * d3 * b + fU * (xR * d3 - yI * d2 - yR * d1)
         + g1 * a * (d3 * Z + xR * (wI * d2 + wR * d1))) / (g1 * D),
        ((g - 1) * d2 * b + fU * (xI * d1 - xR * d2 - yI * d3)
         + g1 * a * (-d2 * Z + xR * (wI * d3 - zI * d1))) / (g1 * D),
        ((1 - g) * d1 * b + fU * (xR * d1 + xI * d2 + yR * d3)
         + g1 * a * (d1 * Z - xR * (wR * d3 + zI * d2))) / (g1 * D),
        b,
        (g1 * d3 * a + fV * (zR * d3 - wR * d1 - wI * d2)
         + (1 - g) * b * (d3 * Z + zR * (yR * d1 + yI * d2))) / ((g - 1) * D),
        (g * (1 - g) * d2 * a + fV * (zI * d1 - d3 * wI - zR * d2)
         + (g - 1) * b * (d2 * Z + zR * (xI * d1 - yI * d3))) / ((g - 1) * D),
        (g1 * d1 * a + fV * (d1 * zR + zI * d2 + wR * d3)
         + (g - 1) * b * (-d1 * Z + zR * (yR * d3 + xI * d2))) / ((g - 1) * D),
    ])


def integrate_reduced(p0: UnitaryPair, spec: TrajectorySpec,
                      params: SystemParams, start_tol: float = 1e-6
                      ) -> UnitaryPair:
    """Advance the reduced system directly; agrees with steer_on_quotient."""
    iv = invariants_of(p0)
    if np.max(np.abs(iv.coords - spec.position(0.0))) > start_tol:
        raise StartMismatch("pair does not project onto trajectory start")
    h = params.step
    n = max(1, int(round(spec.t2 / h)))
    h = spec.t2 / n
    state = np.array(p0.reals)

    def rhs(t, s):
        return reduced_rhs(s, spec.velocity(min(t, spec.t2)), params.gamma)

    t = 0.0
    for i in range(n):
        k1 = rhs(t, state)
        k2 = rhs(t + h / 2, state + h / 2 * k1)
        k3 = rhs(t + h / 2, state + h / 2 * k2)
        k4 = rhs(t + h, state + h * k3)
        state = state + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        state[:4] /= np.linalg.norm(state[:4])
        state[4:] /= np.linalg.norm(state[4:])
        t = (i + 1) * h
    return UnitaryPair.from_reals(state)
