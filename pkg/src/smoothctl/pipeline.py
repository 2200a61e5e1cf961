"""End-to-end design flow: preliminary pulse, quotient-space tracking,
gauge correction, and an independent re-integration check of the exported
signal. Singular targets are handled by splitting into two regular legs.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .gauge import conjugate_signal, solve_gauge, split_singular_target
from .integrate import ControlSignal, StateTrace, SystemParams, integrate_pair, \
    steer_on_quotient
from .invariants import UnitaryPair, delta_of, invariants_of, is_singular
from .planner import DELTA_FLOOR, TrajectorySpec, ValidationReport, \
    plan_cubic, validate
from .prelim import PrelimParams, prelim_sigma, prelim_unitary
from .su2 import Su2, Su2Algebra


class ValidationFailure(Exception):
    """Planned quotient trajectory leaves the feasible region."""

    def __init__(self, report: ValidationReport):
        super().__init__(f"trajectory invalid: {report.reason} "
                         f"at t={report.violation_time}")
        self.report = report


def fidelity(a: Su2, b: Su2) -> Tuple[float, int]:
    """Gate fidelity |tr(a^dag b)|/2 and the global sign that matches."""
    tr = (a.dagger() @ b).trace()
    f = abs(tr) / 2.0
    sign = 1 if tr.real >= 0 else -1
    return min(1.0, float(f)), sign


@dataclass
class DesignReport:
    achieved: UnitaryPair
    gauges: List[Su2]
    fidelity_u: float
    fidelity_v: float
    sign_u: int
    sign_v: int
    invariant_residual: float
    min_delta: float
    max_amplitude: float
    max_jump: float
    zero_endpoints: bool
    split_target: bool
    elapsed: float
    signal: ControlSignal
    traces: List[StateTrace] = field(default_factory=list)
    validations: List[ValidationReport] = field(default_factory=list)
    specs: List[TrajectorySpec] = field(default_factory=list)
    prelim_t1: float = 1.0

    @property
    def passed(self) -> bool:
        return (self.fidelity_u >= 0.9999 and self.fidelity_v >= 0.9999
                and self.zero_endpoints)

    def to_text(self) -> str:
        lines = [
            f"passed = {self.passed}",
            f"fidelity_u = {self.fidelity_u:.12f}",
            f"fidelity_v = {self.fidelity_v:.12f}",
            f"sign_u = {self.sign_u:+d}",
            f"sign_v = {self.sign_v:+d}",
            f"invariant_residual = {self.invariant_residual:.6e}",
            f"min_delta = {self.min_delta:.6e}",
            f"max_amplitude = {self.max_amplitude:.6f}",
            f"max_jump = {self.max_jump:.6e}",
            f"zero_endpoints = {self.zero_endpoints}",
            f"split_target = {self.split_target}",
            f"legs = {len(self.gauges)}",
            f"elapsed_seconds = {self.elapsed:.3f}",
        ]
        for i, k in enumerate(self.gauges):
            lines.append(f"gauge_{i}_x = {k.x.real:.12f},{k.x.imag:.12f}")
            lines.append(f"gauge_{i}_y = {k.y.real:.12f},{k.y.imag:.12f}")
        return "\n".join(lines) + "\n"


def signal_sigma(signal: ControlSignal):
    """Wrap a sampled signal as a callable control generator."""
    def sigma(t: float) -> Su2Algebra:
        return Su2Algebra(*signal.value_at(t))
    return sigma


def integrate_signal(signal: ControlSignal, gamma: float,
                     step: float = 1e-3) -> UnitaryPair:
    """Independent re-integration of an exported signal from the identity."""
    params = SystemParams(gamma=gamma, step=step)
    pair, _ = integrate_pair(UnitaryPair.identity(), signal_sigma(signal),
                             params, (0.0, float(signal.times[-1])))
    return pair


def design_leg(target: UnitaryPair, gamma: float,
               prelim: PrelimParams = PrelimParams(), t2: float = 10.0,
               step: float = 1e-3, delta_floor: float = DELTA_FLOOR
               ) -> Tuple[UnitaryPair, Su2, ControlSignal, StateTrace,
                          ValidationReport, TrajectorySpec]:
    """One regular-target leg: preliminary pulse, cubic tracking, gauge fix.

    Returns (achieved pair before gauge, K, gauge-corrected signal for the
    whole leg, quotient trace, validation report).
    """
    params = SystemParams(gamma=gamma, step=step)
    p1, sig1 = integrate_pair(
        UnitaryPair.identity(),
        lambda t: prelim_sigma(prelim, min(t, prelim.t1)),
        params, (0.0, prelim.t1))
    p1 = UnitaryPair(prelim_unitary(prelim, prelim.t1), p1.v)

    spec = plan_cubic(invariants_of(p1), invariants_of(target), t2)
    report = validate(spec, delta_floor=delta_floor)
    if not report.passed:
        raise ValidationFailure(report)

    achieved, sig2, trace = steer_on_quotient(p1, spec, params)
    k = solve_gauge(achieved, target)
    leg_signal = conjugate_signal(k, sig1.concat(sig2))
    return achieved, k, leg_signal, trace, report, spec


def design(target: UnitaryPair, gamma: float,
           prelim: PrelimParams = PrelimParams(), t2: float = 10.0,
           step: float = 1e-3, delta_floor: float = DELTA_FLOOR,
           seed: int = 0) -> DesignReport:
    """Full design flow; splits singular targets into two regular legs."""
    t_start = time.perf_counter()
    split = is_singular(target) or delta_of(target) < delta_floor
    if split:
        first, second = split_singular_target(target, seed,
                                              delta_floor=delta_floor)
        legs = [first, second]
    else:
        legs = [target]

    gauges: List[Su2] = []
    traces: List[StateTrace] = []
    validations: List[ValidationReport] = []
    specs: List[TrajectorySpec] = []
    full: Optional[ControlSignal] = None
    achieved = None
    leg_t2 = t2 / len(legs)
    for leg in legs:
        achieved, k, sig, trace, rep, spec = design_leg(
            leg, gamma, prelim=prelim, t2=leg_t2, step=step,
            delta_floor=delta_floor)
        gauges.append(k)
        traces.append(trace)
        validations.append(rep)
        specs.append(spec)
        full = sig if full is None else full.concat(sig)

    final = integrate_signal(full, gamma, step=step)
    fu, su = fidelity(final.u, target.u)
    fv, sv = fidelity(final.v, target.v)
    inv_res = float(np.max(np.abs(
        invariants_of(final).coords - invariants_of(target).coords)))
    min_delta = min(float(tr.deltas.min()) for tr in traces)
    return DesignReport(
        achieved=achieved,
        gauges=gauges,
        fidelity_u=fu, fidelity_v=fv, sign_u=su, sign_v=sv,
        invariant_residual=inv_res,
        min_delta=min_delta,
        max_amplitude=float(np.max(np.abs(full.values))),
        max_jump=full.max_jump(),
        zero_endpoints=bool(full.zero_start and full.zero_end),
        split_target=split,
        elapsed=time.perf_counter() - t_start,
        signal=full,
        traces=traces,
        validations=validations,
        specs=specs,
        prelim_t1=prelim.t1,
    )
