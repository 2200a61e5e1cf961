"""First-phase control that moves the pair off the singular stratum.

The U factor follows a prescribed two-angle curve with smoothstep-shaped
angle functions, so its control starts and ends at exactly zero; the V
factor is integrated numerically under the same control scaled by gamma.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .invariants import UnitaryPair
from .su2 import Su2, Su2Algebra


@dataclass(frozen=True)
class PrelimParams:
    """Mixing angle delta0 reached at t1, starting phase epsilon0 (rad)."""

    delta0: float = 0.5
    epsilon0: float = 1.0
    t1: float = 1.0

    def __post_init__(self):
        if self.t1 <= 0.0:
            raise ValueError("t1 must be positive")
        if math.sin(self.delta0) == 0.0:
            raise ValueError("delta0 must not be a multiple of pi")
        if self.epsilon0 == 0.0:
            raise ValueError("epsilon0 must be nonzero")


def _check_time(params: PrelimParams, t: float) -> None:
    if t < -1e-12 or t > params.t1 + 1e-12:
        raise ValueError(f"t={t} outside [0, {params.t1}]")


def shape_functions(params: PrelimParams, t: float):
    """(delta, epsilon, d delta/dt, d epsilon/dt) at time t.

    delta ramps 0 -> delta0 and epsilon ramps epsilon0 -> 0 along the cubic
    smoothstep 3s^2 - 2s^3, so both derivatives vanish at both endpoints.
    """
    _check_time(params, t)
    s = t / params.t1
    ramp = 3.0 * s * s - 2.0 * s**3
    dramp = 6.0 * (s - s * s) / params.t1
    return (params.delta0 * ramp,
            params.epsilon0 * (1.0 - ramp),
            params.delta0 * dramp,
            -params.epsilon0 * dramp)


def prelim_unitary(params: PrelimParams, t: float) -> Su2:
    """Closed-form U factor of the preliminary phase."""
    d, e, _, _ = shape_functions(params, t)
    return Su2(complex(math.cos(d)), cmath.exp(1j * e) * math.sin(d))


def prelim_sigma(params: PrelimParams, t: float) -> Su2Algebra:
    """Control generator dU/dt U^dagger of the prescribed U curve."""
    d, e, dd, de = shape_functions(params, t)
    off = (dd + 0.5j * de * math.sin(2.0 * d)) * cmath.exp(1j * e)
    return Su2Algebra(off.imag, off.real, de * math.sin(d) ** 2)


def run_preliminary(params: PrelimParams, gamma: float,
                    step: float = 1e-3) -> UnitaryPair:
    """Propagate the preliminary phase: U in closed form, V by RK4."""
    from .integrate import SystemParams, integrate_pair

    sys = SystemParams(gamma=gamma, step=step)
    pair, _ = integrate_pair(
        UnitaryPair.identity(),
        lambda t: prelim_sigma(params, min(t, params.t1)),
        sys, (0.0, params.t1))
    # U is known exactly; keep only the integrated V factor
    return UnitaryPair(prelim_unitary(params, params.t1), pair.v)
