"""The reduction matrix Pi(p) mapping control components to quotient
velocities, with its closed-form determinant and adjugate inverse.

Pi(p) is singular exactly on the commuting (singular) pairs, so the inverse
map from quotient velocity to control blows up as the trajectory approaches
the stratification boundary; inversion is guarded by a hard threshold.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .invariants import UnitaryPair, delta_of
from .su2 import Su2Algebra

# relative floor on |det Pi| below which inversion is refused
DET_REL_FLOOR = 1e-8


class SingularReduction(Exception):
    """Quotient-velocity inversion requested too close to the singular part."""


def _check_gamma(gamma: float) -> None:
    if abs(abs(gamma) - 1.0) < 1e-12:
        raise ValueError("|gamma| = 1 degenerates the dynamical Lie algebra")


@dataclass(frozen=True)
class PiMatrix:
    entries: np.ndarray
    gamma: float
    det: float


def _pi_entries(r, g: float):
    xR, xI, yR, yI, zR, zI, wR, wI = r
    d1 = zI * yR - xI * wR
    d2 = zI * yI - xI * wI
    d3 = wR * yI - wI * yR
    row3 = (
        (g - 1.0) * d1 + g * zR * yI + wI * xR,
        (1.0 - g) * d2 + wR * xR + g * zR * yR,
        (g - 1.0) * d3 + xR * zI + g * zR * xI,
    )
    return ((-yI, -yR, -xI),
            (-g * wI, -g * wR, -g * zI),
            row3), (d1, d2, d3)


def pi_of(p: UnitaryPair, gamma: float) -> PiMatrix:
    _check_gamma(gamma)
    rows, (d1, d2, d3) = _pi_entries(p.reals, gamma)
    det = gamma * (gamma - 1.0) * (d1 * d1 + d2 * d2 + d3 * d3)
    return PiMatrix(np.array(rows, dtype=float), gamma, det)


def pi_det(p: UnitaryPair, gamma: float) -> float:
    _check_gamma(gamma)
    return gamma * (gamma - 1.0) * delta_of(p)


def adjugate_of(p: UnitaryPair, gamma: float) -> np.ndarray:
    """Closed-form det(Pi) * Pi^{-1}."""
    _check_gamma(gamma)
    return np.array(_adjugate_rows(p.reals, gamma), dtype=float)


def _adjugate_rows(r, g: float):
    xR, xI, yR, yI, zR, zI, wR, wI = r
    d1 = zI * yR - xI * wR
    d2 = zI * yI - xI * wI
    d3 = wR * yI - wI * yR
    g1 = g * (g - 1.0)
    return (
        (g1 * (-wR * d3 - zI * d2) + g * g * zR * d1,
         (g - 1.0) * (xI * d2 + yR * d3) + xR * d1,
         g * d1),
        (g1 * (wI * d3 - zI * d1) - g * g * zR * d2,
         (g - 1.0) * (xI * d1 - yI * d3) - xR * d2,
         -g * d2),
        (g1 * (wI * d2 + wR * d1) + g * g * zR * d3,
         -(g - 1.0) * (yI * d2 + yR * d1) + xR * d3,
         g * d3),
    )


def control_from_reals(r, gamma: float, xdot):
    """(ux, uy, uz) = Pi^{-1} xdot from the eight state reals.

    Fast scalar path shared with the integrator; raises SingularReduction
    when |det Pi| dips below DET_REL_FLOOR * |gamma (gamma-1)|.
    """
    xR, xI, yR, yI, zR, zI, wR, wI = r
    d1 = zI * yR - xI * wR
    d2 = zI * yI - xI * wI
    d3 = wR * yI - wI * yR
    g = gamma
    g1 = g * (g - 1.0)
    det = g1 * (d1 * d1 + d2 * d2 + d3 * d3)
    if abs(det) < DET_REL_FLOOR * abs(g1):
        raise SingularReduction(
            f"|det Pi| = {abs(det):.3e} below regularity threshold")
    a, b, c = xdot
    rows = _adjugate_rows(r, g)
    return (
        (rows[0][0] * a + rows[0][1] * b + rows[0][2] * c) / det,
        (rows[1][0] * a + rows[1][1] * b + rows[1][2] * c) / det,
        (rows[2][0] * a + rows[2][1] * b + rows[2][2] * c) / det,
    )


def pi_inverse_times(p: UnitaryPair, gamma: float, xdot) -> Su2Algebra:
    """Control realizing the quotient velocity xdot at the point p."""
    _check_gamma(gamma)
    return Su2Algebra(*control_from_reals(p.reals, gamma, tuple(xdot)))
