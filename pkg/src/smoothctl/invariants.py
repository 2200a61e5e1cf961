"""Quotient coordinates for SU(2) x SU(2) under simultaneous conjugation.

A pair p = (U, V) is coordinatized by eight reals
(xR, xI, yR, yI, zR, zI, wR, wI); the orbit through p is pinned down by the
three invariants (x1, x2, x3) together with the regularity scalar Delta.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .su2 import Su2, conjugate

COMMUTATOR_TOL = 1e-9
DELTA_SQ_TOL = 1e-18


@dataclass(frozen=True)
class UnitaryPair:
    u: Su2
    v: Su2

    @classmethod
    def identity(cls) -> "UnitaryPair":
        return cls(Su2.identity(), Su2.identity())

    @classmethod
    def from_reals(cls, r) -> "UnitaryPair":
        xR, xI, yR, yI, zR, zI, wR, wI = r
        return cls(Su2(complex(xR, xI), complex(yR, yI)),
                   Su2(complex(zR, zI), complex(wR, wI)))

    @property
    def reals(self):
        u, v = self.u, self.v
        return (u.x.real, u.x.imag, u.y.real, u.y.imag,
                v.x.real, v.x.imag, v.y.real, v.y.imag)

    def conjugated_by(self, k: Su2) -> "UnitaryPair":
        return UnitaryPair(conjugate(k, self.u), conjugate(k, self.v))


@dataclass(frozen=True)
class InvariantPoint:
    x1: float
    x2: float
    x3: float
    delta: float

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])


@dataclass(frozen=True)
class OrbitCylinderCoord:
    """Solid-cylinder orbit coordinates: height phi, disc point, and the
    degenerate-segment eigenphase psi (only set when phi is 0 or pi)."""

    phi: float
    disc: Optional[complex]
    psi: Optional[float] = None


def invariants_of(p: UnitaryPair) -> InvariantPoint:
    xR, xI, yR, yI, zR, zI, wR, wI = p.reals
    x3 = xI * zI + wR * yR + wI * yI
    delta = (1.0 - xR * xR) * (1.0 - zR * zR) - x3 * x3
    return InvariantPoint(xR, zR, x3, max(delta, 0.0))


def deltas_of(p: UnitaryPair):
    """The three bilinears whose squared sum is the regularity scalar."""
    xR, xI, yR, yI, zR, zI, wR, wI = p.reals
    return (zI * yR - xI * wR, zI * yI - xI * wI, wR * yI - wI * yR)


def delta_of(p: UnitaryPair) -> float:
    d1, d2, d3 = deltas_of(p)
    return d1 * d1 + d2 * d2 + d3 * d3


def is_singular(p: UnitaryPair, tol: float = COMMUTATOR_TOL) -> bool:
    """True iff U and V commute (Frobenius norm of the commutator <= tol)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    U, V = p.u.matrix, p.v.matrix
    return bool(np.linalg.norm(U @ V - V @ U) <= tol)


def eig_phase_sorted(m: np.ndarray):
    """Eigendecomposition with the eigenvalue of phase in (0, pi] first."""
    vals, vecs = np.linalg.eig(m)
    idx = np.argsort(-np.angle(vals))
    return vals[idx], vecs[:, idx]


_SEGMENT_TOL = 1e-9


def cylinder_coords(p: UnitaryPair) -> OrbitCylinderCoord:
    """Map an orbit to the solid cylinder: phi from U's eigenphases; for
    0 < phi < pi the disc point is the (1,1) entry of V in U's eigenbasis;
    on the degenerate end segments only V's eigenphase psi survives."""
    phi = math.acos(min(1.0, max(-1.0, p.u.x.real)))
    if phi <= _SEGMENT_TOL or phi >= math.pi - _SEGMENT_TOL:
        psi = math.acos(min(1.0, max(-1.0, p.v.x.real)))
        return OrbitCylinderCoord(phi=phi, disc=None, psi=psi)
    _, S = eig_phase_sorted(p.u.matrix)
    disc = complex((S.conj().T @ p.v.matrix @ S)[0, 0])
    return OrbitCylinderCoord(phi=phi, disc=disc)
