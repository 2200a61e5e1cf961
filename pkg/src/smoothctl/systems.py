"""Two smaller right-invariant systems with closed-form control extraction:
a single spin-1/2 on SU(2) (unit-disc quotient) and a three-level Lambda
system on SU(3) (bidisc quotient).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .su2 import Su2, Su3


class SingularPoint(Exception):
    """Control extraction requested on the singular part of the quotient."""


class BoundaryPoint(Exception):
    """Coordinate conversion undefined on the quotient boundary."""


REG_TOL = 1e-9


# ---------------------------------------------------------------- single spin

def single_spin_control(u: Su2, zdot_d: complex) -> complex:
    """Complex field alpha moving the (1,1) entry with velocity zdot_d.

    The quotient coordinate is z = u11; the extraction alpha = zdot / u21
    is one-to-one while U stays non-diagonal.
    """
    u21 = -u.y.conjugate()
    if abs(u21) < REG_TOL:
        raise SingularPoint("U is diagonal: disc-boundary point")
    return zdot_d / u21


def spin_flow_matrix(alpha: complex) -> np.ndarray:
    """Generator [[0, alpha], [-alpha*, 0]] of the single-spin dynamics."""
    return np.array([[0.0, alpha], [-alpha.conjugate(), 0.0]], dtype=complex)


def steer_single_spin(target: Su2, nudge: float = 0.4, t1: float = 1.0,
                      t2: float = 4.0, step: float = 1e-3) -> Tuple[Su2, Su2]:
    """Demo pipeline on SU(2): smooth nudge off the boundary, disc-coordinate
    tracking, then a diagonal gauge fix onto the exact target.

    Returns (achieved-before-gauge, gauge-corrected final state). The target
    must be regular (not diagonal).
    """
    if abs(target.y) < 1e-6:
        raise SingularPoint("target is diagonal; split it upstream")

    # nudge: constant-phase pulse with smoothstep area, zero at both ends,
    # commuting generators, so the endpoint is known in closed form
    U = Su2(complex(math.cos(nudge)), complex(math.sin(nudge)))

    z0, z1 = U.x, target.x
    n = int(round(t2 / step))
    h = t2 / n
    t = 0.0
    m = U.matrix
    for i in range(n):
        def rhs(tt, mm):
            s = tt / t2
            zdot = (z1 - z0) * 6.0 * (s - s * s) / t2
            alpha = zdot / mm[1, 0]
            return spin_flow_matrix(alpha) @ mm
        k1 = rhs(t, m)
        k2 = rhs(t + h / 2, m + h / 2 * k1)
        k3 = rhs(t + h / 2, m + h / 2 * k2)
        k4 = rhs(t + h, m + h * k3)
        m = m + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        m = Su2.from_matrix(m).matrix
        t = (i + 1) * h
    achieved = Su2.from_matrix(m)

    # diagonal gauge: rotate the off-diagonal phase onto the target's
    phase = (target.y / achieved.y)
    theta = math.atan2(phase.imag, phase.real) / 2.0
    k = Su2(complex(math.cos(theta), math.sin(theta)), 0.0j)
    fixed = k @ achieved @ k.dagger()
    return achieved, fixed


# -------------------------------------------------------------- Lambda system

@dataclass(frozen=True)
class LambdaCoords:
    """Bidisc coordinates: z1 = u11 and the lower-block trace T."""

    z1: complex
    T: complex

    @property
    def z2(self) -> complex:
        d = 1.0 - abs(self.z1) ** 2
        if d < REG_TOL:
            raise BoundaryPoint("|z1| = 1: z2 conversion undefined")
        return (self.T.conjugate() - self.z1 * self.T) / d


def lambda_generator(alpha: complex, beta: complex) -> np.ndarray:
    """Control generator coupling level 1 to levels 2 and 3 only."""
    return np.array([
        [0.0, alpha, beta],
        [-alpha.conjugate(), 0.0, 0.0],
        [-beta.conjugate(), 0.0, 0.0],
    ], dtype=complex)


def _entries(u) -> np.ndarray:
    return u.m if isinstance(u, Su3) else np.asarray(u, dtype=complex)


def lambda_dhat(u) -> complex:
    """Regularity invariant: nonzero exactly on the regular part."""
    m = _entries(u)
    return m[0, 2].conjugate() * m[1, 0] - m[2, 0] * m[0, 1].conjugate()


def lambda_coords(u: Su3) -> LambdaCoords:
    c = LambdaCoords(z1=complex(u.m[0, 0]), T=complex(u.m[1, 1] + u.m[2, 2]))
    if abs(c.z1) >= 1.0 - REG_TOL:
        raise BoundaryPoint("|z1| = 1: singular element")
    return c


def lambda_controls(u, z1dot_d: complex, tdot_d: complex
                    ) -> Tuple[complex, complex]:
    """Solve the 2x2 linear system for (alpha, beta) realizing the requested
    velocities of (z1, T)."""
    dhat = lambda_dhat(u)
    if abs(dhat) < REG_TOL:
        raise SingularPoint("Dhat = 0: singular element")
    m = _entries(u)
    alpha = (m[0, 2].conjugate() * z1dot_d + m[2, 0] * tdot_d.conjugate()) / dhat
    beta = -(m[0, 1].conjugate() * z1dot_d + m[1, 0] * tdot_d.conjugate()) / dhat
    return alpha, beta


def canonical_su3(z1: complex, z2: complex, w: complex) -> Su3:
    """Orbit representative built from bidisc coordinates; |w| is fixed by
    unitarity of the lower block."""
    r1 = math.sqrt(max(0.0, 1.0 - abs(z1) ** 2))
    left = np.array([
        [z1, r1, 0.0],
        [-r1, z1.conjugate(), 0.0],
        [0.0, 0.0, 1.0],
    ], dtype=complex)
    wn = abs(w)
    r2 = math.sqrt(max(0.0, 1.0 - abs(z2) ** 2))
    w = w * (r2 / wn) if wn > 0 else complex(r2)
    right = np.array([
        [1.0, 0.0, 0.0],
        [0.0, z2, w],
        [0.0, -w.conjugate(), z2.conjugate()],
    ], dtype=complex)
    return Su3(left @ right)


def random_block_unitary(seed_or_rng) -> Su3:
    """Haar-like element of S(U(1) x U(2)): the symmetry group of the
    Lambda system."""
    rng = np.random.default_rng(seed_or_rng) if not isinstance(
        seed_or_rng, np.random.Generator) else seed_or_rng
    g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(g)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    d = np.linalg.det(q)
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = 1.0 / d
    m[1:, 1:] = q
    return Su3(m)


def steer_lambda(target_coords: LambdaCoords, nudge: float = 0.35,
                 t2: float = 4.0, step: float = 1e-3) -> Su3:
    """Demo pipeline on SU(3): two-direction smooth nudge off the singular
    part, then bidisc-coordinate tracking to the target orbit.

    Orbit-level only: the result shares (z1, T) with the target up to
    integration error; no SU(3) gauge solve is attempted.
    """
    # two constant-phase pulses applied in sequence would stay singular;
    # interleave both couplings with smoothstep areas instead
    t1 = 1.0
    m = np.eye(3, dtype=complex)
    n1 = int(round(t1 / step))
    h = t1 / n1
    t = 0.0

    def nudge_gen(tt):
        s = tt / t1
        d = 6.0 * (s - s * s) / t1
        return lambda_generator(nudge * d, 1j * nudge * d * (1.0 - s))

    for i in range(n1):
        k1 = nudge_gen(t) @ m
        k2 = nudge_gen(t + h / 2) @ (m + h / 2 * k1)
        k3 = nudge_gen(t + h / 2) @ (m + h / 2 * k2)
        k4 = nudge_gen(t + h) @ (m + h * k3)
        m = _reunitarize(m + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4))
        t = (i + 1) * h

    start = lambda_coords(Su3(m))
    dz = target_coords.z1 - start.z1
    dT = target_coords.T - start.T
    n2 = int(round(t2 / step))
    h = t2 / n2
    t = 0.0
    for i in range(n2):
        def rhs(tt, mm):
            s = tt / t2
            rate = 6.0 * (s - s * s) / t2
            alpha, beta = lambda_controls(mm, dz * rate, dT * rate)
            return lambda_generator(alpha, beta) @ mm
        k1 = rhs(t, m)
        k2 = rhs(t + h / 2, m + h / 2 * k1)
        k3 = rhs(t + h / 2, m + h / 2 * k2)
        k4 = rhs(t + h, m + h * k3)
        m = _reunitarize(m + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4))
        t = (i + 1) * h
    return Su3(m)


def _reunitarize(m: np.ndarray) -> np.ndarray:
    """Project onto U(3) via the polar factor, then fix det to 1."""
    u, _, vh = np.linalg.svd(m)
    q = u @ vh
    d = np.linalg.det(q)
    return q * d ** (-1.0 / 3.0)
