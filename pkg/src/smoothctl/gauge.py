"""Conjugation fix-up after orbit-level steering, singular-target splitting,
and drift removal for systems with a nonzero drift generator.
"""
from __future__ import annotations

import cmath
import math
from typing import List, Tuple

import numpy as np
import scipy.linalg

from .invariants import UnitaryPair, delta_of, invariants_of, eig_phase_sorted
from .integrate import ControlSignal
from .planner import DELTA_FLOOR
from .su2 import PAULIS, Su2, random_su2


class OrbitMismatch(Exception):
    """Achieved and target pairs do not lie on the same orbit."""


class DegenerateSpectrum(Exception):
    """First factor is +-identity: gauge solve needs a regular point."""


class SearchExhausted(Exception):
    """Random search for a regular splitting element failed."""


class BasisNotInvariant(Exception):
    """Drift conjugation leaves the span of the control basis."""


ORBIT_TOL = 1e-4
RESIDUAL_TOL = 1e-6


def solve_gauge(achieved: UnitaryPair, target: UnitaryPair,
                orbit_tol: float = ORBIT_TOL) -> Su2:
    """Find K in SU(2) with K U K^dag = U_t and K V K^dag = V_t.

    Both factors are diagonalized with the eigenvalue of phase in (0, pi)
    listed first; the remaining diagonal freedom is fixed by the off-diagonal
    entry of the second factor in that eigenbasis. Unique up to global sign
    at regular points; the sign with Re K[0,0] >= 0 is returned.
    """
    ia, it = invariants_of(achieved), invariants_of(target)
    if np.max(np.abs(ia.coords - it.coords)) > orbit_tol:
        raise OrbitMismatch(
            f"invariants differ: {ia.coords} vs {it.coords}")
    if 1.0 - achieved.u.x.real**2 < 1e-16 or 1.0 - target.u.x.real**2 < 1e-16:
        raise DegenerateSpectrum("first factor is +-identity")

    _, P = eig_phase_sorted(achieved.u.matrix)
    _, R = eig_phase_sorted(target.u.matrix)
    M = P.conj().T @ achieved.v.matrix @ P
    N = R.conj().T @ target.v.matrix @ R
    if abs(M[0, 1]) > 1e-8:
        theta = cmath.phase(N[0, 1] / M[0, 1]) / 2.0
    else:
        # near-diagonal second factor: pick the phase minimizing the residual
        grid = np.linspace(0.0, math.pi, 721)
        theta = min(grid, key=lambda th: _dres(th, M, N))
    K = R @ np.diag([cmath.exp(1j * theta), cmath.exp(-1j * theta)]) @ P.conj().T
    K = K / cmath.sqrt(np.linalg.det(K))
    k = Su2.from_matrix(K)
    if k.x.real < 0:
        k = Su2(-k.x, -k.y)
    res = (np.linalg.norm(k.matrix @ achieved.u.matrix @ k.dagger().matrix
                          - target.u.matrix)
           + np.linalg.norm(k.matrix @ achieved.v.matrix @ k.dagger().matrix
                            - target.v.matrix))
    if res > max(RESIDUAL_TOL, 10.0 * orbit_tol):
        raise OrbitMismatch(f"gauge residual {res:.3e} too large")
    return k


def _dres(theta: float, M: np.ndarray, N: np.ndarray) -> float:
    D = np.diag([cmath.exp(1j * theta), cmath.exp(-1j * theta)])
    return float(np.linalg.norm(D @ M @ D.conj().T - N))


def adjoint_rotation(k: Su2) -> np.ndarray:
    """3x3 rotation R with K (i u.sigma) K^dag = i (R u).sigma."""
    km = k.matrix
    R = np.empty((3, 3))
    for j, sj in enumerate(PAULIS):
        m = km @ sj @ km.conj().T
        for i, si in enumerate(PAULIS):
            R[i, j] = 0.5 * np.real(np.trace(si.conj().T @ m))
    return R


def conjugate_signal(k: Su2, signal: ControlSignal) -> ControlSignal:
    """Rotate the control components by the adjoint of K.

    An isometry on control space: endpoint zeros, seams and amplitudes are
    all preserved.
    """
    return signal.rotated(adjoint_rotation(k))


def split_singular_target(target: UnitaryPair, seed: int,
                          delta_floor: float = DELTA_FLOOR,
                          max_attempts: int = 64
                          ) -> Tuple[UnitaryPair, UnitaryPair]:
    """Split a (possibly singular) target into two regular legs (S, T S^-1).

    Steering to S first and then applying the control designed for T S^-1
    reaches T by right invariance.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        s = UnitaryPair(random_su2(rng), random_su2(rng))
        rest = UnitaryPair(target.u @ s.u.dagger(), target.v @ s.v.dagger())
        if delta_of(s) >= delta_floor and delta_of(rest) >= delta_floor:
            return s, rest
    raise SearchExhausted(
        f"no regular split found in {max_attempts} attempts")


def drift_rotation(drift: np.ndarray, basis: List[np.ndarray], t: float,
                   residual_tol: float = 1e-9) -> np.ndarray:
    """Orthogonal matrix a(t) with exp(-A t) B_j exp(A t) = sum_k a_kj B_k.

    The basis must be orthonormal under the real trace inner product
    Re tr(X^dag Y); a residual outside span(basis) means the subalgebra
    structure the construction relies on is violated.
    """
    m = len(basis)
    e = scipy.linalg.expm(np.asarray(drift, dtype=complex) * t)
    einv = scipy.linalg.expm(-np.asarray(drift, dtype=complex) * t)
    a = np.empty((m, m))
    for j, bj in enumerate(basis):
        conj = einv @ bj @ e
        recon = np.zeros_like(conj)
        for k, bk in enumerate(basis):
            a[k, j] = float(np.real(np.trace(bk.conj().T @ conj)))
            recon = recon + a[k, j] * bk
        if np.linalg.norm(conj - recon) > residual_tol:
            raise BasisNotInvariant(
                f"conjugated basis leaves span(basis) at t={t}")
    return a


def remove_drift(drift: np.ndarray, basis: List[np.ndarray],
                 u_hat: ControlSignal) -> ControlSignal:
    """Convert a driftless design into controls for the drifted system.

    Returns u(t) = a(t)^T u_hat(t) sample by sample. The caller must have
    designed u_hat for the final state pre-rotated by exp(-A t_f).
    """
    m = len(basis)
    if u_hat.values.shape[1] != m:
        raise ValueError("signal width does not match basis size")
    out = np.empty_like(u_hat.values)
    for i, t in enumerate(u_hat.times):
        a = drift_rotation(drift, basis, float(t))
        out[i] = a.T @ u_hat.values[i]
    return ControlSignal(u_hat.times.copy(), out, u_hat.zero_start,
                         u_hat.zero_end, list(u_hat.seams))
