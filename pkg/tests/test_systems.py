import math

import numpy as np
import pytest

from smoothctl import (BoundaryPoint, LambdaCoords, SingularPoint, Su2,
                       canonical_su3, lambda_controls, lambda_coords,
                       lambda_dhat, lambda_generator, random_block_unitary,
                       random_su2, random_su3, single_spin_control,
                       steer_lambda, steer_single_spin)
from smoothctl.su2 import Su3
from smoothctl.systems import spin_flow_matrix


def test_single_spin_control_finite_difference():
    # alpha realizes the requested z-velocity: check d/dt u11 by central
    # differences of the exact flow under constant alpha
    rng = np.random.default_rng(50)
    h = 1e-6
    import scipy.linalg
    for _ in range(50):
        u = random_su2(rng)
        if abs(u.y) < 1e-2:
            continue
        zdot = complex(*rng.standard_normal(2))
        alpha = single_spin_control(u, zdot)
        gen = spin_flow_matrix(alpha)
        fwd = scipy.linalg.expm(gen * h) @ u.matrix
        bwd = scipy.linalg.expm(-gen * h) @ u.matrix
        fd = (fwd[0, 0] - bwd[0, 0]) / (2 * h)
        assert abs(fd - zdot) < 1e-6


def test_single_spin_singular_point():
    with pytest.raises(SingularPoint):
        single_spin_control(Su2.identity(), 1.0 + 0j)


def test_steer_single_spin_reaches_target():
    rng = np.random.default_rng(51)
    for _ in range(3):
        t = random_su2(rng)
        if abs(t.y) < 0.1:
            continue
        achieved, fixed = steer_single_spin(t, t2=2.0, step=2e-3)
        assert abs(achieved.x - t.x) < 1e-6       # orbit coordinate
        assert abs(fixed.x - t.x) < 1e-6          # gauge preserves it
        assert abs(fixed.y - t.y) < 1e-6          # phase fixed exactly


def test_lambda_dhat_invariance_under_symmetry():
    rng = np.random.default_rng(52)
    for _ in range(100):
        u = random_su3(rng)
        k = random_block_unitary(rng)
        a = lambda_dhat(u)
        b = lambda_dhat(Su3(k.m @ u.m @ k.m.conj().T))
        assert abs(abs(a) - abs(b)) < 1e-12


def test_lambda_coords_invariance():
    rng = np.random.default_rng(53)
    for _ in range(100):
        u = random_su3(rng)
        k = random_block_unitary(rng)
        try:
            a = lambda_coords(u)
            b = lambda_coords(Su3(k.m @ u.m @ k.m.conj().T))
        except BoundaryPoint:
            continue
        assert abs(a.z1 - b.z1) < 1e-12
        assert abs(a.T - b.T) < 1e-12


def test_lambda_controls_residual():
    # the solved (alpha, beta) reproduce the requested velocities exactly
    rng = np.random.default_rng(54)
    for _ in range(100):
        u = random_su3(rng)
        if abs(lambda_dhat(u)) < 1e-2:
            continue
        z1dot = complex(*rng.standard_normal(2))
        tdot = complex(*rng.standard_normal(2))
        alpha, beta = lambda_controls(u, z1dot, tdot)
        m = lambda_generator(alpha, beta) @ u.m
        assert abs(m[0, 0] - z1dot) < 1e-12
        assert abs(m[1, 1] + m[2, 2] - tdot) < 1e-12


def test_dhat_vs_disc_interior_on_canonical_forms():
    # Dhat != 0 exactly when both disc coordinates are interior
    rng = np.random.default_rng(55)
    for _ in range(200):
        z1 = complex(*rng.uniform(-1, 1, 2)) * 0.7
        z2 = complex(*rng.uniform(-1, 1, 2)) * 0.7
        w = complex(*rng.standard_normal(2))
        u = canonical_su3(z1, z2, w)
        interior = abs(z1) < 1 - 1e-9 and abs(z2) < 1 - 1e-9
        assert (abs(lambda_dhat(u)) > 1e-12) == interior
    # boundary cases
    u = canonical_su3(complex(1.0), complex(0.3, 0.1), complex(1.0))
    assert abs(lambda_dhat(u)) < 1e-12
    u = canonical_su3(complex(0.3), complex(1.0), complex(0.0))
    assert abs(lambda_dhat(u)) < 1e-12


def test_z2_from_trace():
    rng = np.random.default_rng(56)
    for _ in range(50):
        z1 = complex(*rng.uniform(-0.6, 0.6, 2))
        z2 = complex(*rng.uniform(-0.6, 0.6, 2))
        u = canonical_su3(z1, z2, complex(*rng.standard_normal(2)))
        c = lambda_coords(u)
        assert abs(c.z2 - z2) < 1e-10


def test_steer_lambda_reaches_orbit():
    target = canonical_su3(complex(0.25, 0.15), complex(-0.3, 0.2),
                           complex(0.4, -0.6))
    tc = lambda_coords(target)
    got = lambda_coords(steer_lambda(tc, t2=2.0, step=2e-3))
    assert abs(got.z1 - tc.z1) < 1e-6
    assert abs(got.T - tc.T) < 1e-6
