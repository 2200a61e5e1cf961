import math

import numpy as np
import pytest

from smoothctl import (Su2, UnitaryPair, cylinder_coords, delta_of, deltas_of,
                       eig_phase_sorted, invariants_of, is_singular,
                       random_su2)


def rand_pair(rng):
    return UnitaryPair(random_su2(rng), random_su2(rng))


def test_invariants_conjugation_invariance():
    rng = np.random.default_rng(10)
    for _ in range(300):
        p = rand_pair(rng)
        k = random_su2(rng)
        a, b = invariants_of(p), invariants_of(p.conjugated_by(k))
        assert np.max(np.abs(a.coords - b.coords)) < 1e-12
        assert abs(a.delta - b.delta) < 1e-12


def test_delta_identity():
    # sum of the three bilinears squared equals the polynomial in (x1,x2,x3)
    rng = np.random.default_rng(11)
    for _ in range(300):
        p = rand_pair(rng)
        iv = invariants_of(p)
        poly = (1 - iv.x1**2) * (1 - iv.x2**2) - iv.x3**2
        assert abs(delta_of(p) - poly) < 1e-12


def test_x3_box_constraint():
    rng = np.random.default_rng(12)
    for _ in range(300):
        iv = invariants_of(rand_pair(rng))
        assert -1 - iv.x1 * iv.x2 - 1e-12 <= iv.x3 <= 1 - iv.x1 * iv.x2 + 1e-12


def test_singular_iff_commuting():
    rng = np.random.default_rng(13)
    for _ in range(100):
        p = rand_pair(rng)
        U, V = p.u.matrix, p.v.matrix
        comm = np.linalg.norm(U @ V - V @ U)
        assert is_singular(p) == (comm <= 1e-9)
        # commuting pairs: powers of a common element
        g = random_su2(rng)
        q = UnitaryPair(g @ g, g)
        assert is_singular(q)
        assert delta_of(q) < 1e-18


def test_delta_zero_on_singular():
    rng = np.random.default_rng(14)
    for _ in range(100):
        g = random_su2(rng)
        k = random_su2(rng)
        p = UnitaryPair(g, g @ g @ g).conjugated_by(k)
        assert delta_of(p) < 1e-15


def test_eig_phase_sorted_convention():
    rng = np.random.default_rng(15)
    for _ in range(100):
        g = random_su2(rng)
        vals, vecs = eig_phase_sorted(g.matrix)
        assert np.angle(vals[0]) >= np.angle(vals[1])
        np.testing.assert_allclose(g.matrix @ vecs, vecs @ np.diag(vals),
                                   atol=1e-12)


def test_cylinder_coords_invariant():
    rng = np.random.default_rng(16)
    for _ in range(100):
        p = rand_pair(rng)
        k = random_su2(rng)
        a, b = cylinder_coords(p), cylinder_coords(p.conjugated_by(k))
        assert abs(a.phi - b.phi) < 1e-10
        if a.disc is not None:
            assert abs(a.disc - b.disc) < 1e-8


def test_cylinder_segment_case():
    rng = np.random.default_rng(17)
    c = cylinder_coords(UnitaryPair(Su2.identity(), random_su2(rng)))
    assert c.phi < 1e-9 and c.disc is None and c.psi is not None


def test_is_singular_rejects_bad_tol():
    with pytest.raises(ValueError):
        is_singular(UnitaryPair.identity(), tol=0.0)
