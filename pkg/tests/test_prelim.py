import math

import numpy as np
import pytest

from smoothctl import (PrelimParams, Su2, SystemParams, UnitaryPair,
                       delta_of, integrate_pair, prelim_sigma, prelim_unitary,
                       run_preliminary, shape_functions)

GAMMA = 1.0 / 0.2514


def test_shape_endpoint_values():
    p = PrelimParams(delta0=0.5, epsilon0=1.0, t1=1.0)
    d0, e0, dd0, de0 = shape_functions(p, 0.0)
    d1, e1, dd1, de1 = shape_functions(p, p.t1)
    assert d0 == 0.0 and abs(e0 - 1.0) < 1e-15
    assert abs(d1 - 0.5) < 1e-15 and abs(e1) < 1e-15
    assert dd0 == de0 == 0.0
    assert abs(dd1) < 1e-15 and abs(de1) < 1e-15


def test_shape_time_range_checked():
    p = PrelimParams()
    with pytest.raises(ValueError):
        shape_functions(p, -0.1)
    with pytest.raises(ValueError):
        shape_functions(p, p.t1 + 0.1)


def test_bad_params_rejected():
    with pytest.raises(ValueError):
        PrelimParams(t1=0.0)
    with pytest.raises(ValueError):
        PrelimParams(delta0=0.0)
    with pytest.raises(ValueError):
        PrelimParams(epsilon0=0.0)


def test_sigma_is_zero_at_endpoints():
    p = PrelimParams()
    assert prelim_sigma(p, 0.0).norm() < 1e-12
    assert prelim_sigma(p, p.t1).norm() < 1e-12


def test_sigma_matches_logarithmic_derivative():
    # sigma = dU/dt U^dag by central differences of the closed-form curve
    p = PrelimParams(delta0=0.7, epsilon0=0.9, t1=1.3)
    h = 1e-6
    for t in np.linspace(2 * h, p.t1 - 2 * h, 17):
        du = (prelim_unitary(p, t + h).matrix
              - prelim_unitary(p, t - h).matrix) / (2 * h)
        fd = du @ prelim_unitary(p, t).matrix.conj().T
        np.testing.assert_allclose(prelim_sigma(p, t).matrix, fd, atol=1e-8)


def test_integrated_u_matches_closed_form():
    p = PrelimParams()
    sys = SystemParams(gamma=GAMMA)
    pair, signal = integrate_pair(UnitaryPair.identity(),
                                  lambda t: prelim_sigma(p, min(t, p.t1)),
                                  sys, (0.0, p.t1))
    exact = prelim_unitary(p, p.t1)
    assert abs(pair.u.x - exact.x) < 1e-9
    assert abs(pair.u.y - exact.y) < 1e-9
    assert signal.zero_start and signal.zero_end


def test_prelim_leaves_singular_stratum():
    pair = run_preliminary(PrelimParams(), GAMMA)
    assert delta_of(pair) > 1e-2
