import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pd7kit.algebraic import pole_locations_Y, shifted_jet, solution
from pd7kit.equilibrium import E_from_c, first_order_residual, second_order_residual
from pd7kit.errors import InsufficientData, PoleHit
from pd7kit.spectral import P
from pd7kit.weierstrass_verify import (curve_cubic_correspondence, distance_to_pole, residual_first_order,
                                       residual_second_order, slope_fit, verify, z_samples)


def test_first_order_agrees_with_equilibrium_module(boutroux_015):
    y = 0.15
    E = E_from_c(boutroux_015.c1, y)
    for z in (0.2, -0.3j, 0.5 + 0.1j):
        W, dW = shifted_jet(solution(12), y, z, order=1)
        assert residual_first_order(12, y, z, boutroux_015) == pytest.approx(first_order_residual(W, dW, y, E),
                                                                              abs=1e-12)


def test_second_order_agrees_with_equilibrium_module():
    y, z = 0.15, 0.3 + 0.2j
    W, dW, d2W = shifted_jet(solution(10), y, z)
    assert residual_second_order(10, y, z) == pytest.approx(second_order_residual(W, dW, d2W, y), abs=1e-12)


def test_curve_cubic_identity(boutroux_015, boutroux_complex):
    assert curve_cubic_correspondence(boutroux_015) < 1e-12
    assert curve_cubic_correspondence(boutroux_complex) < 1e-12


def test_cubic_roots_map_to_branch_points(boutroux_complex):
    # W'^2 vanishes exactly where i y / (4 W) is a branch point i s_j
    sol = boutroux_complex
    y, c = sol.y, sol.c1
    roots = np.roots([16 / y, -16 * c / y ** 2, -4 / y, 1])
    etas = sorted(1j * y / (4 * r) for r in roots)
    for e in etas:
        assert min(abs(e - t) for t in sol.roots.etas) < 1e-12
        assert abs(P(-1j * e, y, c)) < 1e-13


def test_slope_fit_exact_power_law():
    n = [8, 16, 32, 64]
    slope, rms = slope_fit(n, [3.0 / k for k in n])
    assert slope == pytest.approx(-1.0, abs=1e-12) and rms < 1e-12
    slope, _ = slope_fit(n, [2.0] * 4)
    assert abs(slope) < 1e-12


@given(st.floats(-3, 1), st.floats(0.01, 100))
@settings(max_examples=30)
def test_slope_fit_recovers_exponent(p, a):
    n = np.array([5, 10, 20, 40, 80])
    slope, rms = slope_fit(n, a * n ** p)
    assert slope == pytest.approx(p, abs=1e-9)


def test_slope_fit_needs_three_points():
    with pytest.raises(InsufficientData):
        slope_fit([8, 16], [1.0, 0.5])
    with pytest.raises(InsufficientData):
        slope_fit([8, 16, 32], [1.0, 0.5])


def test_z_samples_layout():
    zs = z_samples()
    assert len(zs) == 30
    assert all(abs(abs(z) - 0.5) < 1e-15 for z in zs[:20])
    assert all(z.imag == 0 and -1 <= z.real <= 1 for z in zs[20:])


def test_branch_point_raises():
    with pytest.raises(PoleHit):
        residual_second_order(8, 0.1, -0.8)


def test_distance_to_pole_finds_a_nearby_pole():
    n = 10
    Yp = pole_locations_Y(n)
    Y = Yp[np.argmin(np.abs(Yp - 0.6))]
    y0 = Y ** 3
    sol = solution(n)
    z0 = 0.03 + 0.02j
    # the pole of W sits at z = 0, i.e. at distance |z0|
    assert distance_to_pole(sol, y0, z0) == pytest.approx(abs(z0), abs=1e-8)
    assert distance_to_pole(solution(8), 0.6, 0.0) == math.inf  # no pole near the equilibrium region


def test_verify_report_structure(boutroux_015):
    rep = verify(0.15, n_values=(4, 8, 16), sol_b=boutroux_015, zs=[0.3, 0.2j, -0.4])
    d = rep.to_dict()
    assert d["n_values"] == [4, 8, 16] and len(d["max_first"]) == 3
    assert rep.E == pytest.approx(-8 * boutroux_015.c1 / 0.0225)
    assert all(rep.samples_used[n] + rep.excluded[n] == 3 for n in (4, 8, 16))
    assert not math.isnan(rep.slope_first)

