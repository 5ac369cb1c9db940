import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pd7kit.errors import AtOrigin, BoundaryHit, BracketFailure, OnCut, PathConstructionFailure
from pd7kit.spectral import (BowTie, CurveParams, P, R_expansion_check, boutroux_integrals, continue_c1,
                             discriminant_c, h_eta, jacobian, origin_detour_path, roots_of_P, seed_c0,
                             solve_c1, solve_c1_real, boutroux_residuals)

import oracles
from conftest import COMPLEX_Y

# frozen from oracles.c1_real / oracles.c1_complex (mpmath semicircle quadrature,
# bisection / findroot); see tests/oracles.py
C1_REAL = {0.05: -0.0421639255705911, 0.15: -0.120574005651317, 0.25: -0.187831532350087}
C1_COMPLEX = -0.12353933811202282 + 0.01335353792231648j


@pytest.mark.parametrize("y", sorted(C1_REAL))
def test_real_seed_against_frozen_oracle(y):
    sol = solve_c1_real(y, with_phases=False)
    assert sol.c1.real == pytest.approx(C1_REAL[y], abs=1e-12)
    s1, s2, s3 = (s.real for s in sol.roots.s)
    assert s1 < 0 < s2 < s3
    assert abs(sol.I12) < 1e-10 and abs(sol.I23) < 1e-10


def test_complex_solution_against_frozen_oracle(boutroux_complex):
    assert abs(boutroux_complex.c1 - C1_COMPLEX) < 1e-11


def test_integrals_agree_with_oracle_off_solution():
    # full complex integrals, not just their real parts, at a generic (y, c)
    for y, c in ((0.15, 0.1), (0.12 + 0.03j, -0.05 + 0.02j)):
        p = CurveParams(y, c)
        roots = roots_of_P(p)
        J12, J23 = boutroux_integrals(p, roots)
        with oracles.mp.workdps(20):
            R12, R23 = oracles.boutroux_pair(oracles.mp.mpc(y), oracles.mp.mpc(c))
        assert abs(J12 - complex(R12)) < 1e-10
        assert abs(J23 - complex(R23)) < 1e-10


@pytest.mark.slow
def test_live_oracle_reproduces_real_seed():
    assert oracles.c1_real(0.15, dps=18) == pytest.approx(solve_c1_real(0.15, with_phases=False).c1.real,
                                                          abs=1e-12)


def test_symmetries():
    y = 0.15 * cmath.exp(0.3j)
    c = solve_c1(y, with_phases=False).c1
    assert abs(solve_c1(y.conjugate(), with_phases=False).c1 - c.conjugate()) < 1e-11
    assert abs(solve_c1(-y, with_phases=False).c1 - c) < 1e-14


def test_outside_the_wing():
    with pytest.raises(BracketFailure):
        solve_c1_real(0.35)
    with pytest.raises(BracketFailure):
        solve_c1_real(-0.1)
    seed = solve_c1_real(0.15, with_phases=False)
    with pytest.raises(BoundaryHit):
        continue_c1(0.4, 0.15, seed.c1, seed.roots, with_phases=False)


def test_seed_is_a_double_root():
    for y in (0.1, 0.2 + 0.05j):
        c0, s, d = seed_c0(y)
        assert abs(discriminant_c(c0, y)) < 1e-13
        assert abs(P(d, y, c0)) < 1e-13 and abs(-3 * d * d + 2 * d + c0) < 1e-13
        assert abs(P(s, y, c0)) < 1e-13


def test_h_eta_errors_and_infinity():
    p = CurveParams(0.15, -0.12)
    roots = roots_of_P(p)
    with pytest.raises(AtOrigin):
        h_eta(0, p, roots)
    with pytest.raises(OnCut):
        h_eta(0.5 * roots.etas[0], p, roots)
    with pytest.raises(OnCut):
        h_eta(0.5 * (roots.etas[1] + roots.etas[2]), p, roots)
    assert abs(h_eta(1e7 + 3e6j, p, roots) + 1j) < 1e-6


@given(st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=60)
def test_h_eta_squares_to_curve(a, b):
    eta = complex(a, b)
    assume(abs(eta) > 1e-3)
    p = CurveParams(0.2 + 0.05j, -0.1 + 0.02j)
    roots = roots_of_P(p)
    mu = -1j * eta
    h = complex(h_eta(eta, p, roots, check=False))
    f = P(mu, p.y, p.c) / mu ** 3
    assert abs(h * h - f) <= 1e-12 * max(1, abs(f))


def test_expansions():
    rep = R_expansion_check(CurveParams(0.15, -0.12))
    assert rep["far"]["deviation"] <= rep["far"]["next_term"]
    assert rep["near"]["deviation"] <= rep["near"]["next_term"]


def test_jacobian_matches_differences_off_solution():
    y, c = 0.2, -0.1 + 0.01j
    J, det, _ = jacobian(CurveParams(y, c))
    h = 1e-6
    cols = []
    for dc in (h, 1j * h):
        fp = np.array(boutroux_residuals(CurveParams(y, c + dc)))
        fm = np.array(boutroux_residuals(CurveParams(y, c - dc)))
        cols.append((fp - fm) / (2 * h))
    assert np.max(np.abs(J - np.array(cols).T)) < 1e-6
    assert det == pytest.approx(np.linalg.det(J), rel=1e-10)


def test_detour_path_shape():
    a, b = -0.04j, 0.18j
    path = origin_detour_path(a, b)
    assert path.waypoints[0] == a and path.waypoints[-1] == b
    assert min(abs(w) for w in path.waypoints) > 0.03
    # the route passes to the right of the imaginary axis
    assert all(w.real >= 0 for w in path.waypoints[1:-1])
    with pytest.raises(PathConstructionFailure):
        origin_detour_path(0.2j, 0.1j)


def test_bowtie_membership():
    region = BowTie.compute(n_rays=16)
    yc = 0.29177
    assert region.contains(np.array([0.9 * yc ** (1 / 3), -0.9 * yc ** (1 / 3)])).all()
    assert not region.contains(np.array([1.2 * yc ** (1 / 3)])).any()
    assert region.distance(np.array([1.0]))[0] == pytest.approx(1 - yc ** (1 / 3), abs=2e-3)


def test_h_eta_expansion_at_infinity():
    p = CurveParams(0.15, -0.12)
    eta = 1e6j
    ref = -1j - 0.5 / eta
    assert abs(complex(h_eta(eta, p, roots_of_P(p))) - ref) <= 1e-5 * abs(ref)


def test_h_eta_blow_up_at_origin():
    y = 0.15
    p = CurveParams(y, -0.12)
    eta = 1e-6j
    ratio = complex(h_eta(eta, p, roots_of_P(p))) / (0.5j * y * (-1j * eta) ** -1.5)
    assert abs(ratio - 1) < 1e-3


def test_double_root_seed_by_bisection():
    # oracle: plain bisection of s (s - 1)^2 + y^2 on (-1, 0)
    y = 0.2
    lo, hi = -1.0, 0.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid * (mid - 1) ** 2 + y * y < 0:
            lo = mid
        else:
            hi = mid
    c0, s, d = seed_c0(y)
    assert s.real == pytest.approx(lo, abs=1e-14) and s.imag == 0
    assert d.real > 0.5


@pytest.mark.parametrize("y", [0.05, 0.15, 0.25])
def test_boutroux_function_negative_at_double_root(y):
    c0 = seed_c0(y)[0].real
    assert boutroux_residuals(CurveParams(y, c0 + 1e-7))[0] < 0


@pytest.mark.parametrize("which", ["boutroux_015", "boutroux_complex"])
def test_loop_around_origin_cut_is_imaginary(request, which):
    # the residue at 0 vanishes: a loop enclosing [0, i s1] has purely imaginary integral
    sol = request.getfixturevalue(which)
    r = sol.roots
    rad = math.sqrt(abs(r.s1) * abs(r.s2))
    m = 4000
    e = rad * np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)
    loop = np.sum(h_eta(e, sol.params, r, check=False) * 1j * e) * 2 * np.pi / m
    assert abs(loop.real) < 1e-10
