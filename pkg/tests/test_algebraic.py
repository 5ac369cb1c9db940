import cmath
import io
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pd7kit.algebraic import (GridField, check_symmetry, density_grid, eval_d2U_dz2, eval_du_dx, eval_dU_dz,
                              eval_u, eval_U, eval_U_shifted, ode_residual_p3d7, pole_locations_Y,
                              shifted_jet, solution)
from pd7kit.equilibrium import solve_equilibrium
from pd7kit.errors import PoleHit, ZeroHit


def cauchy_derivative(f, x, k=1, r=None, m=64):
    """k-th derivative by the trapezoid rule on a circle around x."""
    r = r or 0.05 * max(abs(x), 1e-3)
    acc = 0j
    for j in range(m):
        w = cmath.exp(2j * math.pi * (j + 0.5) / m)
        acc += f(x + r * w) / (r * w) ** k
    return acc / m * math.factorial(k)


def test_u0_at_eight():
    assert eval_u(solution(0), 8) == pytest.approx(1.0, abs=1e-14)


def test_u0_derivative_and_residual_at_one():
    sol = solution(0)
    assert eval_du_dx(sol, 1.0) == pytest.approx(1 / 6, abs=1e-14)
    assert abs(ode_residual_p3d7(sol, 1.0)) <= 1e-12
    assert check_symmetry(0, 0.7 + 0.2j)


def test_negative_index_pole_at_zero():
    from pd7kit.errors import PoleAtZero
    from pd7kit.ohyama import compute
    with pytest.raises(PoleAtZero):
        compute(-2)(0)


def test_u1_closed_form_at_one():
    # zeta = sqrt(3): u_1 = (3 - 1) / 6
    assert eval_u(solution(1), 1.0) == pytest.approx(1 / 3, abs=1e-14)


def test_branch_point_raises():
    with pytest.raises(PoleHit):
        eval_u(solution(2), 0)
    with pytest.raises(PoleHit):
        eval_U(solution(2), 0)


def test_rescaling_needs_positive_n():
    with pytest.raises(ValueError):
        eval_U(solution(0), 0.3)
    with pytest.raises(ValueError):
        shifted_jet(solution(-1), 0.3, 0.1)


@pytest.mark.parametrize("n,x", [(3, 2 + 1j), (-2, 0.7 - 0.4j), (5, -3 + 0.5j)])
def test_du_dx_against_cauchy(n, x):
    sol = solution(n)
    ref = cauchy_derivative(lambda t: eval_u(sol, t), x)
    assert abs(eval_du_dx(sol, x) - ref) <= 1e-10 * max(1, abs(ref))


def test_shifted_jet_against_cauchy():
    sol = solution(6)
    y, z = 0.4 + 0.1j, 0.3 - 0.2j
    W = lambda t: eval_U_shifted(sol, y, t)
    d1 = cauchy_derivative(W, z, 1, r=0.05)
    d2 = cauchy_derivative(W, z, 2, r=0.05)
    assert abs(eval_dU_dz(sol, y, z) - d1) <= 1e-10 * max(1, abs(d1))
    assert abs(eval_d2U_dz2(sol, y, z) - d2) <= 1e-9 * max(1, abs(d2))


def test_shift_definition():
    sol = solution(4)
    assert eval_U_shifted(sol, 0.3, 0.8) == pytest.approx(eval_U(sol, 0.3 + 0.8 / 4), rel=1e-13)
    assert eval_U(sol, 0.5) == pytest.approx(eval_u(sol, 4 ** 1.5 * 0.5) / 2, rel=1e-13)


@pytest.mark.parametrize("n", [5, 12])
def test_exact_rescaled_ode(n):
    # u_n's equation in the W variables: W'' = W'^2/W + (8 W^2 + 2)/t - 1/W - W'/(n t), t = y + z/n
    sol = solution(n)
    y = 0.2 + 0.05j
    for z in (0.1, 0.4j, -0.3 + 0.2j):
        W, d1, d2 = shifted_jet(sol, y, z)
        t = y + z / n
        rhs = d1 * d1 / W + (8 * W * W + 2) / t - 1 / W - d1 / (n * t)
        assert abs(d2 - rhs) <= 1e-9 * max(abs(d2), abs(d1 * d1 / W), abs(1 / W), 1)


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_symmetry(n):
    assert check_symmetry(n, 0.8 + 0.3j)
    assert check_symmetry(n, -2.0 + 0.1j)


@given(st.integers(-6, 8), st.floats(0.2, 5), st.floats(-3.0, 3.0))
@settings(max_examples=40, deadline=None)
def test_painleve_residual_property(n, r, th):
    x = r * cmath.exp(1j * th)
    try:
        res = ode_residual_p3d7(solution(n), x)
    except (PoleHit, ZeroHit):
        assume(False)
    assert abs(res) <= 1e-9


def test_exterior_limit_monotone_at_modulus_three():
    y = 3 * cmath.exp(0.4j)
    U = solve_equilibrium(y).U
    errs = [abs(eval_U(solution(n), y) - U) for n in (4, 8, 16, 32)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize("y", [0.6, 0.5 + 0.4j, -0.7])
def test_limit_outside_pole_region(y):
    # outside the pole region U_n(y) approaches the equilibrium root at rate ~ n^-2
    U = solve_equilibrium(y).U
    errs = [abs(eval_U(solution(n), y) - U) for n in (8, 16, 32)]
    assert errs[0] < 1e-3
    assert errs[1] < errs[0] / 3 and errs[2] < errs[1] / 3


def test_density_grid_n0_is_half_modulus():
    g = density_grid(0, (-1, 1, -1, 1), (5, 4))
    assert g.values.shape == (4, 5)
    assert g.poles.size == 0
    np.testing.assert_allclose(g.values, np.abs(g.points()) / 2, rtol=1e-12)


def test_density_grid_two_by_two_and_bad_resolution():
    g = density_grid(2, (0.2, 0.4, 0.1, 0.3), (2, 2))
    P = g.points()
    ref = np.array([[abs(eval_U(solution(2), p ** 3)) for p in row] for row in P])
    np.testing.assert_allclose(g.values, ref, rtol=1e-9)
    with pytest.raises(ValueError):
        density_grid(2, resolution=(1, 5))


@pytest.mark.parametrize("n", [2, 5, 9])
def test_pole_locations(n):
    poles = pole_locations_Y(n)
    R = solution(n).r
    assert poles.size == R.degree - R.valuation
    for Y in poles[:6]:
        zeta = math.sqrt(3 * n) * Y
        assert abs(R(zeta)) <= 1e-8 * 10 ** R.log10_abs_sum(abs(zeta))


def test_grid_local_maxima_and_csv():
    vals = np.ones((5, 5))
    vals[2, 3] = 50.0
    vals[0, 0] = 99.0  # border points are never reported
    g = GridField((0.0, 4.0, 0.0, 4.0), (5, 5), vals)
    assert list(g.local_maxima(10.0)) == [3 + 2j]
    buf = io.StringIO()
    g.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "Y_re,Y_im,modulus" and len(lines) == 26
