import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pd7kit.equilibrium import (E_from_c, first_order_residual, invariants_from_E, second_order_residual,
                                solve_equilibrium, weierstrass_identity)
from pd7kit.errors import BranchAmbiguity


def test_large_y_asymptotics():
    b = solve_equilibrium(1e6)
    assert b.U == pytest.approx(0.5 * 1e2, rel=1e-3)
    assert b.residual <= 1e-6


def test_thousand():
    assert solve_equilibrium(1e3).U.real == pytest.approx(5.0, rel=0.02)


def test_real_root_at_one_by_bisection():
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if 8 * mid ** 3 + 2 * mid - 1 < 0:
            lo = mid
        else:
            hi = mid
    assert solve_equilibrium(1.0).U == pytest.approx(lo, abs=1e-14)


def test_zero():
    assert solve_equilibrium(0).U == 0


def test_real_y_gives_real_root():
    b = solve_equilibrium(0.6)
    assert abs(b.U.imag) < 1e-14 and b.residual < 1e-14


def test_branch_point_is_ambiguous():
    with pytest.raises(BranchAmbiguity):
        solve_equilibrium(2j / math.sqrt(27), collision_tol=1e-3)


@given(st.floats(0.01, 20), st.floats(-3.0, 3.0))
def test_branch_solves_cubic(r, th):
    y = r * cmath.exp(1j * th)
    if abs(abs(y) - 2 / math.sqrt(27)) < 0.05 and abs(abs(th) - math.pi / 2) < 0.3:
        return
    b = solve_equilibrium(y)
    assert abs(8 * b.U ** 3 + 2 * b.U - y) <= 1e-10 * max(1, abs(y))


def test_conjugate_symmetry():
    y = 0.4 + 0.7j
    assert solve_equilibrium(y.conjugate()).U == pytest.approx(solve_equilibrium(y).U.conjugate(), abs=1e-12)


def test_invariants_and_E():
    assert E_from_c(-0.12, 0.15) == pytest.approx(-8 * -0.12 / 0.0225)
    inv = invariants_from_E(4.0, 3.0)
    assert inv.g2 == pytest.approx(4.0) and inv.g3 == pytest.approx(-2.5)
    inv = invariants_from_E(0.5, 3.0)
    assert inv.g2 == pytest.approx(16 / 0.25 + 3)
    assert inv.g3 == pytest.approx(-64 - 8 * 3 / (3 * 0.25) - 1)


def test_equilibrium_is_a_stationary_point():
    # a constant W = U_eq solves the second-order equation exactly
    y = 0.7
    U = solve_equilibrium(y).U
    assert abs(second_order_residual(U, 0, 0, y)) < 1e-13
    with pytest.raises(ZeroDivisionError):
        second_order_residual(0, 1, 1, y)


def test_first_order_residual_formula():
    assert first_order_residual(1.0, 2.0, 1.0, 0.5) == pytest.approx(4 - (16 + 1 - 4 + 1))


def test_weierstrass_identity_holds():
    res = weierstrass_identity()
    assert res["holds"]
    # Weierstrass form has no P^2 term; the shift -yE/24 must cancel it on the right
    assert set(res["lhs"]) == {0, 1, 3}
    assert res["rhs"].get(2, 0) == 0
