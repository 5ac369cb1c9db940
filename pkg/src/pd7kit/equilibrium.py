"""The constant limit branch, Weierstrass invariants and limit-ODE residuals.

Outside the pole region the rescaled solutions tend to the root U(y) of

    8 U**3 + 2 U - y = 0

that behaves as ``U ~ y**(1/3) / 2`` for large y.  Inside it they are
described by the autonomous equation

    W'' = W'**2 / W + (8/y) W**2 + 2/y - 1/W,

whose first integral is ``W'**2 = (16/y) W**3 + 2 E W**2 - (4/y) W + 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from .errors import BranchAmbiguity

__all__ = [
    "EquilibriumBranch",
    "WeierstrassInvariants",
    "solve_equilibrium",
    "invariants_from_E",
    "first_order_residual",
    "second_order_residual",
    "weierstrass_identity",
    "E_from_c",
]


@dataclass(frozen=True)
class EquilibriumBranch:
    y: complex
    U: complex
    branch: str = "principal"

    @property
    def residual(self):
        return abs(8 * self.U ** 3 + 2 * self.U - self.y)


@dataclass(frozen=True)
class WeierstrassInvariants:
    g2: complex
    g3: complex
    E: complex
    y: complex


def _cubic_roots(y):
    return np.roots([8.0, 0.0, 2.0, -complex(y)])


def _polish(U, y, steps=3):
    for _ in range(steps):
        f = 8 * U ** 3 + 2 * U - y
        U = U - f / (24 * U ** 2 + 2)
    return U


def _principal_far(y):
    target = 0.5 * abs(y) ** (1 / 3) * cmath.exp(1j * cmath.phase(y) / 3)
    r = _cubic_roots(y)
    return _polish(complex(r[np.argmin(abs(r - target))]), y)


def solve_equilibrium(y: complex, step=1e-2, collision_tol=1e-6) -> EquilibriumBranch:
    """Root of ``8U^3 + 2U - y = 0`` on the branch ``U ~ y^{1/3}/2``.

    For ``|y| >= 10`` the root nearest ``y^{1/3}/2`` is taken.  Otherwise the
    root is followed along the radial segment from ``10 y/|y|`` inward with
    steps of at most ``step``.

    Raises
    ------
    BranchAmbiguity
        If the path passes within ``collision_tol`` of a double root (the
        branch points ``y = +-2i/sqrt(27)``).
    """
    y = complex(y)
    if y == 0:
        return EquilibriumBranch(y, 0j)
    if abs(y) >= 10:
        return EquilibriumBranch(y, _principal_far(y))
    u = y / abs(y)
    U = _principal_far(10 * u)
    r = 10.0
    nsteps = max(1, math.ceil((10 - abs(y)) / step))
    for k in range(1, nsteps + 1):
        r = 10 - (10 - abs(y)) * k / nsteps
        yy = r * u
        roots = _cubic_roots(yy)
        d = abs(roots - U)
        order = np.argsort(d)
        gaps = [abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3)]
        if min(gaps) < collision_tol:
            raise BranchAmbiguity(f"root collision near y = {yy}")
        if d[order[1]] < 2 * d[order[0]] and d[order[0]] > 1e-3:
            raise BranchAmbiguity(f"ambiguous root tracking near y = {yy}")
        U = _polish(complex(roots[order[0]]), yy)
    return EquilibriumBranch(y, _polish(U, y))


def E_from_c(c: complex, y: complex) -> complex:
    """Integration constant ``E = -8 c / y^2``."""
    return -8 * complex(c) / complex(y) ** 2


def invariants_from_E(y: complex, E: complex) -> WeierstrassInvariants:
    """``g2 = 16/y^2 + E^2/3``, ``g3 = -16/y^2 - 8E/(3y^2) - E^3/27``."""
    y = complex(y)
    E = complex(E)
    g2 = 16 / y ** 2 + E ** 2 / 3
    g3 = -16 / y ** 2 - 8 * E / (3 * y ** 2) - E ** 3 / 27
    return WeierstrassInvariants(g2, g3, E, y)


def first_order_residual(U, Uprime, y, E):
    """``U'^2 - [(16/y) U^3 + 2E U^2 - (4/y) U + 1]``."""
    return Uprime ** 2 - ((16 / y) * U ** 3 + 2 * E * U ** 2 - (4 / y) * U + 1)


def second_order_residual(U, Uprime, Usecond, y):
    """``U'' - [U'^2/U + (8/y) U^2 + 2/y - 1/U]``.

    Raises
    ------
    ZeroDivisionError
        If ``U == 0``.
    """
    if U == 0:
        raise ZeroDivisionError("second-order residual needs U != 0")
    return Usecond - (Uprime ** 2 / U + (8 / y) * U ** 2 + 2 / y - 1 / U)


def weierstrass_identity():
    """Exact check that U = y P/4 - y E/24 maps the Weierstrass ODE to the first integral.

With ``U = (y/4) P - y E/24`` the left side ``U'^2`` becomes
    ``(y/4)^2 (4P^3 - g2 P - g3)`` once ``P'^2`` is eliminated.  Both sides
    are expanded in ``P`` with coefficients rational in ``y`` and ``E``.

    Returns
    -------
    dict
        ``lhs`` and ``rhs`` map each power of ``P`` to its coefficient on the
        two sides; ``holds`` is true iff they agree coefficient by coefficient.
    """
    y, E, P = sp.symbols("y E P")
    g2 = 16 / y ** 2 + E ** 2 / 3
    g3 = -16 / y ** 2 - sp.Rational(8, 3) * E / y ** 2 - E ** 3 / 27
    U = y * P / 4 - y * E / 24
    lhs = (y / 4) ** 2 * (4 * P ** 3 - g2 * P - g3)
    rhs = 16 / y * U ** 3 + 2 * E * U ** 2 - 4 / y * U + 1

    def coeffs(expr):
        poly = sp.Poly(sp.expand(expr), P)
        return {int(m[0]): sp.factor(c) for m, c in zip(poly.monoms(), poly.coeffs())}

    lc, rc = coeffs(lhs), coeffs(rhs)
    keys = sorted(set(lc) | set(rc))
    holds = all(sp.simplify(lc.get(k, 0) - rc.get(k, 0)) == 0 for k in keys)
    return {"lhs": lc, "rhs": rc, "holds": holds}
