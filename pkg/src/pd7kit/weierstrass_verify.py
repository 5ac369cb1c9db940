"""Numerical check that the algebraic solutions obey the Weierstrass-form ODE.

Near a point y of the pole region, ``W(z) = U_n(y + z/n)`` should satisfy

    W'(z)**2 = (16/y) W**3 - (16 c1/y**2) W**2 - (4/y) W + 1

with ``c1 = c1(y)`` fixed by the Boutroux conditions, up to an error that
vanishes as n grows.  The right-hand side is, under ``eta = i y / (4 W)``,
minus the spectral-curve function ``f(eta)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .algebraic import AlgebraicSolution, shifted_jet, solution
from .errors import InsufficientData, PoleHit, ZeroHit
from .spectral import BoutrouxSolution, P, solve_c1

__all__ = [
    "VerificationReport",
    "residual_first_order",
    "residual_second_order",
    "curve_cubic_correspondence",
    "slope_fit",
    "z_samples",
    "distance_to_pole",
    "verify",
]

DEFAULT_N = (8, 16, 32, 64)
POLE_EXCLUSION = 0.1


@dataclass
class VerificationReport:
    """Per-n maxima of the normalized residuals and their log-log slopes."""

    y: complex
    E: complex
    n_values: list
    max_first: list
    max_second: list = field(default_factory=list)
    slope_first: float = float("nan")
    fit_residual_first: float = float("nan")
    slope_second: float = float("nan")
    fit_residual_second: float = float("nan")
    excluded: dict = field(default_factory=dict)
    samples_used: dict = field(default_factory=dict)
    slope_window: tuple = (-1.5, -0.5)

    @staticmethod
    def _ok(values, slope, window):
        mono = all(b < a for a, b in zip(values, values[1:]))
        return bool(mono and window[0] <= slope <= window[1])

    @property
    def first_order_passed(self):
        return self._ok(self.max_first, self.slope_first, self.slope_window)

    @property
    def second_order_passed(self):
        return self._ok(self.max_second, self.slope_second, self.slope_window)

    @property
    def flat(self):
        """True when the first-order residual shows no decay at all."""
        return not self.slope_first < -0.1

    def to_dict(self):
        return {
            "y": self.y, "E": self.E, "n_values": list(self.n_values),
            "max_first": list(self.max_first), "max_second": list(self.max_second),
            "slope_first": self.slope_first, "fit_residual_first": self.fit_residual_first,
            "slope_second": self.slope_second, "fit_residual_second": self.fit_residual_second,
            "excluded": {str(k): v for k, v in self.excluded.items()},
            "samples_used": {str(k): v for k, v in self.samples_used.items()},
            "first_order_passed": self.first_order_passed,
            "second_order_passed": self.second_order_passed,
        }


def _sol(n):
    return n if isinstance(n, AlgebraicSolution) else solution(int(n))


def residual_first_order(n, y: complex, z: complex, sol_b: BoutrouxSolution) -> complex:
    """``W'^2 - [(16/y)W^3 - (16 c1/y^2)W^2 - (4/y)W + 1]`` at ``W = U_n(y + z/n)``.

    Raises
    ------
    PoleHit
        If ``y + z/n`` is at a pole of ``U_n``.
    """
    y = complex(y)
    c = complex(sol_b.c1)
    W, dW = shifted_jet(_sol(n), y, z, order=1)
    return dW * dW - ((16 / y) * W ** 3 - (16 * c / (y * y)) * W * W - (4 / y) * W + 1)


def residual_second_order(n, y: complex, z: complex) -> complex:
    """``W'' - [W'^2/W + (8/y)W^2 + 2/y - 1/W]`` at ``W = U_n(y + z/n)``.

    Raises
    ------
    PoleHit, ZeroHit
    """
    y = complex(y)
    W, dW, d2W = shifted_jet(_sol(n), y, z, order=2)
    if W == 0:
        raise ZeroHit(f"U_n vanishes at z = {z}")
    return d2W - (dW * dW / W + (8 / y) * W * W + 2 / y - 1 / W)


def curve_cubic_correspondence(sol_b: BoutrouxSolution, samples: int = 100, seed=0) -> float:
    """Max relative gap between ``-f(iy/(4U))`` and the cubic in ``U``.

    Samples ``U`` with modulus in [0.05, 5] and uniform argument.  Both sides
    are evaluated independently: ``f`` from the polynomial ``P`` of the
    spectral curve, the cubic from its coefficients.
    """
    rng = np.random.default_rng(seed)
    y = complex(sol_b.y)
    c = complex(sol_b.c1)
    worst = 0.0
    for _ in range(samples):
        U = complex(np.exp(rng.uniform(math.log(0.05), math.log(5.0))) * cmath.exp(2j * math.pi * rng.uniform()))
        eta = 1j * y / (4 * U)
        mu = -1j * eta
        f = P(mu, y, c) / mu ** 3
        terms = ((16 / y) * U ** 3, -(16 * c / y ** 2) * U ** 2, -(4 / y) * U, 1.0)
        cubic = sum(terms)
        scale = sum(abs(t) for t in terms)
        worst = max(worst, abs(-f - cubic) / scale)
    return worst


def slope_fit(n_values, residuals):
    """Least-squares slope of ``log(residual)`` against ``log(n)``.

    Returns
    -------
    (slope, rms) : tuple of float

    Raises
    ------
    InsufficientData
        With fewer than three values of n.
    """
    n_values = np.asarray(n_values, float)
    residuals = np.asarray(residuals, float)
    if n_values.size < 3 or n_values.size != residuals.size:
        raise InsufficientData("need at least three (n, residual) pairs")
    X = np.log(n_values)
    Y = np.log(residuals)
    A = np.vstack([X, np.ones_like(X)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, Y, rcond=None)
    rms = float(np.sqrt(np.mean((A @ [slope, icpt] - Y) ** 2)))
    return float(slope), rms


def z_samples():
    """20 points on ``|z| = 0.5`` and 10 real points in [-1, 1]."""
    circle = [0.5 * cmath.exp(1j * math.pi * k / 10) for k in range(20)]
    line = [complex(t) for t in np.linspace(-1.0, 1.0, 10)]
    return circle + line


def distance_to_pole(sol: AlgebraicSolution, y: complex, z: complex, reach=0.5, max_iter=30):
    """Distance from ``z`` to the pole of ``W`` that Newton's method on ``1/W`` finds.

    The poles of ``W`` are double, so the step is ``2 W / W'``.  Returns
    ``inf`` if the iteration leaves the disc of radius ``reach``.
    """
    zz = complex(z)
    for _ in range(max_iter):
        try:
            W, dW = shifted_jet(sol, y, zz, order=1)
        except PoleHit:
            return abs(zz - z)
        if dW == 0:
            return math.inf
        step = 2 * W / dW
        zz += step
        if abs(zz - z) > reach:
            return math.inf
        if abs(step) < 1e-10:
            break
    return abs(zz - z)


def _max_residuals(n, y, sol_b, zs):
    sol = solution(n)
    y = complex(y)
    c = complex(sol_b.c1)
    r1, r2, excluded = [], [], 0
    for z in zs:
        if distance_to_pole(sol, y, z) < POLE_EXCLUSION:
            excluded += 1
            continue
        try:
            W, dW, d2W = shifted_jet(sol, y, z, order=2)
        except PoleHit:
            excluded += 1
            continue
        norm = 1 + abs(dW) ** 2
        f1 = dW * dW - ((16 / y) * W ** 3 - (16 * c / (y * y)) * W * W - (4 / y) * W + 1)
        r1.append(abs(f1) / norm)
        if W != 0:
            f2 = d2W - (dW * dW / W + (8 / y) * W * W + 2 / y - 1 / W)
            r2.append(abs(f2) / norm)
    return max(r1), (max(r2) if r2 else math.nan), excluded, len(r1)


def verify(y: complex, n_values=DEFAULT_N, sol_b: BoutrouxSolution | None = None, zs=None) -> VerificationReport:
    """Residual maxima over the z-sample set for each n, and their decay rate."""
    y = complex(y)
    sol_b = sol_b or solve_c1(y)
    zs = z_samples() if zs is None else list(zs)
    E = -8 * complex(sol_b.c1) / y ** 2
    report = VerificationReport(y=y, E=E, n_values=list(n_values), max_first=[])
    for n in n_values:
        m1, m2, ex, used = _max_residuals(n, y, sol_b, zs)
        report.max_first.append(m1)
        report.max_second.append(m2)
        report.excluded[n] = ex
        report.samples_used[n] = used
    if len(n_values) >= 3:
        report.slope_first, report.fit_residual_first = slope_fit(n_values, report.max_first)
        report.slope_second, report.fit_residual_second = slope_fit(n_values, report.max_second)
    return report
