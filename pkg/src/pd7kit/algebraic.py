"""Evaluation of the algebraic solutions u_n and their rescalings.

For integer n,

    u_n(x) = R_{n+1}(zeta) R_{n-1}(zeta) / (2 sqrt(3) R_n(zeta)**2),
    zeta = sqrt(3) x**(1/3),

with the principal cube root.  The large-n scalings are
``U_n(y) = n**(-1/2) u_n(n**(3/2) y)`` and ``W(z) = U_n(y + z/n)``.

All derivatives come from exact Laurent differentiation followed by the
chain rule; floating point only enters at evaluation, which is carried out in
mpmath with a working precision that adapts to the cancellation in the huge
integer coefficients of R_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import PoleHit, ZeroHit
from .laurent import LaurentPoly, derivative
from .ohyama import OhyamaTable, default_table

__all__ = [
    "AlgebraicSolution",
    "GridField",
    "solution",
    "eval_u",
    "eval_U",
    "eval_U_shifted",
    "eval_du_dx",
    "eval_dU_dz",
    "eval_d2U_dz2",
    "shifted_jet",
    "ode_residual_p3d7",
    "check_symmetry",
    "density_grid",
    "pole_locations_Y",
    "DEFAULT_POLE_TOL",
]

SQRT3 = math.sqrt(3.0)
DEFAULT_POLE_TOL = 1e-24


@dataclass(frozen=True)
class AlgebraicSolution:
    """R_{n-1}, R_n, R_{n+1} and their first two zeta-derivatives."""

    n: int
    r_minus: LaurentPoly
    r: LaurentPoly
    r_plus: LaurentPoly
    dr_minus: LaurentPoly = field(repr=False)
    dr: LaurentPoly = field(repr=False)
    dr_plus: LaurentPoly = field(repr=False)
    d2r_minus: LaurentPoly = field(repr=False)
    d2r: LaurentPoly = field(repr=False)
    d2r_plus: LaurentPoly = field(repr=False)
    pole_tol: float = DEFAULT_POLE_TOL

    @classmethod
    def build(cls, n: int, table: OhyamaTable | None = None, pole_tol=DEFAULT_POLE_TOL):
        t = table if table is not None else default_table()
        polys = [t.compute(n - 1), t.compute(n), t.compute(n + 1)]
        d1 = [derivative(p) for p in polys]
        d2 = [derivative(p) for p in d1]
        return cls(n, *polys, *d1, *d2, pole_tol=pole_tol)


_SOLUTIONS = {}


def solution(n: int, pole_tol=DEFAULT_POLE_TOL) -> AlgebraicSolution:
    """Cached :class:`AlgebraicSolution` built from the process-wide table."""
    table = default_table()
    key = (n, pole_tol, id(table))
    if key not in _SOLUTIONS:
        _SOLUTIONS[key] = AlgebraicSolution.build(n, table, pole_tol)
    return _SOLUTIONS[key]


# ---------------------------------------------------------------------------
# core evaluation in zeta
# ---------------------------------------------------------------------------

def _cbrt(x: complex) -> complex:
    """Principal cube root."""
    x = complex(x)
    if x == 0:
        return 0j
    return abs(x) ** (1.0 / 3.0) * complex(math.cos(math.atan2(x.imag, x.real) / 3),
                                           math.sin(math.atan2(x.imag, x.real) / 3))


def _u_jet(sol: AlgebraicSolution, zeta, order=0, digits=20):
    """u and its zeta-derivatives up to ``order`` at ``zeta`` (as mpc).

    Raises PoleHit when |R_n|^2 < pole_tol * |R_{n+1} R_{n-1}|.
    """
    if zeta == 0:
        raise PoleHit("zeta = 0 is a branch point of u_n")
    polys = [sol.r_minus, sol.r, sol.r_plus]
    if order >= 1:
        polys += [sol.dr_minus, sol.dr, sol.dr_plus]
    if order >= 2:
        polys += [sol.d2r_minus, sol.d2r, sol.d2r_plus]
    vals = [p.eval_accurate(zeta, digits=digits) for p in polys]
    with mpmath.workdps(digits + 10):
        Rm, R0, Rp = vals[:3]
        A = Rp * Rm
        if abs(R0) ** 2 <= sol.pole_tol * abs(A) or R0 == 0:
            raise PoleHit(f"u_{sol.n} has a pole at zeta = {complex(zeta)}")
        k = 2 * mpmath.sqrt(3)
        u = A / (k * R0 ** 2)
        out = [u]
        if order >= 1:
            dRm, dR0, dRp = vals[3:6]
            A1 = dRp * Rm + Rp * dRm
            out.append((A1 * R0 - 2 * A * dR0) / (k * R0 ** 3))
        if order >= 2:
            d2Rm, d2R0, d2Rp = vals[6:9]
            A2 = d2Rp * Rm + 2 * dRp * dRm + Rp * d2Rm
            out.append((A2 * R0 ** 2 - 4 * A1 * R0 * dR0 - 2 * A * R0 * d2R0
                        + 6 * A * dR0 ** 2) / (k * R0 ** 4))
        return out


def _x_jet(sol, x, zeta, order, digits=20):
    """u, u_x, u_xx at x (given the matching zeta) as mpc."""
    jet = _u_jet(sol, zeta, order, digits)
    with mpmath.workdps(digits + 10):
        x = mpmath.mpc(x)
        z = mpmath.mpc(zeta)
        zx = z / (3 * x)
        out = [jet[0]]
        if order >= 1:
            out.append(jet[1] * zx)
        if order >= 2:
            zxx = -2 * z / (9 * x ** 2)
            out.append(jet[2] * zx ** 2 + jet[1] * zxx)
        return out


def _zeta_of_x(x: complex) -> complex:
    if x == 0:
        raise PoleHit("x = 0 is a branch point of u_n")
    return SQRT3 * _cbrt(x)


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------

def eval_u(sol: AlgebraicSolution, x: complex) -> complex:
    """u_n(x) on the principal sheet.

    Examples
    --------
    >>> round(eval_u(solution(0), 8).real, 12)
    1.0
    """
    x = complex(x)
    return complex(_u_jet(sol, _zeta_of_x(x))[0])


def eval_du_dx(sol: AlgebraicSolution, x: complex) -> complex:
    """Exact derivative u_n'(x)."""
    x = complex(x)
    return complex(_x_jet(sol, x, _zeta_of_x(x), 1)[1])


def _zeta_of_y(n: int, y: complex) -> complex:
    # sqrt(3) (n^{3/2} y)^{1/3} = sqrt(3 n) y^{1/3} for n > 0
    return math.sqrt(3 * n) * _cbrt(y)


def _require_positive(n):
    if n <= 0:
        raise ValueError("the rescaled solution U_n needs n >= 1")


def eval_U(sol: AlgebraicSolution, y: complex) -> complex:
    """U_n(y) = n**(-1/2) u_n(n**(3/2) y)."""
    _require_positive(sol.n)
    y = complex(y)
    if y == 0:
        raise PoleHit("y = 0 is a branch point")
    return complex(_u_jet(sol, _zeta_of_y(sol.n, y))[0]) / math.sqrt(sol.n)


def shifted_jet(sol: AlgebraicSolution, y: complex, z: complex, order=2, digits=20):
    """(W, dW/dz, d2W/dz2) for W(z) = U_n(y + z/n), as Python complex numbers."""
    _require_positive(sol.n)
    n = sol.n
    yy = complex(y) + complex(z) / n
    if yy == 0:
        raise PoleHit("y + z/n = 0 is a branch point")
    x = n ** 1.5 * yy
    zeta = _zeta_of_y(n, yy)
    jet = _x_jet(sol, x, zeta, order, digits)
    # W = n^{-1/2} u, W' = u_x, W'' = n^{1/2} u_xx
    scale = [n ** -0.5, 1.0, n ** 0.5]
    return tuple(complex(v) * s for v, s in zip(jet, scale))


def eval_U_shifted(sol: AlgebraicSolution, y: complex, z: complex) -> complex:
    """W(z) = U_n(y + z/n)."""
    return shifted_jet(sol, y, z, order=0)[0]


def eval_dU_dz(sol: AlgebraicSolution, y: complex, z: complex) -> complex:
    """dW/dz = u_n'(x) at x = n**(3/2) (y + z/n), from exact derivatives."""
    return shifted_jet(sol, y, z, order=1)[1]


def eval_d2U_dz2(sol: AlgebraicSolution, y: complex, z: complex) -> complex:
    """d2W/dz2 = n**(1/2) u_n''(x)."""
    return shifted_jet(sol, y, z, order=2)[2]


def ode_residual_p3d7(sol: AlgebraicSolution, x: complex, relative=True):
    """Residual of u'' = u'^2/u - u'/x + (8u^2 + 2n)/x - 1/u.

    Parameters
    ----------
    relative : bool
        If true, divide by the largest modulus among u'' and the individual
        right-hand side terms, so the value is a relative error.

    Raises
    ------
    PoleHit, ZeroHit
    """
    x = complex(x)
    zeta = _zeta_of_x(x)
    u, u1, u2 = _x_jet(sol, x, zeta, 2)
    with mpmath.workdps(30):
        if abs(u) <= 1e-12 * max(1, abs(u1)):
            raise ZeroHit(f"u_{sol.n} vanishes near x = {x}")
        xm = mpmath.mpc(x)
        terms = [u1 ** 2 / u, -u1 / xm, (8 * u ** 2 + 2 * sol.n) / xm, -1 / u]
        res = u2 - sum(terms)
        if relative:
            scale = max([abs(u2)] + [abs(t) for t in terms])
            res = res / scale
        return complex(res)


def check_symmetry(n: int, x: complex, tol=1e-10, table=None) -> bool:
    """Check +-i u_n(+-i x) = u_{-n}(e^{+-2 pi i} x) for both signs.

    The left side is evaluated at the rotated point zeta e^{+-i pi/6} and the
    right side at zeta e^{+-2 pi i/3}, where zeta = sqrt(3) x^{1/3}; this
    realises e^{+-2 pi i} x on the Riemann surface of the cube root.
    """
    t = table if table is not None else default_table()
    sp = AlgebraicSolution.build(n, t)
    sm = AlgebraicSolution.build(-n, t)
    zeta = _zeta_of_x(complex(x))
    for sgn in (1, -1):
        lhs = complex(sgn * 1j * _u_jet(sp, zeta * complex(mpmath.expjpi(sgn / 6.0)))[0])
        rhs = complex(_u_jet(sm, zeta * complex(mpmath.expjpi(sgn * 2 / 3.0)))[0])
        if abs(lhs - rhs) > tol * max(abs(rhs), 1e-300):
            return False
    return True


# ---------------------------------------------------------------------------
# density grids in the Y = y^{1/3} plane
# ---------------------------------------------------------------------------

@dataclass
class GridField:
    """Samples of a nonnegative field on a rectangle.

    ``values[j, i]`` belongs to the point ``xs[i] + 1j * ys[j]``.  Poles are
    stored as ``inf``.
    """

    bounds: tuple
    resolution: tuple
    values: np.ndarray
    poles: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    @property
    def xs(self):
        return np.linspace(self.bounds[0], self.bounds[1], self.resolution[0])

    @property
    def ys(self):
        return np.linspace(self.bounds[2], self.bounds[3], self.resolution[1])

    def points(self):
        X, Y = np.meshgrid(self.xs, self.ys)
        return X + 1j * Y

    def local_maxima(self, threshold=10.0):
        """Interior grid points that are 8-neighbour maxima above ``threshold``."""
        v = np.where(np.isfinite(self.values), self.values, np.inf)
        c = v[1:-1, 1:-1]
        mask = c > threshold
        for dj in (-1, 0, 1):
            for di in (-1, 0, 1):
                if dj or di:
                    mask &= c >= v[1 + dj:v.shape[0] - 1 + dj, 1 + di:v.shape[1] - 1 + di]
        P = self.points()[1:-1, 1:-1]
        return P[mask]

    def to_csv(self, fh):
        fh.write("Y_re,Y_im,modulus\n")
        P = self.points()
        for p, v in zip(P.ravel(), self.values.ravel()):
            fh.write(f"{p.real!r},{p.imag!r},{'inf' if not np.isfinite(v) else repr(float(v))}\n")


class _Factored:
    """|R(zeta)| as lead * |zeta|^v * prod |zeta^g - w_k| for fast grids."""

    def __init__(self, R: LaurentPoly):
        self.v = R.valuation
        self.g = R._exponent_stride()
        items = R.items()
        lead = items[-1][1]
        q = [c for _, c in items]  # ascending, may contain gaps
        deg = (R.degree - R.valuation) // self.g
        coeffs = [0] * (deg + 1)
        for k, c in items:
            coeffs[(k - R.valuation) // self.g] = c
        self.log_lead = math.log(abs(float(lead))) if abs(lead) < 1e300 else float(mpmath.log(abs(mpmath.mpf(lead.numerator) / lead.denominator)))
        if deg == 0:
            self.roots = np.zeros(0, complex)
            return
        bits = max(abs(c.numerator).bit_length() for c in q)
        with mpmath.workdps(max(50, 2 * bits // 3 + 30)):
            rts = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)],
                                   maxsteps=400, extraprec=4 * bits + 100)
        self.roots = np.array([complex(r) for r in rts])

    def log_abs(self, zeta: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            out = self.log_lead + self.v * np.log(np.abs(zeta))
            w = zeta ** self.g
            for r in self.roots:
                out = out + np.log(np.abs(w - r))
        return out

    def zeros(self) -> np.ndarray:
        """All zeros in the zeta-plane (excluding zeta = 0)."""
        out = []
        for r in self.roots:
            base = complex(mpmath.root(r, self.g))
            for k in range(self.g):
                out.append(base * complex(mpmath.expjpi(2.0 * k / self.g)))
        return np.array(out)


def pole_locations_Y(n: int, table=None) -> np.ndarray:
    """Poles of U_n(Y^3) in the Y-plane, i.e. zeros of R_n at zeta = sqrt(3n) Y."""
    t = table if table is not None else default_table()
    scale = math.sqrt(3 * n) if n > 0 else SQRT3
    return _Factored(t.compute(n)).zeros() / scale


def density_grid(n: int, bounds=(-1.0, 1.0, -1.0, 1.0), resolution=(400, 400), table=None) -> GridField:
    """|U_n(Y^3)| on a rectangle of the Y-plane.

    Uses zeta = sqrt(3 n) Y, so the map is single valued in Y.  For ``n = 0``
    (where the n**(-1/2) scaling is undefined) the unscaled |u_0(Y^3)| is
    returned.
    """
    nx, ny = resolution
    if nx < 2 or ny < 2:
        raise ValueError("resolution must be at least 2 x 2")
    t = table if table is not None else default_table()
    xs = np.linspace(bounds[0], bounds[1], nx)
    ys = np.linspace(bounds[2], bounds[3], ny)
    X, Yg = np.meshgrid(xs, ys)
    Y = X + 1j * Yg
    scale = math.sqrt(3 * n) if n > 0 else SQRT3
    zeta = scale * Y
    fm, f0, fp = (_Factored(t.compute(k)) for k in (n - 1, n, n + 1))
    logv = fm.log_abs(zeta) + fp.log_abs(zeta) - 2 * f0.log_abs(zeta) - math.log(2 * SQRT3)
    if n > 0:
        logv -= 0.5 * math.log(n)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.exp(logv)
    vals = np.where(np.isnan(vals), np.inf, vals)
    poles = f0.zeros() / scale if n != 0 else np.zeros(0, complex)
    inside = ((poles.real >= bounds[0]) & (poles.real <= bounds[1])
              & (poles.imag >= bounds[2]) & (poles.imag <= bounds[3]))
    return GridField(tuple(bounds), (nx, ny), vals, poles[inside])
