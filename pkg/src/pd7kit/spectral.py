"""Spectral curve, Boutroux conditions and the bow-tie region.

The curve is ``h_eta**2 = f(eta) = P(mu)/mu**3`` with ``mu = -i eta`` and

    P(mu; y, c) = -mu**3 + mu**2 + c mu - y**2 / 4.

With roots ``s1, s2, s3`` of P, the branch used throughout is

    h_eta = -i sqrt((mu - s1)/mu) * (mu - s2)/mu * sqrt((mu - s3)/(mu - s2)),

with principal square roots.  It is analytic off the straight cuts
``[0, i s1]`` and ``[i s2, i s3]`` and tends to ``-i`` at infinity.

The Boutroux conditions ask for the real parts of the integrals of h_eta
from ``i s1`` to ``i s2`` and from ``i s2`` to ``i s3`` to vanish.  For real
``0 < y < y_c`` they reduce to one real equation in real c; elsewhere in the
right wing the solution is continued in ``(Re c, Im c)`` by Newton's method.

Paths from ``i s1`` to ``i s2`` turn about the origin on a circle between
the two roots, starting off the cut ``[0, i s1]``.  Other paths are
"rectangles": leave the start point along the normal ``nu`` of the root axis
by a distance ``D = 2 max|s_j|``, run parallel to the axis, and come back
along the normal.  Endpoint square-root behaviour is
removed by a quadratic change of variable and the panels are Gauss-Legendre.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from .errors import (AtOrigin, BoundaryHit, BracketFailure, ContinuationStall,
                     OnCut, PathConstructionFailure, QuadratureFailure, RealityViolation,
                     RootCollision)

__all__ = [
    "CurveParams",
    "CurveRoots",
    "PathSpec",
    "BoutrouxSolution",
    "P",
    "roots_of_P",
    "h_eta",
    "h_eta_split",
    "phi",
    "integrate_path",
    "rectangle_path",
    "origin_detour_path",
    "boutroux_integrals",
    "boutroux_residuals",
    "jacobian",
    "seed_c0",
    "discriminant_c",
    "solve_c1_real",
    "continue_c1",
    "solve_c1",
    "degenerate_boutroux",
    "bowtie_boundary",
    "bowtie_polyline",
    "BowTie",
    "h_value",
    "phases",
    "R_expansion_check",
    "Y_C",
]

QUAD_TOL = 1e-12
NEWTON_TOL = 1e-11
COLLISION_TOL = 1e-8
Y_C = 0.29177  # quoted value, for reference only; see bowtie_boundary(0)

_GL_NODES, _GL_WEIGHTS = leggauss(16)


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveParams:
    y: complex
    c: complex

    def __post_init__(self):
        if complex(self.y) == 0:
            raise ValueError("y must be nonzero")


@dataclass(frozen=True)
class CurveRoots:
    """Labelled roots of P."""

    s1: complex
    s2: complex
    s3: complex
    labeling: str = "continued"

    @property
    def s(self):
        return (self.s1, self.s2, self.s3)

    @property
    def etas(self):
        return tuple(1j * s for s in self.s)

    def min_gap(self):
        return min(abs(a - b) for a, b in itertools.combinations(self.s, 2))

    def scale(self):
        return max(abs(s) for s in self.s)

    def axis(self):
        """Unit vector from ``i s1`` towards ``i s3`` in the eta-plane."""
        a = 1j * (self.s3 - self.s1)
        return a / abs(a)

    def normal(self):
        """Right-hand normal of the axis (``+1`` for real roots)."""
        return -1j * self.axis()


@dataclass(frozen=True)
class PathSpec:
    """Polyline in the eta-plane; the first/last vertex may be a branch point."""

    waypoints: tuple
    singular_start: bool = True
    singular_end: bool = True
    detour: float = 0.0


@dataclass(frozen=True)
class BoutrouxSolution:
    y: complex
    c1: complex
    I12: float
    I23: float
    iterations: int
    roots: CurveRoots
    E: complex
    psi: float = float("nan")
    xi: float = float("nan")
    kappa: float = float("nan")
    c0: complex = complex("nan")
    jacobian_det: float = float("nan")
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def params(self):
        return CurveParams(self.y, self.c1)


# ---------------------------------------------------------------------------
# the curve
# ---------------------------------------------------------------------------

def P(mu, y, c):
    """``-mu^3 + mu^2 + c mu - y^2/4``."""
    return -mu ** 3 + mu ** 2 + c * mu - y * y / 4


def _polish_root(s, y, c):
    for _ in range(2):
        d = -3 * s * s + 2 * s + c
        if d == 0:
            break
        s = s - P(s, y, c) / d
    return s


def _match(prev, new):
    """Permutation of ``new`` closest to ``prev`` (nearest-neighbour labels)."""
    best = min(itertools.permutations(new),
               key=lambda p: sum(abs(a - b) for a, b in zip(prev, p)))
    return best


def roots_of_P(p: CurveParams, previous: CurveRoots | None = None, collision_tol=COLLISION_TOL) -> CurveRoots:
    """Roots of P, polished by Newton and labelled.

    With ``previous`` the labels follow by nearest-neighbour matching;
    otherwise roots are ordered by real part (for real y, c this is the
    ordering ``s1 < s2 < s3``).

    Raises
    ------
    RootCollision
        If two roots are closer than ``collision_tol * max(1, |s|)``.
    """
    y, c = complex(p.y), complex(p.c)
    raw = np.roots([-1.0, 1.0, c, -y * y / 4])
    rs = [_polish_root(complex(r), y, c) for r in raw]
    if previous is not None:
        rs = list(_match(previous.s, rs))
        tag = "continued"
    else:
        rs.sort(key=lambda z: (z.real, z.imag))
        tag = "real-seed" if all(abs(r.imag) < 1e-12 for r in rs) else "sorted"
        if tag == "real-seed":
            rs = [complex(r.real, 0.0) for r in rs]
    out = CurveRoots(*rs, labeling=tag)
    if out.min_gap() < collision_tol * max(1.0, out.scale()):
        raise RootCollision(f"roots {out.s} collide")
    return out


def h_eta(eta, p: CurveParams, roots: CurveRoots, check=True):
    """The branch of dh/deta described in the module docstring.

    Vectorised over ``eta``.  With ``check`` a scalar argument on a cut or at
    the origin raises :class:`OnCut` or :class:`AtOrigin`.
    """
    s1, s2, s3 = roots.s
    if check and np.ndim(eta) == 0:
        e = complex(eta)
        if e == 0:
            raise AtOrigin("h_eta is singular at eta = 0")
        for a, b in ((0j, 1j * s1), (1j * s2, 1j * s3)):
            if _on_segment(e, a, b):
                raise OnCut(f"eta = {e} lies on the cut [{a}, {b}]")
    return h_eta_split(np.asarray(eta, dtype=complex), 0.0, roots)


def h_eta_split(base, delta, roots: CurveRoots):
    """h_eta at ``eta = base + delta`` without forming the sum.

    Differences ``mu - s_j`` are computed as ``(-i base - s_j) - i delta``,
    which is exact when ``base`` is a branch point ``i s_j``; quadrature
    nodes graded towards a branch point keep full relative accuracy.
    """
    s1, s2, s3 = roots.s
    mb = -1j * np.asarray(base, dtype=complex)
    md = -1j * np.asarray(delta, dtype=complex)
    m0 = mb + md
    m1 = (mb - s1) + md
    m2 = (mb - s2) + md
    m3 = (mb - s3) + md
    with np.errstate(divide="ignore", invalid="ignore"):
        S = np.sqrt(m1 / m0) * (m2 / m0) * np.sqrt(m3 / m2)
    return -1j * S


def _on_segment(e, a, b, tol=1e-14):
    ab = b - a
    if ab == 0:
        return abs(e - a) <= tol
    t = ((e - a) / ab)
    return abs(t.imag) * abs(ab) <= tol * max(1, abs(ab)) and 0 < t.real < 1


def phi(eta, y):
    """``Phi(eta, y) = i eta - y (-i eta)^(-1/2)`` with the principal power."""
    eta = complex(eta)
    if eta == 0:
        raise AtOrigin("Phi is singular at eta = 0")
    return 1j * eta - complex(y) * (-1j * eta) ** -0.5


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def _grading(t, sing_a, sing_b):
    if sing_a and sing_b:
        return 3 * t ** 2 - 2 * t ** 3, 6 * t - 6 * t ** 2
    if sing_a:
        return t ** 2, 2 * t
    if sing_b:
        return 1 - (1 - t) ** 2, 2 * (1 - t)
    return t, np.ones_like(t)


def _panel_sums(f, a, b, lo, hi, sing_a, sing_b):
    """16-point Gauss-Legendre sums over the parameter panels ``[lo, hi]``."""
    h = (hi - lo)[:, None]
    t = (lo[:, None] + hi[:, None]) / 2 + (h / 2) * _GL_NODES[None, :]
    u, du = _grading(t, sing_a, sing_b)
    vals = f(a, (b - a) * u) * du
    return np.sum(vals * (h / 2) * _GL_WEIGHTS[None, :], axis=1) * (b - a)


def _adaptive_segment(f, a, b, sing_a, sing_b, tol, start=8, max_level=40, max_panels=20000):
    """Adaptive bisection of Gauss-Legendre panels on ``a -> b``.

    The parameter is graded quadratically at singular (square-root) ends.
    All panels of one level are evaluated in a single vectorised call; a
    panel is accepted when its two halves agree with it to within its share
    of the tolerance.
    """
    lo = np.linspace(0.0, 1.0, start + 1)[:-1]
    hi = lo + 1.0 / start
    coarse = _panel_sums(f, a, b, lo, hi, sing_a, sing_b)
    total = 0j
    scale = max(1.0, abs(complex(np.sum(coarse))))
    for _ in range(max_level):
        mid = (lo + hi) / 2
        left = _panel_sums(f, a, b, lo, mid, sing_a, sing_b)
        right = _panel_sums(f, a, b, mid, hi, sing_a, sing_b)
        fine = left + right
        err = np.abs(fine - coarse)
        ok = err <= tol * scale * (hi - lo) + 1e-300
        ok &= np.isfinite(fine)
        total += complex(np.sum(fine[ok]))
        if ok.all():
            return total
        keep = ~ok
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        coarse = np.concatenate([left[keep], right[keep]])
        if lo.size > max_panels:
            break
    raise QuadratureFailure(f"segment {a}->{b} did not converge")


def _graded_integral(f, a, b, sing_a, sing_b, tol):
    """Integral over ``a -> b``; square-root ends are moved to parameter 0.

    Keeping the singular end at the origin of the parameter avoids the
    cancellation in ``1 - t`` that would otherwise hit the endpoint exactly.
    """
    if sing_a and sing_b:
        m = (a + b) / 2
        return (_adaptive_segment(f, a, m, True, False, tol)
                - _adaptive_segment(f, b, m, True, False, tol))
    if sing_b:
        return -_adaptive_segment(f, b, a, True, False, tol)
    return _adaptive_segment(f, a, b, sing_a, False, tol)


def integrate_path(f, path: PathSpec, tol=QUAD_TOL):
    """Integral of ``f`` along a polyline, graded at singular ends.

    ``f(base, delta)`` is evaluated at ``eta = base + delta`` where ``base``
    is a segment start (a branch point for graded segments); see
    :func:`h_eta_split`.
    """
    pts = path.waypoints
    total = 0j
    last = len(pts) - 2
    for k in range(len(pts) - 1):
        total += _graded_integral(f, pts[k], pts[k + 1],
                                  path.singular_start and k == 0,
                                  path.singular_end and k == last, tol)
    return total


def rectangle_path(a, b, roots: CurveRoots, side=1.0, end_singular=True, start_singular=True):
    """``a -> a + D nu -> b + D nu -> b`` with ``nu = side * roots.normal()``.

    ``D = 2 max|s|`` unless the origin sits off the root axis on the ``nu``
    side; then the offset grows so that the origin stays strictly between
    the axis and the parallel leg.
    """
    D = 2.0 * roots.scale()
    nu = side * roots.normal()
    t0 = (-complex(a) * nu.conjugate()).real  # offset of the origin along nu
    if t0 > 0:
        D = max(D, t0 + 0.5 * D)
    return PathSpec((a, a + D * nu, b + D * nu, b), start_singular, end_singular, D)


def origin_detour_path(a, b, max_step=math.pi / 4) -> PathSpec:
    """Path from the root ``a`` (end of the cut ``[0, a]``) to the root ``b``.

    It leaves ``a`` off the cut and turns counter-clockwise about the origin
    on a circle until it reaches the direction of ``b``.  When ``|b|`` clearly
    exceeds ``|a|`` the circle has radius ``sqrt(|a| |b|)`` and the last leg
    runs radially out to ``b``; otherwise the circle encloses both roots and
    the last leg comes in obliquely from the clockwise side, so it never
    runs along a cut that continues beyond ``b``.  For real ``y`` this is
    the route passing to the right of ``[i s1, 0]``; for complex ``y`` it
    turns with the cut, so the class of the path varies continuously.

    Raises
    ------
    PathConstructionFailure
        If ``b`` lies on the ray of the cut.
    """
    a, b = complex(a), complex(b)
    ra, rb = abs(a), abs(b)
    alpha = cmath.phase(a)
    sweep = (cmath.phase(b) - alpha) % (2 * math.pi)
    if sweep < 1e-3 and rb > ra:
        # b lies just beyond a on the ray of the cut: the thin turn
        # degenerates into the straight segment
        return PathSpec((a, b), True, True, 0.0)
    if sweep < 1e-3 or sweep > 2 * math.pi - 1e-3:
        raise PathConstructionFailure("target lies on the ray of the cut")
    if rb > 1.05 * ra:
        rc = math.sqrt(ra * rb)
        end = alpha + sweep
    else:
        rc = 1.5 * max(ra, rb)
        end = alpha + sweep - min(math.pi / 8, sweep / 4)
    th0 = alpha + min(math.pi / 4, (end - alpha) / 2)
    k = max(1, math.ceil((end - th0) / max_step))
    arc = [rc * cmath.exp(1j * t) for t in np.linspace(th0, end, k + 1)]
    return PathSpec(tuple([a] + arc + [b]), True, True, rc)


def boutroux_integrals(p: CurveParams, roots: CurveRoots, tol=QUAD_TOL):
    """Complex integrals of h_eta from ``i s1`` to ``i s2`` and ``i s2`` to ``i s3``."""
    e1, e2, e3 = roots.etas
    f = lambda b, d: h_eta_split(b, d, roots)
    J12 = integrate_path(f, origin_detour_path(e1, e2), tol)
    J23 = integrate_path(f, rectangle_path(e2, e3, roots), tol)
    return J12, J23


def boutroux_residuals(p: CurveParams, roots: CurveRoots | None = None, tol=QUAD_TOL):
    """``(I12, I23)``: real parts of :func:`boutroux_integrals`."""
    roots = roots if roots is not None else roots_of_P(p)
    J12, J23 = boutroux_integrals(p, roots, tol)
    return J12.real, J23.real


def jacobian(p: CurveParams, roots: CurveRoots | None = None, tol=QUAD_TOL):
    """Jacobian of ``(I12, I23)`` with respect to ``(Re c, Im c)``.

    Since ``d h_eta / dc = -1 / (2 eta^2 h_eta)``, both rows come from the
    two complex integrals ``A, B`` of ``1/(eta^2 h_eta)``:
    ``[[-Re A/2, Im A/2], [-Re B/2, Im B/2]]`` with determinant
    ``-Im(conj(A) B)/4``.

    Returns
    -------
    J : ndarray, shape (2, 2)
    det : float
    AB : tuple of complex
    """
    roots = roots if roots is not None else roots_of_P(p)
    e1, e2, e3 = roots.etas
    def f(b, d):
        e = b + d
        return 1.0 / (e * e * h_eta_split(b, d, roots))

    A = integrate_path(f, origin_detour_path(e1, e2), tol)
    B = integrate_path(f, rectangle_path(e2, e3, roots), tol)
    J = np.array([[-0.5 * A.real, 0.5 * A.imag], [-0.5 * B.real, 0.5 * B.imag]])
    det = -0.25 * (np.conj(A) * B).imag
    return J, float(det), (A, B)


# ---------------------------------------------------------------------------
# double-root seed
# ---------------------------------------------------------------------------

def _s_roots(y):
    return np.roots([1.0, -2.0, 1.0, complex(y) ** 2])


def seed_c0(y, s_prev=None):
    """Double-root data ``(c0, s, d)`` with ``s (s-1)^2 = -y^2``, ``d = (1-s)/2``.

    For real y the real negative root s is used.  For complex y the root is
    continued along the ray from ``|y| = 1e-3`` (where ``s ~ -y^2``), or
    taken nearest to ``s_prev`` when given.
    """
    y = complex(y)
    if s_prev is not None:
        r = _s_roots(y)
        s = complex(r[np.argmin(abs(r - s_prev))])
    elif y.imag == 0:
        r = _s_roots(y)
        real = [z.real for z in r if abs(z.imag) < 1e-9 and z.real < 0]
        s = complex(min(real))
    else:
        th = cmath.phase(y)
        r0 = min(1e-3, abs(y))
        s = -(r0 * cmath.exp(1j * th)) ** 2
        for r in np.linspace(r0, abs(y), 200):
            rr = _s_roots(r * cmath.exp(1j * th))
            s = complex(rr[np.argmin(abs(rr - s))])
    for _ in range(2):  # Newton polish on s^3 - 2s^2 + s + y^2
        s = s - (s ** 3 - 2 * s ** 2 + s + y * y) / (3 * s * s - 4 * s + 1)
    d = (1 - s) / 2
    c0 = (3 * s * s - 2 * s - 1) / 4
    if y.imag == 0 and s_prev is None:
        s, d, c0 = complex(s.real), complex(d.real), complex(c0.real)
    return c0, s, d


def discriminant_c(c, y):
    """``64c^3 + 16c^2 + 72y^2 c + 16y^2 - 27y^4`` (vanishes at double roots)."""
    return 64 * c ** 3 + 16 * c ** 2 + 72 * y ** 2 * c + 16 * y ** 2 - 27 * y ** 4


def degenerate_boutroux(y, s_prev=None, tol=QUAD_TOL):
    """``Re`` of the h_eta integral from ``i s`` to ``i d`` at ``c = c0(y)``.

    Negative inside the right wing, zero on its boundary.
    """
    c0, s, d = seed_c0(y, s_prev)
    roots = CurveRoots(s, d, d, "degenerate")
    f = lambda b, dd: h_eta_split(b, dd, roots)
    return integrate_path(f, origin_detour_path(1j * s, 1j * d), tol).real


# ---------------------------------------------------------------------------
# solving the Boutroux conditions
# ---------------------------------------------------------------------------

def _finish(y, c, roots, iterations, c0=complex("nan"), with_phases=True, tol=QUAD_TOL):
    p = CurveParams(y, c)
    I12, I23 = boutroux_residuals(p, roots, tol)
    _, det, _ = jacobian(p, roots, tol)
    sol = BoutrouxSolution(complex(y), complex(c), I12, I23, iterations, roots,
                           -8 * complex(c) / complex(y) ** 2, c0=complex(c0), jacobian_det=det)
    if with_phases:
        ph = phases(sol, check=False)
        sol = replace(sol, psi=ph["psi"], xi=ph["xi"], kappa=ph["kappa"], extra=ph)
    return sol


def solve_c1_real(y: float, tol=1e-13, with_phases=True, quad_tol=QUAD_TOL) -> BoutrouxSolution:
    """Boutroux solution for real ``0 < y < y_c``.

    ``I12`` is increasing in real ``c > c0(y)`` and negative just above
    ``c0``; the upper bracket doubles until ``I12 > 0``.

    Raises
    ------
    BracketFailure
        If ``I12`` is not negative just above ``c0`` (y outside the wing).
    """
    y = float(y)
    if not y > 0:
        raise BracketFailure("real seed needs y > 0")
    c0, s, d = seed_c0(y)
    c0 = c0.real

    def F(c):
        return boutroux_residuals(CurveParams(y, c), roots_of_P(CurveParams(y, c)), quad_tol)[0]

    eps = 1e-7 * max(1.0, abs(c0))
    lo = c0 + eps
    try:
        flo = F(lo)
    except RootCollision as exc:
        raise BracketFailure(str(exc)) from exc
    if not flo < 0:
        raise BracketFailure(f"I12(c0+) = {flo:.3e} is not negative; y = {y} is outside the wing")
    width = 0.5
    while F(c0 + width) <= 0:
        width *= 2
        if width > 1e8:
            raise BracketFailure("no sign change found")
    c1, info = brentq(F, lo, c0 + width, xtol=tol * max(1.0, abs(c0)), rtol=1e-15, full_output=True)
    roots = roots_of_P(CurveParams(y, c1))
    return _finish(y, c1, roots, info.iterations, c0=c0, with_phases=with_phases, tol=quad_tol)


def _newton(y, c, roots, tol=NEWTON_TOL, max_iter=50, max_halvings=8, quad_tol=QUAD_TOL):
    """Damped Newton on (I12, I23) in (Re c, Im c).  Returns (c, roots, its)."""
    p = CurveParams(y, c)
    F = np.array(boutroux_residuals(p, roots, quad_tol))
    for it in range(1, max_iter + 1):
        if np.max(np.abs(F)) <= tol:
            return c, roots, it - 1
        J, det, _ = jacobian(p, roots, quad_tol)
        dx = np.linalg.solve(J, -F)
        lam = 1.0
        for _ in range(max_halvings + 1):
            cn = c + lam * complex(dx[0], dx[1])
            try:
                rn = roots_of_P(CurveParams(y, cn), roots)
                Fn = np.array(boutroux_residuals(CurveParams(y, cn), rn, quad_tol))
            except (RootCollision, QuadratureFailure):
                lam /= 2
                continue
            if np.max(np.abs(Fn)) < np.max(np.abs(F)):
                break
            lam /= 2
        else:
            raise ContinuationStall("Newton damping exhausted")
        c, roots, F, p = cn, rn, Fn, CurveParams(y, cn)
    if np.max(np.abs(F)) <= tol:
        return c, roots, max_iter
    raise ContinuationStall("Newton did not converge")


def _polar_path(y0, y1):
    """Arc at ``|y0|`` to ``arg y1`` followed by the radial segment to ``y1``."""
    r0, r1 = abs(y0), abs(y1)
    t0, t1 = cmath.phase(y0), cmath.phase(y1)
    L1 = r0 * abs(t1 - t0)
    L2 = abs(r1 - r0)
    L = L1 + L2

    def point(s):
        if s <= L1 and L1 > 0:
            return r0 * cmath.exp(1j * (t0 + (t1 - t0) * s / L1))
        frac = (s - L1) / L2 if L2 > 0 else 1.0
        return (r0 + (r1 - r0) * frac) * cmath.exp(1j * t1)

    return point, L


def continue_c1(y_target, y_seed, c_seed, roots_seed: CurveRoots | None = None,
                step=1e-2, min_step=1e-6, with_phases=True, check_boundary=True,
                quad_tol=QUAD_TOL, newton_tol=NEWTON_TOL) -> BoutrouxSolution:
    """Follow ``c1(y)`` from a solved real seed to ``y_target``.

    Predictor: secant extrapolation in the path parameter.  Corrector: damped
    Newton with the analytic Jacobian.  Roots keep their labels by
    nearest-neighbour matching.  The path is an arc at ``|y_seed|`` followed
    by a radial segment.

    Raises
    ------
    BoundaryHit
        If the path leaves the right wing: two roots collide, or the
        degenerate Boutroux function turns nonnegative.
    ContinuationStall
        If the step size falls below ``min_step`` for another reason.
    """
    y_target = complex(y_target)
    point, L = _polar_path(complex(y_seed), y_target)
    roots = roots_seed if roots_seed is not None else roots_of_P(CurveParams(y_seed, c_seed))
    c = complex(c_seed)
    s_deg = seed_c0(complex(y_seed))[1]
    hist = [(0.0, c)]
    pos, h, total_its = 0.0, step, 0
    while pos < L - 1e-15:
        h = min(h, L - pos)
        nxt = pos + h
        yn = point(nxt)
        if len(hist) >= 2:
            (p0, c0_), (p1, c1_) = hist[-2], hist[-1]
            cp = c1_ + (c1_ - c0_) * (nxt - p1) / (p1 - p0)
        else:
            cp = c
        try:
            if check_boundary:
                s_deg_n = seed_c0(yn, s_deg)[1]
                if degenerate_boutroux(yn, s_deg) >= 0:
                    raise BoundaryHit(f"y = {yn} is on or beyond the bow-tie boundary")
            rp = roots_of_P(CurveParams(yn, cp), roots)
            cn, rn, its = _newton(yn, cp, rp, tol=newton_tol, quad_tol=quad_tol)
            # reject label jumps: roots must move continuously
            if max(abs(a - b) for a, b in zip(rn.s, roots.s)) > 0.25 * roots.min_gap() + 10 * h:
                raise ContinuationStall("root labels jumped")
        except BoundaryHit:
            raise
        except (RootCollision, ContinuationStall, QuadratureFailure, np.linalg.LinAlgError) as exc:
            h /= 2
            if h < min_step:
                if roots.min_gap() < 1e-3 * max(1.0, roots.scale()):
                    raise BoundaryHit(f"roots collide near y = {yn}") from exc
                raise ContinuationStall(f"step floor reached near y = {yn}") from exc
            continue
        pos, c, roots = nxt, cn, rn
        if check_boundary:
            s_deg = s_deg_n
        total_its += its
        hist.append((pos, c))
        h = min(1.5 * h, 5 * step)
    return _finish(y_target, c, roots, total_its, c0=seed_c0(y_target, s_deg)[0],
                   with_phases=with_phases, tol=quad_tol)


def solve_c1(y, with_phases=True, quad_tol=QUAD_TOL, newton_tol=NEWTON_TOL) -> BoutrouxSolution:
    """Boutroux solution anywhere in the wings.

    Real ``0 < y < y_c`` is solved directly.  Other points with ``Re y > 0``
    are reached by continuation from a real seed; ``Re y < 0`` uses
    ``c1(-y) = c1(y)`` (P depends on ``y`` only through ``y^2``).
    """
    y = complex(y)
    if y.real < 0:
        base = solve_c1(-y, False, quad_tol, newton_tol)
        return _finish(y, base.c1, roots_of_P(CurveParams(y, base.c1)), base.iterations,
                       c0=base.c0, with_phases=with_phases, tol=quad_tol)
    if y.imag == 0:
        return solve_c1_real(y.real, with_phases=with_phases, quad_tol=quad_tol)
    r = abs(y)
    y_seed = r if r < 0.27 else 0.15
    seed = solve_c1_real(y_seed, with_phases=False, quad_tol=quad_tol)
    return continue_c1(y, y_seed, seed.c1, seed.roots, with_phases=with_phases,
                       quad_tol=quad_tol, newton_tol=newton_tol)


# ---------------------------------------------------------------------------
# bow-tie region
# ---------------------------------------------------------------------------

def bowtie_boundary(arg_y: float, tol=1e-10, r_max=0.6) -> complex:
    """Boundary point of the right wing on the ray ``arg y = arg_y``.

    The wing is where the continued Boutroux solution keeps its three roots
    distinct; its edge is where ``c1`` reaches the double-root value ``c0``,
    i.e. where :func:`degenerate_boutroux` vanishes.  The zero is bracketed
    along the ray and refined with Brent's method.
    """
    if not abs(arg_y) < math.pi / 2:
        raise ValueError("the right wing needs |arg y| < pi/2")
    u = cmath.exp(1j * arg_y)
    # follow the s-branch along the ray so that each evaluation is cheap
    rs = np.linspace(0.02, r_max, 30)
    s_prev = seed_c0(rs[0] * u)[1]
    vals, ss = [], []
    for r in rs:
        s_prev = seed_c0(r * u, s_prev)[1]
        ss.append(s_prev)
        vals.append(degenerate_boutroux(r * u, s_prev))
    for k in range(len(rs) - 1):
        if vals[k] < 0 <= vals[k + 1]:
            sk = ss[k]

            def G(r):
                return degenerate_boutroux(r * u, seed_c0(r * u, sk)[1])

            r = brentq(G, rs[k], rs[k + 1], xtol=tol, rtol=1e-15)
            return r * u
    raise BracketFailure(f"no boundary found on the ray arg y = {arg_y}")


def bowtie_polyline(n_rays=64, tol=1e-10):
    """Boundary of the right wing as ``(y_points, Y_points)`` arrays.

    Rays are spread over ``(-pi/2, pi/2)``; the endpoints ``+-2i/sqrt(27)``
    (triple-root points) close the curve.
    """
    th = np.linspace(-math.pi / 2, math.pi / 2, n_rays + 2)[1:-1]
    ys = [bowtie_boundary(t, tol) for t in th]
    top = 2j / math.sqrt(27)
    ys = np.array([-top] + ys + [top])
    Ys = np.abs(ys) ** (1 / 3) * np.exp(1j * np.angle(ys) / 3)
    return ys, Ys


@dataclass
class BowTie:
    """The bow-tie region in the Y-plane as two polygons (right wing and its negative)."""

    Y_right: np.ndarray

    @classmethod
    def compute(cls, n_rays=64, tol=1e-10):
        _, Ys = bowtie_polyline(n_rays, tol)
        # close the wing through the origin
        return cls(np.concatenate([[0j], Ys]))

    @property
    def Y_left(self):
        return -self.Y_right

    @staticmethod
    def _inside(poly, pts):
        x, y = pts.real, pts.imag
        px, py = poly.real, poly.imag
        inside = np.zeros(pts.shape, bool)
        j = len(poly) - 1
        for i in range(len(poly)):
            cond = ((py[i] > y) != (py[j] > y))
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = (px[j] - px[i]) * (y - py[i]) / (py[j] - py[i]) + px[i]
            inside ^= cond & (x < xint)
            j = i
        return inside

    @staticmethod
    def _edge_distance(poly, pts):
        a = poly
        b = np.roll(poly, -1)
        d = np.full(pts.shape, np.inf)
        for ai, bi in zip(a, b):
            ab = bi - ai
            t = np.clip(((pts - ai) * np.conj(ab)).real / max(abs(ab) ** 2, 1e-300), 0, 1)
            d = np.minimum(d, np.abs(pts - (ai + t * ab)))
        return d

    def contains(self, Y):
        Y = np.asarray(Y, complex)
        return self._inside(self.Y_right, Y) | self._inside(self.Y_left, Y)

    def distance(self, Y):
        """Euclidean distance from ``Y`` to the closed region (0 inside)."""
        Y = np.asarray(Y, complex)
        d = np.minimum(self._edge_distance(self.Y_right, Y), self._edge_distance(self.Y_left, Y))
        return np.where(self.contains(Y), 0.0, d)


# ---------------------------------------------------------------------------
# h itself, phases and expansions
# ---------------------------------------------------------------------------

def h_value(eta, sol: BoutrouxSolution, side=1.0, tol=QUAD_TOL, singular_end=False):
    """``h(eta)`` in the gauge ``h(i s3) = 0``.

    The path leaves ``i s3`` along ``side * nu`` (``nu`` the right normal of
    the root axis), runs parallel to the axis and comes in to ``eta`` along
    the normal.  For points on a cut this gives the boundary value from the
    chosen side.
    """
    roots = sol.roots
    e3 = roots.etas[2]
    D = 2.0 * roots.scale() + abs(complex(eta))
    nu = side * roots.normal()
    path = PathSpec((e3, e3 + D * nu, eta + D * nu, eta), True, singular_end, D)
    f = lambda b, d: h_eta_split(b, d, roots)
    return integrate_path(f, path, tol)


def phases(sol: BoutrouxSolution, check=True, tol=1e-9, fractions=(0.25, 0.5, 0.75)):
    """Boundary-value phases of h on the cuts.

    ``psi``: ``Im(h+ + h-)`` on ``[i s2, i s3]``; ``xi``: the same on
    ``[0, i s1]``; ``kappa``: ``Im(h+ - h-)`` on the segment ``(0, i s2)``
    joining the cuts, where the two boundary values differ by a period.
    ``+`` is the left side when moving along the axis towards ``i s3``.

    Raises
    ------
    RealityViolation
        If a real part that must vanish exceeds ``tol`` (only with ``check``).
    """
    e1, e2, e3 = sol.roots.etas
    left, right = -1.0, 1.0  # side multipliers of the right normal

    def both(q):
        return h_value(q, sol, left), h_value(q, sol, right)

    sums23, sums01, diffs02 = [], [], []
    for t in fractions:
        hp, hm = both(e2 + t * (e3 - e2))
        sums23.append(hp + hm)
        hp, hm = both(t * e1)
        sums01.append(hp + hm)
        hp, hm = both(t * e2)
        diffs02.append(hp - hm)
    re_max = max(abs(v.real) for v in sums23 + sums01 + diffs02)
    out = {
        "psi": float(np.mean([v.imag for v in sums23])),
        "xi": float(np.mean([v.imag for v in sums01])),
        "kappa": float(np.mean([v.imag for v in diffs02])),
        "psi_samples": [complex(v) for v in sums23],
        "xi_samples": [complex(v) for v in sums01],
        "kappa_samples": [complex(v) for v in diffs02],
        "max_real_part": float(re_max),
    }
    if check and re_max > tol:
        raise RealityViolation(f"real part {re_max:.3e} exceeds {tol:.1e}")
    return out


def R_expansion_check(p: CurveParams, roots: CurveRoots | None = None, r_far=1e3, r_near=1e-3):
    """Compare ``R = -h_eta`` with its four-term expansions at infinity and zero.

    Points are taken on the positive imaginary axis, ``eta = i r``, where
    ``-i eta = r`` is real and positive.
    """
    roots = roots if roots is not None else roots_of_P(p)
    y, c = complex(p.y), complex(p.c)

    def R(eta):
        return -complex(h_eta(eta, p, roots))

    m = r_far
    far_series = 1j * (1 - 0.5 / m - 0.5 * (c + 0.25) / m ** 2 + (2 * y * y - 4 * c - 1) / 16 / m ** 3)
    far_next = abs(m ** -4)
    m = r_near
    near_series = (-0.5j * y * m ** -1.5) * (1 - 2 * c / y ** 2 * m - 2 * (c * c + y * y) / y ** 4 * m ** 2
                                            + 2 * (y ** 4 - 2 * c * y ** 2 - 2 * c ** 3) / y ** 6 * m ** 3)
    # the expansion is in powers of 4 c mu / y^2 and 4 mu^2 / y^2
    K = max(1.0, abs(4 * c / y ** 2), 2 / abs(y))
    near_next = abs(0.5 * y * r_near ** -1.5) * (K * r_near) ** 4
    far_val, near_val = R(1j * r_far), R(1j * r_near)
    return {
        "far": {"eta": 1j * r_far, "value": far_val, "series": far_series,
                "deviation": abs(far_val - far_series), "next_term": far_next},
        "near": {"eta": 1j * r_near, "value": near_val, "series": near_series,
                 "deviation": abs(near_val - near_series), "next_term": near_next},
        "leading_far": 1j,
        "coefficient_far_m2": -0.5 * (c + 0.25) * 1j,
        "leading_near": -0.5j * y,
    }
