"""The acceptance suite: fourteen end-to-end checks with fixed tolerances.

Each check returns a :class:`CriterionResult`; :func:`run_acceptance` runs a
selection and prints one line per criterion.  The same functions back the
``selftest`` subcommand and ``tests/test_acceptance.py``.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .algebraic import density_grid, eval_u, ode_residual_p3d7, solution
from .equilibrium import weierstrass_identity
from .errors import PD7Error, PoleHit, ZeroHit
from .laurent import LaurentPoly
from .levelset import encloses_origin, polyline_distance, trace_K
from .ohyama import OhyamaTable
from .spectral import (BowTie, CurveParams, boutroux_integrals, boutroux_residuals, bowtie_boundary,
                       jacobian, roots_of_P, solve_c1, solve_c1_real)
from .toy_rhp import (toy_identity_check, toy_jump_residual, toy_laurent_coefficient, toy_nls_amplitude,
                      toy_ode_residual)
from .weierstrass_verify import curve_cubic_correspondence, verify

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_acceptance", "COMPLEX_Y"]

COMPLEX_Y = 0.15 * cmath.exp(1j * math.pi / 8)
_SOLVED = {}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {status}  {self.name}: {self.detail} ({self.seconds:.1f} s)"


def _boutroux(y):
    if y not in _SOLVED:
        _SOLVED[y] = solve_c1(y)
    return _SOLVED[y]


def _cbrt(x):
    return abs(x) ** (1 / 3) * cmath.exp(1j * cmath.phase(x) / 3)


# -- 1 ----------------------------------------------------------------------

LISTED_R = {
    -3: {0: 1, -2: 4, -4: 5},
    -2: {-1: 1, -3: 1},
    -1: {-1: 1},
    0: {0: 1},
    1: {2: 1},
    2: {5: 1, 3: -1},
    3: {9: 1, 7: -4, 5: 5},
}


def criterion_1():
    t0 = time.perf_counter()
    table = OhyamaTable()
    bad = [n for n, c in LISTED_R.items()
           if table.compute(n) != LaurentPoly({k: Fraction(v) for k, v in c.items()})]
    failed = [n for n in range(-20, 21) if not table.verify_recurrence(n)]
    dt = time.perf_counter() - t0
    ok = not bad and not failed and dt <= 10
    return ok, f"listed mismatches {bad}, recurrence failures {failed}, {dt:.2f} s (limit 10 s)"


# -- 2 ----------------------------------------------------------------------

def _closed_forms():
    def t(x):
        return _cbrt(x)

    return {
        -2: lambda x: (9 * x * t(x) ** 2 + 12 * x + 5 * t(x)) / (2 * (3 * t(x) ** 2 + 1) ** 2),
        -1: lambda x: (3 * t(x) ** 2 + 1) / (6 * t(x)),
        0: lambda x: t(x) / 2,
        1: lambda x: (3 * t(x) ** 2 - 1) / (6 * t(x)),
        2: lambda x: (9 * x * t(x) ** 2 - 12 * x + 5 * t(x)) / (2 * (3 * t(x) ** 2 - 1) ** 2),
    }


def criterion_2():
    rng = np.random.default_rng(2)
    xs = np.exp(rng.uniform(math.log(0.1), math.log(10), 20)) * np.exp(1j * rng.uniform(-3.1, 3.1, 20))
    worst = 0.0
    for n, f in _closed_forms().items():
        sol = solution(n)
        for x in xs:
            ref = f(complex(x))
            worst = max(worst, abs(eval_u(sol, x) - ref) / abs(ref))
    return worst <= 1e-12, f"max relative error {worst:.2e} over 5 formulas x 20 points (limit 1e-12)"


# -- 3 ----------------------------------------------------------------------

def annulus_samples(count=50, seed=3):
    """Quasi-random points with ``0.1 <= |x| <= 10`` and ``|arg x| < pi``."""
    pts = qmc.Halton(d=2, seed=seed).random(count)
    r = np.exp(math.log(0.1) + pts[:, 0] * math.log(100))
    th = -math.pi + 2 * math.pi * pts[:, 1]
    th = np.clip(th, -math.pi + 1e-9, math.pi - 1e-9)
    return r * np.exp(1j * th)


def criterion_3():
    worst, skipped = 0.0, 0
    xs = annulus_samples()
    for n in range(0, 13):
        sol = solution(n)
        for x in xs:
            try:
                worst = max(worst, abs(ode_residual_p3d7(sol, x)))
            except (PoleHit, ZeroHit):
                skipped += 1
    return worst <= 1e-9, f"max relative residual {worst:.2e} for n = 0..12 ({skipped} pole/zero samples skipped; limit 1e-9)"


# -- 4 ----------------------------------------------------------------------

def criterion_4():
    t0 = time.perf_counter()
    notes, ok = [], True
    for y in (0.05, 0.15, 0.25):
        sol = solve_c1_real(y)
        _SOLVED.setdefault(complex(y), sol)
        s1, s2, s3 = (v.real for v in sol.roots.s)
        good = (s1 < 0 < s2 < s3 and sol.c1.real > sol.c0.real and abs(sol.I12) <= 1e-10
                and abs(sol.I23) <= 1e-10)
        ok &= good
        notes.append(f"y={y}: c1={sol.c1.real:.12f} |I12|={abs(sol.I12):.1e}")
    dt = time.perf_counter() - t0
    ok &= dt <= 30
    return ok, "; ".join(notes) + f"; {dt:.1f} s (limit 30 s)"


# -- 5 ----------------------------------------------------------------------

def criterion_5():
    yc = bowtie_boundary(0.0).real
    tip = abs(bowtie_boundary(math.pi / 2 - 1e-4))
    target = 2 / math.sqrt(27)
    ok = abs(yc - 0.29177) <= 1e-3 and abs(tip - target) <= 1e-3
    return ok, f"y_c = {yc:.8f} (0.29177 +- 1e-3); ray limit |y| = {tip:.8f} vs 2/sqrt(27) = {target:.8f}"


# -- 6 ----------------------------------------------------------------------

def criterion_6():
    p = CurveParams(0.2, 1e4)
    I12 = boutroux_integrals(p, roots_of_P(p))[0].real
    ratio = I12 / math.sqrt(1e4) / math.pi
    return 0.95 <= ratio <= 1.05, f"I12/(pi sqrt(c)) = {ratio:.10f} at c = 1e4, y = 0.2"


# -- 7 ----------------------------------------------------------------------

def fd_jacobian(y, c, h=1e-6):
    cols = []
    for dc in (h, 1j * h):
        fp = boutroux_residuals(CurveParams(y, c + dc))
        fm = boutroux_residuals(CurveParams(y, c - dc))
        cols.append((np.array(fp) - np.array(fm)) / (2 * h))
    return np.array(cols).T


def criterion_7():
    worst, dets = 0.0, []
    for y in (0.05, 0.15, 0.25, COMPLEX_Y):
        sol = _boutroux(complex(y))
        J, det, _ = jacobian(sol.params, sol.roots)
        worst = max(worst, float(np.max(np.abs(J - fd_jacobian(sol.y, sol.c1)))))
        dets.append(det)
    ok = worst <= 1e-5 and all(abs(d) > 0 for d in dets)
    return ok, f"max entry gap {worst:.1e} (limit 1e-5); dets {', '.join(f'{d:.3f}' for d in dets)}"


# -- 8 ----------------------------------------------------------------------

def _hausdorff_to_segment(points, a, b, samples=400):
    seg = a + (b - a) * np.linspace(0, 1, samples)
    d1 = polyline_distance(points, np.array([a, b]))
    d2 = polyline_distance(seg, points)
    return float(max(d1.max(), d2.max()))


def criterion_8():
    sol = _boutroux(0.15 + 0j)
    graph = trace_K(sol)
    e1, e2, e3 = sol.roots.etas
    a10 = graph.arcs_between("root-1", "origin")
    a23 = graph.arcs_between("root-2", "root-3")
    unb = [a for a in graph.arcs if a.end.startswith("unbounded")]
    h10 = _hausdorff_to_segment(a10[0].points, e1, 0j) if len(a10) == 1 else math.inf
    h23 = _hausdorff_to_segment(a23[0].points, e2, e3) if len(a23) == 1 else math.inf
    horiz = max((abs(a.end_direction.imag) for a in unb), default=math.inf)
    sym = graph.symmetry_distance()
    ok = (graph.case == "case-i" and h10 <= 1e-4 and h23 <= 1e-4 and encloses_origin(graph)
          and len(unb) == 2 and all(a.start == "root-3" for a in unb) and horiz <= 0.05 and sym <= 1e-4)
    return ok, (f"{graph.case}, {len(graph.arcs)} arcs; axis Hausdorff {h10:.1e}, {h23:.1e}; "
                f"loop encloses 0: {encloses_origin(graph)}; asymptotic |Im dir| {horiz:.3f}; symmetry {sym:.1e}")


# -- 9 ----------------------------------------------------------------------

def criterion_9():
    worst = 0.0
    for y in (0.15 + 0j, COMPLEX_Y):
        ex = _boutroux(y).extra
        worst = max(worst, max(abs(v.real) for v in ex["psi_samples"] + ex["xi_samples"]))
    return worst <= 1e-8, f"max |Re(h+ + h-)| on both cuts {worst:.1e} (limit 1e-8)"


# -- 10 ---------------------------------------------------------------------

def criterion_10():
    t0 = time.perf_counter()
    parts, ok = [], True
    for y in (0.15 + 0j, COMPLEX_Y):
        rep = verify(y, sol_b=_boutroux(y))
        ok &= rep.first_order_passed and rep.second_order_passed
        parts.append(f"y={y:.4g}: first {['%.3g' % v for v in rep.max_first]} slope {rep.slope_first:.2f}, "
                     f"second {['%.3g' % v for v in rep.max_second]} slope {rep.slope_second:.2f}")
    dt = time.perf_counter() - t0
    ok &= dt <= 300
    return ok, "; ".join(parts) + f"; {dt:.0f} s (limit 300 s)"


# -- 11 ---------------------------------------------------------------------

def criterion_11():
    worst = max(curve_cubic_correspondence(_boutroux(y)) for y in (0.15 + 0j, COMPLEX_Y))
    return worst <= 1e-10, f"max relative gap {worst:.1e} (limit 1e-10)"


# -- 12 ---------------------------------------------------------------------

def criterion_12():
    res = weierstrass_identity()
    return bool(res["holds"]), f"coefficients of P^0..P^3 agree exactly: {res['holds']}"


# -- 13 ---------------------------------------------------------------------

def criterion_13():
    zs = [0, 2, 1 + 1j, -1.5j, 3 - 2j, -2.5 + 0.5j]
    etas = np.linspace(-0.95, 0.95, 20)
    jump = max(toy_jump_residual(e, z) for z in zs for e in etas)
    diag = off = ident = gsq = ode = amp = 0.0
    for z in zs:
        N1 = toy_laurent_coefficient(1, z)
        diag = max(diag, abs(N1[0, 0] + 0.5j * z), abs(N1[1, 1] - 0.5j * z))
        rep = toy_identity_check(z, tol=1e-10)
        ident = max(ident, rep["four_n12_n21"])
        gsq = max(gsq, rep["G_squared"], rep["G_formula"])
        ode = max(ode, toy_ode_residual(z))
        amp = max(amp, abs(abs(toy_nls_amplitude(z)) - 1))
    ok = jump <= 1e-7 and diag <= 1e-9 and ident <= 1e-10 and gsq <= 1e-10 and ode <= 1e-7 and amp <= 1e-10
    return ok, (f"jump {jump:.1e}, diagonals {diag:.1e}, 4N12N21-1 {ident:.1e}, G {gsq:.1e}, "
                f"ODE {ode:.1e}, |q|-1 {amp:.1e}")


# -- 14 ---------------------------------------------------------------------

def criterion_14():
    region = BowTie.compute(n_rays=64)
    grid = density_grid(10, (-1.0, 1.0, -1.0, 1.0), (400, 400))
    peaks = grid.local_maxima(threshold=10.0)
    d_exact = float(np.max(region.distance(grid.poles))) if grid.poles.size else 0.0
    d_peaks = float(np.max(region.distance(peaks))) if peaks.size else 0.0
    ok = max(d_exact, d_peaks) <= 0.05 and grid.poles.size > 0
    return ok, (f"{grid.poles.size} poles, {peaks.size} grid peaks; max distance to the bow-tie "
                f"{max(d_exact, d_peaks):.3f} (limit 0.05)")


CRITERIA = {
    1: ("Ohyama exactness", criterion_1),
    2: ("closed-form solutions", criterion_2),
    3: ("Painleve ODE residual", criterion_3),
    4: ("Boutroux real seeds", criterion_4),
    5: ("critical value and ray limit", criterion_5),
    6: ("large-c asymptotic", criterion_6),
    7: ("Jacobian", criterion_7),
    8: ("level set structure", criterion_8),
    9: ("phase reality", criterion_9),
    10: ("Weierstrass-form ODE residual decay", criterion_10),
    11: ("curve-cubic identity", criterion_11),
    12: ("Weierstrass reduction", criterion_12),
    13: ("toy RHP suite", criterion_13),
    14: ("pole region vs bow-tie", criterion_14),
}


def run_criterion(number: int) -> CriterionResult:
    name, fn = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except (PD7Error, ArithmeticError, ValueError) as exc:
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(number, name, bool(ok), detail, time.perf_counter() - t0)


def run_acceptance(only=None, echo=print):
    """Run the selected criteria (all by default), echoing one line each."""
    results = []
    for number in (only or sorted(CRITERIA)):
        res = run_criterion(number)
        if echo:
            echo(res.line())
        results.append(res)
    return results
