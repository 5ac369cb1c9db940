"""The zero level set K of Re h (critical trajectories of f deta^2).

Along K the differential ``h_eta deta`` is purely imaginary, so trajectories
follow the unit field ``eps * i * conj(h_eta) / |h_eta|``.  The sign of
h_eta is kept continuous along each arc (the principal-sheet formula flips
across the cuts) and ``Re h`` is carried along by segment quadrature; after
each step a transverse Newton correction pulls the point back onto
``Re h = 0``.

From every branch point ``i s_j`` three arcs leave at the angles solving
``arg f'(i s_j) + 3 theta = pi (mod 2 pi)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .algebraic import GridField
from .errors import PathConstructionFailure, QuadratureFailure, StructureViolation, TraceStall
from .spectral import BoutrouxSolution, h_value

__all__ = [
    "TrajectoryArc",
    "LevelSetGraph",
    "launch_angles",
    "trace_arc",
    "trace_K",
    "re_h",
    "sign_chart",
    "polyline_distance",
]

_GL8_X, _GL8_W = leggauss(8)


@dataclass
class TrajectoryArc:
    points: np.ndarray
    start: str  # "root-1", "root-2" or "root-3"
    end: str  # "root-j", "origin", "unbounded-left", "unbounded-right"
    arclength: float
    max_drift: float
    launch_angle: float
    end_direction: complex = 0j

    @property
    def endpoints(self):
        return frozenset((self.start, self.end))


@dataclass
class LevelSetGraph:
    arcs: list
    case: str
    launches: list = field(default_factory=list, repr=False)

    def arcs_between(self, a, b):
        return [arc for arc in self.arcs if arc.endpoints == frozenset((a, b))]

    def end_counts(self):
        counts = {}
        for arc in self.arcs:
            for e in (arc.start, arc.end):
                counts[e] = counts.get(e, 0) + 1
        return counts

    def symmetry_distance(self):
        """Max distance of mirrored arc points (eta -> -conj(eta)) to the graph."""
        worst = 0.0
        lines = [a.points for a in self.arcs]
        for arc in self.arcs:
            mirrored = -np.conj(arc.points)
            d = np.min([polyline_distance(mirrored, L) for L in lines], axis=0)
            worst = max(worst, float(np.max(d)))
        return worst


# ---------------------------------------------------------------------------
# local analysis
# ---------------------------------------------------------------------------

def _f_prime_at_root(s, y, c):
    """``f'(i s) = -i P'(s) / s^3`` (P vanishes at the root)."""
    dP = -3 * s * s + 2 * s + c
    return -1j * dP / s ** 3


def launch_angles(sol: BoutrouxSolution, j: int):
    """The three directions of K at ``i s_j`` (``j`` in 0, 1, 2)."""
    s = sol.roots.s[j]
    fp = _f_prime_at_root(s, sol.y, sol.c1)
    base = (math.pi - cmath.phase(fp)) / 3
    return [base + 2 * math.pi * k / 3 for k in range(3)]


def _h_scalar(eta, roots):
    s1, s2, s3 = roots.s
    mu = -1j * eta
    return -1j * cmath.sqrt((mu - s1) / mu) * (mu - s2) / mu * cmath.sqrt((mu - s3) / (mu - s2))


def _aligned(g, ref):
    """``g`` or ``-g``, whichever is closer in direction to ``ref``."""
    return g if (g * ref.conjugate()).real >= 0 else -g


# ---------------------------------------------------------------------------
# tracing
# ---------------------------------------------------------------------------

def trace_arc(sol: BoutrouxSolution, j: int, theta: float, r_max_factor=50.0,
              stop_tol=1e-6, h_max=0.02, max_steps=200000) -> TrajectoryArc:
    """Trace one trajectory of K from ``i s_j`` leaving at angle ``theta``."""
    roots = sol.roots
    etas = roots.etas
    start = etas[j]
    gap = roots.min_gap()
    R_max = r_max_factor * roots.scale()
    rho = 1e-3 * gap
    eta = start + rho * cmath.exp(1j * theta)
    d0 = cmath.exp(1j * theta)
    g = _h_scalar(eta, roots)
    # pick the sign of h_eta and the orientation so that u = eps*i/g points along d0
    eps = 1.0 if ((1j * g.conjugate() / abs(g)) * d0.conjugate()).real >= 0 else -1.0
    reh = 0.0  # Re h vanishes at the branch points
    # first leg from the root: integrate along the straight launch segment
    pts = [start, eta]
    length = rho
    drift = 0.0
    snap_radius = max(stop_tol, 1e-4 * gap)
    specials = [(f"root-{k + 1}", e) for k, e in enumerate(etas)] + [("origin", 0j)]

    def field_at(p, gref):
        gg = _aligned(_h_scalar(p, roots), gref)
        return eps * 1j * gg.conjugate() / abs(gg), gg

    # Re h accumulated along the launch leg; eta = start + (eta - start) t^2
    # removes the square-root behaviour at the root
    t = (_GL8_X + 1) / 2
    nodes = start + (eta - start) * t * t
    vals = np.array([_aligned(_h_scalar(n, roots), g) for n in nodes]) * 2 * t
    reh += float(((eta - start) / 2 * np.dot(_GL8_W, vals)).real)
    # the tangent launch misses K at order rho^(5/2); project the point back
    delta = -reh * g.conjugate() / abs(g) ** 2
    eta += delta
    pts[-1] = eta
    reh += float((g * delta).real)

    end = None
    for _ in range(max_steps):
        dist = [(abs(eta - e), name) for name, e in specials if not (name == f"root-{j + 1}" and length < 10 * rho)]
        dmin, nearest = min(dist)
        target = dict(specials)[nearest]
        if dmin < stop_tol:
            end = nearest
            pts.append(target)
            break
        if dmin < snap_radius:
            u, _ = field_at(eta, g)
            if (u * (target - eta).conjugate()).real > 0.995 * dmin:
                # heading straight into the singular point: a tiny error in
                # Re h would otherwise carry the trace past it along a neighbour
                end = nearest
                pts.append(target)
                break
        if abs(eta) > R_max:
            end = "unbounded-right" if eta.real > 0 else "unbounded-left"
            break
        # the step also respects the start root, which is skipped above
        dstep = min(dmin, abs(eta - start))
        h = min(0.1 * dstep, h_max * max(1.0, abs(eta) / 10))
        # RK4 on the unit field
        k1, g1 = field_at(eta, g)
        k2, _ = field_at(eta + 0.5 * h * k1, g1)
        k3, _ = field_at(eta + 0.5 * h * k2, g1)
        k4, _ = field_at(eta + h * k3, g1)
        new = eta + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        if h < 1e-14:
            raise TraceStall(f"step underflow near eta = {eta}")
        # Re h increment along the chord
        nodes = eta + (new - eta) * (_GL8_X + 1) / 2
        vals = np.array([_aligned(_h_scalar(n, roots), g1) for n in nodes])
        reh += float(((new - eta) / 2 * np.dot(_GL8_W, vals)).real)
        gn = _aligned(_h_scalar(new, roots), g1)
        # transverse Newton projection back to Re h = 0
        delta = -reh * gn.conjugate() / abs(gn) ** 2
        reh += float((gn * delta).real)
        new = new + delta
        drift = max(drift, abs(reh))
        length += abs(new - eta)
        eta, g = new, _aligned(_h_scalar(new, roots), gn)
        pts.append(eta)
    else:
        raise TraceStall(f"no endpoint reached from root {j + 1} at angle {theta:.4f}")
    direction = pts[-1] - pts[-2] if len(pts) > 1 else 0j
    direction = direction / abs(direction) if direction else 0j
    return TrajectoryArc(np.array(pts), f"root-{j + 1}", end, length, drift, theta, direction)


def polyline_distance(points, line):
    """Distance from each of ``points`` to the polyline ``line``."""
    points = np.asarray(points, complex)
    a = np.asarray(line[:-1], complex)
    b = np.asarray(line[1:], complex)
    ab = b - a
    L2 = np.maximum(np.abs(ab) ** 2, 1e-300)
    out = np.empty(points.shape)
    for i in range(0, points.size, 256):
        p = points[i:i + 256, None]
        t = np.clip(((p - a[None, :]) * np.conj(ab)[None, :]).real / L2[None, :], 0, 1)
        out[i:i + 256] = np.min(np.abs(p - (a[None, :] + t * ab[None, :])), axis=1)
    return out


def _same_arc(a: TrajectoryArc, b: TrajectoryArc, tol):
    if a.endpoints != b.endpoints:
        return False
    if a.end.startswith("unbounded") or b.end.startswith("unbounded"):
        return False
    d = polyline_distance(b.points[::max(1, len(b.points) // 50)], a.points)
    return float(np.max(d)) < tol


def _winding(loop):
    ang = np.unwrap(np.angle(loop))
    return (ang[-1] - ang[0]) / (2 * math.pi)


def trace_K(sol: BoutrouxSolution, **kw) -> LevelSetGraph:
    """Trace all critical trajectories and classify the configuration.

    Arcs joining two roots are traced from both ends; the duplicates are
    merged so that each geometric arc appears once.

    Raises
    ------
    StructureViolation
        If the endpoint counts are impossible (more than one arc into the
        origin or more than one unbounded arc in a half-plane).
    """
    launches = []
    for j in range(3):
        for th in launch_angles(sol, j):
            launches.append(trace_arc(sol, j, th, **kw))
    arcs = []
    dup_tol = 1e-3 * sol.roots.min_gap()
    for arc in launches:
        if not any(_same_arc(a, arc, dup_tol) for a in arcs):
            arcs.append(arc)
    graph = LevelSetGraph(arcs, "unknown", launches)
    ends = [a.end for a in arcs]
    if ends.count("origin") > 1:
        raise StructureViolation("more than one trajectory ends at the origin")
    if ends.count("unbounded-left") > 1 or ends.count("unbounded-right") > 1:
        raise StructureViolation("more than one unbounded trajectory in a half-plane")
    graph.case = _classify(graph)
    return graph


def _classify(graph: LevelSetGraph):
    """``case-i`` if the six arcs match the expected configuration."""
    a10 = graph.arcs_between("root-1", "origin")
    a23 = graph.arcs_between("root-2", "root-3")
    a12 = graph.arcs_between("root-1", "root-2")
    unb = [a for a in graph.arcs if a.start == "root-3" and a.end.startswith("unbounded")]
    if len(graph.arcs) == 6 and len(a10) == 1 and len(a23) == 1 and len(a12) == 2 and len(unb) == 2:
        if {a.end for a in unb} == {"unbounded-left", "unbounded-right"}:
            loop = np.concatenate([_oriented(a12[0], "root-1"), _oriented(a12[1], "root-2")])
            if abs(abs(_winding(np.append(loop, loop[0]))) - 1) < 1e-6:
                return "case-i"
    if graph.arcs_between("root-2", "root-3") == [] and len(graph.arcs) == 6:
        return "case-ii"
    return "unknown"


def _oriented(arc, start):
    return arc.points if arc.start == start else arc.points[::-1]


def encloses_origin(graph: LevelSetGraph) -> bool:
    a12 = graph.arcs_between("root-1", "root-2")
    if len(a12) != 2:
        return False
    loop = np.concatenate([_oriented(a12[0], "root-1"), _oriented(a12[1], "root-2")])
    return abs(abs(_winding(np.append(loop, loop[0]))) - 1) < 1e-6


# ---------------------------------------------------------------------------
# Re h at points and on grids
# ---------------------------------------------------------------------------

def _side_of(eta, sol):
    nu = sol.roots.normal()
    e3 = sol.roots.etas[2]
    return 1.0 if ((complex(eta) - e3) * nu.conjugate()).real >= 0 else -1.0


def re_h(eta, sol: BoutrouxSolution) -> float:
    """``Re h(eta)`` with ``h(i s3) = 0``.

    The quadrature path leaves ``i s3`` towards the side of the root axis
    that contains ``eta``, so it never crosses a cut.
    """
    eta = complex(eta)
    if eta == 0:
        raise PathConstructionFailure("eta = 0 is singular")
    is_root = any(abs(eta - e) < 1e-14 for e in sol.roots.etas)
    side = _side_of(eta, sol)
    try:
        return float(h_value(eta, sol, side, singular_end=is_root).real)
    except QuadratureFailure:
        # the final leg grazed the origin; approach from the other side
        return float(h_value(eta, sol, -side, singular_end=is_root).real)


def _crosses(p, q, a, b):
    """Proper intersection of segments pq and ab."""
    def orient(u, v, w):
        return ((v - u) * (w - u).conjugate()).imag
    o1, o2 = orient(p, q, a), orient(p, q, b)
    o3, o4 = orient(a, b, p), orient(a, b, q)
    return (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0)


def sign_chart(sol: BoutrouxSolution, bounds=(-2.0, 2.0, -1.5, 1.5), resolution=(121, 91)) -> GridField:
    """Sign of ``Re h`` on a grid (values -1, 0, +1; ``nan`` on cuts/origin).

    Each grid row is integrated from both of its ends (anchored by a full
    path quadrature) towards the middle, stopping where the row meets a cut.
    """
    nx, ny = resolution
    xs = np.linspace(bounds[0], bounds[1], nx)
    ys = np.linspace(bounds[2], bounds[3], ny)
    roots = sol.roots
    e1, e2, e3 = roots.etas
    cuts = [(0j, e1), (e2, e3)]
    vals = np.full((ny, nx), np.nan)

    def step(p, q, gref):
        nodes = p + (q - p) * (_GL8_X + 1) / 2
        gs = [_aligned(_h_scalar(n, roots), gref) for n in nodes]
        return (q - p) / 2 * np.dot(_GL8_W, gs), gs[-1]

    for jj, yv in enumerate(ys):
        row = xs + 1j * yv
        for direction in (1, -1):
            idx = range(nx - 1, -1, -1) if direction == 1 else range(nx)
            idx = list(idx)
            first = row[idx[0]]
            try:
                h = complex(h_value(first, sol, _side_of(first, sol)))
            except Exception:
                continue
            g = _h_scalar(first, roots)
            vals[jj, idx[0]] = h.real
            for a, b in zip(idx[:-1], idx[1:]):
                p, q = row[a], row[b]
                if any(_crosses(p, q, c0, c1) for c0, c1 in cuts) or abs(q) < 1e-9:
                    break
                dh, g = step(p, q, g)
                h += dh
                if np.isnan(vals[jj, b]):
                    vals[jj, b] = h.real
    signs = np.sign(vals)
    pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    tol = 1e-12 * roots.scale()
    on_cut = np.zeros(pts.size, bool)
    for c0, c1 in cuts:
        on_cut |= polyline_distance(pts, np.array([c0, c1])) < tol
    signs.ravel()[on_cut] = np.nan
    return GridField(tuple(bounds), (nx, ny), signs)
