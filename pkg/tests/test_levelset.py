import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from pd7kit.levelset import (encloses_origin, launch_angles, polyline_distance, re_h, sign_chart, trace_arc,
                             trace_K)


@pytest.fixture(scope="module")
def graph_015(boutroux_015):
    return trace_K(boutroux_015)


@pytest.fixture(scope="module")
def graph_complex(boutroux_complex):
    return trace_K(boutroux_complex)


def test_polyline_distance_simple():
    d = polyline_distance(np.array([1j, 2 + 1j, -1 + 0j]), np.array([0j, 1 + 0j]))
    np.testing.assert_allclose(d, [1.0, math.sqrt(2), 1.0])


@pytest.mark.parametrize("j", [0, 1, 2])
def test_launch_angles(boutroux_015, j):
    th = launch_angles(boutroux_015, j)
    assert np.allclose(np.diff(th), 2 * math.pi / 3)
    # locally h ~ (2/3) sqrt(f') rho^(3/2) e^(3 i theta/2): Re h vanishes along each launch ray
    s = boutroux_015.roots.etas[j]
    rho = 1e-4 * boutroux_015.roots.min_gap()
    for t in th:
        val = re_h(s + rho * cmath.exp(1j * t), boutroux_015)
        off = re_h(s + rho * cmath.exp(1j * (t + math.pi / 3)), boutroux_015)
        assert abs(val) < 1e-3 * abs(off)


def test_case_i_at_real_y(graph_015):
    assert graph_015.case == "case-i"
    assert len(graph_015.arcs) == 6
    assert graph_015.end_counts()["origin"] == 1
    assert encloses_origin(graph_015)
    assert graph_015.symmetry_distance() < 1e-6


def test_case_i_at_complex_y(graph_complex):
    assert graph_complex.case == "case-i"
    assert encloses_origin(graph_complex)


@pytest.mark.parametrize("which", ["graph_015", "graph_complex"])
def test_arcs_lie_on_zero_level(request, which):
    # independent check: Re h by full path quadrature at points of each traced arc
    graph = request.getfixturevalue(which)
    sol = request.getfixturevalue("boutroux_015" if which == "graph_015" else "boutroux_complex")
    for arc in graph.arcs:
        if arc.end == "origin":
            continue  # runs along the cut [0, i s1]; see the Hausdorff check in the acceptance suite
        pts = arc.points[1:-1]
        for p in pts[:: max(1, len(pts) // 6)][:6]:
            if abs(p) > 20:
                continue
            assert abs(re_h(p, sol)) < 1e-10 * max(1.0, abs(p))


def test_sign_changes_across_loop_arcs(boutroux_015, graph_015):
    for arc in graph_015.arcs_between("root-1", "root-2"):
        k = len(arc.points) // 2
        p, q = arc.points[k], arc.points[k + 1]
        nrm = 1j * (q - p) / abs(q - p)
        a = re_h(p + 1e-3 * nrm, boutroux_015)
        b = re_h(p - 1e-3 * nrm, boutroux_015)
        assert a * b < 0


def test_positive_far_above_top_root(boutroux_015):
    # oracle: on the axis above i s3 the integrand is real and positive in mu = -i eta
    s1, s2, s3 = (s.real for s in boutroux_015.roots.s)
    T = s3 + 4.0
    F = lambda m: mp.sqrt((m - s1) / m) * (m - s2) / m * mp.sqrt((m - s3) / (m - s2))
    ref = float(mp.quad(F, [s3, s3 + 0.1, T]))
    got = re_h(1j * T, boutroux_015)
    assert ref > 0
    assert got == pytest.approx(ref, abs=1e-9)


def test_unbounded_arcs_are_horizontal(graph_015):
    unb = [a for a in graph_015.arcs if a.end.startswith("unbounded")]
    assert {a.end for a in unb} == {"unbounded-left", "unbounded-right"}
    assert all(abs(a.end_direction.imag) < 0.05 for a in unb)


def test_trace_arc_directly(boutroux_015):
    arc = trace_arc(boutroux_015, 1, launch_angles(boutroux_015, 1)[0])
    assert arc.start == "root-2" and arc.end in {"root-1", "root-3"}
    assert arc.arclength > 0 and arc.max_drift < 1e-10


def test_sign_chart_symmetry_and_consistency(boutroux_015):
    g = sign_chart(boutroux_015, resolution=(41, 31))
    v = g.values
    assert set(np.unique(v[np.isfinite(v)])) <= {-1.0, 0.0, 1.0}
    assert np.isnan(v).any()  # grid column x = 0 runs along the cuts
    np.testing.assert_array_equal(np.isnan(v), np.isnan(v[:, ::-1]))
    assert np.nanmax(np.abs(v - v[:, ::-1])) == 0
    P = g.points()
    rng = np.random.default_rng(1)
    for _ in range(8):
        j, i = rng.integers(0, 31), rng.integers(0, 41)
        if np.isfinite(v[j, i]) and abs(P[j, i]) > 0.05:
            assert np.sign(re_h(P[j, i], boutroux_015)) == v[j, i]
