"""Solve the Boutroux conditions and trace the zero level set of Re h.

At a real point inside the wing the constant c1 is found by a scalar root
search; a complex point is reached by continuation.  The level set of
Re h then has six arcs: one along [0, i s1], two forming a loop around the
origin, one joining i s2 to i s3 and two running off to infinity.
"""

import cmath
import math

from pd7kit.levelset import encloses_origin, trace_K
from pd7kit.spectral import solve_c1

for y in (0.15, 0.15 * cmath.exp(1j * math.pi / 8)):
    sol = solve_c1(y)
    print(f"y = {y:.4f}")
    print(f"  c1 = {sol.c1:.12f}   (double-root value c0 = {sol.c0:.6f})")
    print(f"  Re I12 = {sol.I12:.1e}, Re I23 = {sol.I23:.1e}, Jacobian det = {sol.jacobian_det:.3f}")
    print(f"  phases psi = {sol.psi:.6f}, xi = {sol.xi:.6f}, kappa = {sol.kappa:.6f}")
    graph = trace_K(sol)
    print(f"  level set: {graph.case}, loop around 0: {encloses_origin(graph)}")
    for arc in graph.arcs:
        print(f"    {arc.start:>7s} -> {arc.end:<16s} length {arc.arclength:7.3f}  drift {arc.max_drift:.1e}")
    print()
