"""An explicitly solvable 2x2 Riemann-Hilbert problem.

The outer parametrix is known in closed form, so all of its properties can
be checked numerically: the jump across [-1, 1], the first Laurent
coefficient at infinity, the algebraic identities it satisfies and the
constant-amplitude solution it produces.
"""

import numpy as np

from pd7kit.toy_rhp import (toy_identity_check, toy_jump_residual, toy_laurent_coefficient,
                            toy_nls_amplitude, toy_ode_residual)

np.set_printoptions(precision=12, suppress=True)

for z in (0.0, 1 + 1j, -2.5 + 0.5j):
    N1 = toy_laurent_coefficient(1, z)
    print(f"z = {z}")
    print("  N1 =", N1.tolist())
    jump = max(toy_jump_residual(e, z) for e in np.linspace(-0.9, 0.9, 7))
    print(f"  jump residual {jump:.1e}")
    ident = toy_identity_check(z)
    print("  identities " + ", ".join(f"{k} {v:.1e}" for k, v in ident.items()))
    print(f"  dN1/dz residual {toy_ode_residual(z):.1e}, q = {toy_nls_amplitude(z):.12f}")
