"""Test the Weierstrass-form ODE on the algebraic solutions.

Near y inside the pole region, W(z) = U_n(y + z/n) should satisfy
W'^2 = (16/y) W^3 - (16 c1/y^2) W^2 - (4/y) W + 1 with an error that
shrinks with n.  The residuals are printed for each n with the fitted
log-log slope.  The shifted argument y + z/n also brings in an O(1/n)
term, so the decay only becomes clean once n is moderately large.
"""

from pd7kit.spectral import solve_c1
from pd7kit.weierstrass_verify import verify

y = 0.15
sol = solve_c1(y)
rep = verify(y, n_values=(8, 16, 32, 64), sol_b=sol)
print(f"y = {y}, c1 = {sol.c1.real:.12f}, E = {rep.E.real:.6f}")
print(" n   first-order   second-order   excluded")
for n, a, b in zip(rep.n_values, rep.max_first, rep.max_second):
    print(f"{n:3d}   {a:11.3e}   {b:12.3e}   {rep.excluded[n]:8d}")
print(f"slopes: first {rep.slope_first:.2f}, second {rep.slope_second:.2f}")
