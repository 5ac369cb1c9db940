"""Build the first Ohyama polynomials and look at their shape.

Every R_n comes out of an exact division; a remainder would mean the
recurrence (or the arithmetic) is wrong.  The table also shows how fast the
coefficients grow, which is why evaluation has to adapt its precision.
"""

import time

from pd7kit.ohyama import OhyamaTable, mirror, top_exponent

table = OhyamaTable()

print("n   terms  lowest  top   top = n(n+3)/2   largest coefficient (digits)")
t0 = time.perf_counter()
for n in range(0, 21, 2):
    R = table.compute(n)
    big = max(abs(c.numerator) for c in R.coeffs.values())
    print(f"{n:<3d} {len(R):>5d} {R.valuation:>7d} {R.degree:>5d}   {str(R.degree == top_exponent(n)):>14s}"
          f"   {len(str(big)):>4d}")
print(f"R_0..R_20 in {time.perf_counter() - t0:.2f} s\n")

for n in (2, 3, 4):
    print(f"R_{n} = {table.compute(n).pretty()}")

# negative indices come from running the recurrence downward; they are
# reflections of the positive ones
print()
print("R_-4 =", table.compute(-4).pretty())
print("mirror of R_4 equals R_-4:", mirror(table.compute(4), 4) == table.compute(-4))
print("recurrence exact for |n| <= 20:", all(table.verify_recurrence(n) for n in range(-20, 21)))
