"""Where do the poles of U_n go as n grows?

The poles of U_n(Y^3) sit at the zeros of R_n.  In the Y = y^(1/3) plane
they fill a bounded region, and as n grows that region approaches the
bow-tie cut out by the Boutroux conditions.  This script counts poles
inside and outside the bow-tie and writes a density grid to CSV.
"""

import sys

import numpy as np

from pd7kit.algebraic import density_grid, pole_locations_Y
from pd7kit.spectral import BowTie, bowtie_boundary

region = BowTie.compute(n_rays=32)
print(f"bow-tie reaches y_c = {bowtie_boundary(0.0).real:.8f} on the positive axis\n")

print(" n  poles  outside  max distance outside")
for n in (4, 8, 12, 16):
    Y = pole_locations_Y(n)
    d = region.distance(Y)
    print(f"{n:2d} {Y.size:6d} {int(np.sum(d > 0)):8d}  {d.max():.4f}")

out = sys.argv[1] if len(sys.argv) > 1 else "density_n10.csv"
grid = density_grid(10, (-1.0, 1.0, -1.0, 1.0), (200, 200))
with open(out, "w") as fh:
    grid.to_csv(fh)
peaks = grid.local_maxima(10.0)
print(f"\nn = 10 grid written to {out}; {peaks.size} local maxima above 10, "
      f"worst distance to the bow-tie {region.distance(peaks).max():.3f}")
