# Marginals enter the machinery only through their quantile functions.
# This walkthrough builds the two n-point grids that bracket a distribution
# and shows why unbounded tails force truncation.

import numpy as np

from rabounds import discretize, exponential, normal, quantile, truncate, uniform
from rabounds.errors import NonFiniteQuantile

# A uniform quantile function is the identity (rescaled), so the grids are
# easy to eyeball: the lower grid samples at k/n for k = 0..n-1, the upper
# grid at k/n for k = 1..n.
u = uniform(0, 1)
print("uniform lower grid, n=5:", discretize(u, 5, "lower").values)
print("uniform upper grid, n=5:", discretize(u, 5, "upper").values)

# The two grids bracket each other pointwise; that is what later turns into
# a bracket on the estimated expectation.
lo = discretize(u, 5, "lower").values
hi = discretize(u, 5, "upper").values
print("lower <= upper pointwise:", bool(np.all(lo <= hi)), "\n")

# An exponential tail runs to infinity, so the upper grid cannot exist as-is:
e = exponential(1.0)
try:
    discretize(e, 5, "upper")
except NonFiniteQuantile as err:
    print("untruncated exponential:", err)

# Truncation remaps quantile evaluation onto a probability window. Removing
# 1e-5 of tail mass caps the largest grid point at F^{-1}(1 - 1e-5):
e_star = truncate(e, 0.0, 1 - 1e-5)
print("truncated upper grid, n=5:", np.round(discretize(e_star, 5, "upper").values, 4))
print("largest retained quantile:", round(quantile(e_star, 1.0), 4), "= -ln(1e-5)\n")

# Normals are unbounded on both sides; cut both tails.
g = truncate(normal(0, 0.5), 1e-5, 1 - 1e-5)
grid = discretize(g, 7, "lower").values
print("two-sided truncated normal grid:", np.round(grid, 3))
