# On tiny instances everything can be checked by brute force: the global
# minimum over all (n!)^(d-1) arrangements equals the minimum over the
# oppositely-ordered fixed-point set, and the rearrangement with a few
# restarts lands on it.

import numpy as np

from rabounds import (
    ArrangementMatrix,
    CostFunction,
    arrangement_count,
    brute_force_max,
    brute_force_min,
    brute_force_min_over_opposite_set,
    comonotonic_value,
    objective,
    run_ra_restarts,
    stop_loss,
    weighted_sum,
)

rng = np.random.default_rng(7)
n, d = 5, 3
cols = [np.round(rng.uniform(0, 1, size=n), 3) for _ in range(d)]
cost = CostFunction(weighted_sum([0.5, 0.2, 0.3]), stop_loss(0.4))

X = ArrangementMatrix.from_columns(cols)
print(f"instance: n={n}, d={d} -> {arrangement_count(n, d):,} arrangements")
print("columns:", [c.tolist() for c in cols], "\n")

global_min, argmin = brute_force_min(X, cost)
restricted_min = brute_force_min_over_opposite_set(X, cost)
global_max, _ = brute_force_max(X, cost)

print(f"exhaustive minimum:                 {global_min:.6f}")
print(f"minimum over oppositely-ordered set: {restricted_min:.6f}")
print(f"difference:                          {abs(global_min - restricted_min):.2e}\n")

ra = run_ra_restarts(X, cost, restarts=5, seed=3)
print(f"rearrangement (5 restarts):          {ra.objective:.6f}")
print(f"gap to exhaustive minimum:           {ra.objective - global_min:.2e}")
print("minimizing arrangement:")
for k in range(n):
    print("  ", argmin.row(k).tolist())

# The flip side: comonotonic columns maximize supermodular costs.
comono = ArrangementMatrix.comonotonic(X.provenance)
print(f"\nexhaustive maximum:                  {global_max:.6f}")
print(f"comonotonic arrangement:             {objective(comono, cost):.6f}")
print(f"per-row (mass-1/n) supremum value:   {comonotonic_value(X.provenance, cost):.6f}")
