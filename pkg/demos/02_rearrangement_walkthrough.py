# Watch the rearrangement loop work on a small matrix: each step re-sorts one
# column oppositely to the aggregate of the others, the objective never
# increases, and the row-aggregate vector falls in the weak-submajorization
# order until the matrix is a fixed point.

import numpy as np

from rabounds import (
    ArrangementMatrix,
    CostFunction,
    compare,
    is_in_opposite_set,
    objective,
    partial_aggregate_column,
    power,
    rearrange_column,
    sum_agg,
)
from rabounds.costfn import eval_h_rows

cost = CostFunction(sum_agg(2), power(2))  # f(row) = (sum of row)^2

# Start comonotonic: big values paired with big values. That is the WORST
# arrangement for a convex cost of the sum.
X = ArrangementMatrix.from_columns([[1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0]])
print("start columns:", [c.tolist() for c in X.columns])
print("start objective:", objective(X, cost))
print("already a fixed point?", is_in_opposite_set(X, cost.agg), "\n")

step = 0
while not is_in_opposite_set(X, cost.agg):
    for i in range(X.d):
        part = partial_aggregate_column(X, i, cost.agg)
        Y = rearrange_column(X, i, cost.agg)
        if Y is X:
            continue
        step += 1
        rel = compare(eval_h_rows(cost.agg, Y.columns), eval_h_rows(cost.agg, X.columns))
        print(f"step {step}: re-sort column {i} against partials {part.tolist()}")
        print(f"  new column {i}: {Y.columns[i].tolist()}")
        print(f"  objective {objective(X, cost)} -> {objective(Y, cost)}")
        print(f"  row aggregates are now {rel.value.value} vs the previous ones")
        X = Y

print("\nfixed point columns:", [c.tolist() for c in X.columns])
print("final objective:", objective(X, cost))

# The final row sums are as flat as the marginals allow; squared sums of a
# flat vector are minimal by convexity.
print("final row sums:", np.sort(eval_h_rows(cost.agg, X.columns)).tolist())
