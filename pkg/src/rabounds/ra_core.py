"""The rearrangement loop.

An arrangement matrix holds one discretized marginal per column; one row is
one joint realization of equal probability. Re-sorting the entries within a
column changes the dependence structure while preserving every marginal. The
loop sweeps the columns cyclically, re-sorting each one oppositely to the
partial aggregate of the remaining columns, until a full sweep changes
nothing; at that point every column is oppositely ordered to its partner
vector and the matrix is a fixed point. Each individual re-sort pushes the
row-aggregate vector down in the weak submajorization order, so the objective
(sum of transformed row aggregates) never increases.

Matrices are immutable: operations return new matrices sharing the untouched
column arrays. Restarts rerun the loop from deterministically shuffled
starting arrangements and keep the best result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .costfn import (
    AggregationSpec,
    CostFunction,
    eval_g_rows,
    eval_h_rows,
    eval_partial_rows,
)
from .errors import ArityMismatch, ValidationFailed
from .majorization import is_oppositely_ordered
from .marginals import DiscreteMarginal

__all__ = [
    "ArrangementMatrix",
    "RaResult",
    "objective",
    "partial_aggregate_column",
    "rearrange_column",
    "is_in_opposite_set",
    "run_ra",
    "shuffle_columns",
    "run_ra_restarts",
]

DEFAULT_MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class ArrangementMatrix:
    """n x d matrix as a tuple of columns, plus the marginals they came from.

    Invariant: column i is a permutation (multiset-equal) of provenance
    marginal i. Column arrays are treated as immutable everywhere.
    """

    columns: Tuple[np.ndarray, ...]
    provenance: Tuple[DiscreteMarginal, ...]

    def __post_init__(self):
        cols = tuple(np.asarray(c, dtype=float) for c in self.columns)
        if len(cols) == 0:
            raise ValueError("matrix needs at least one column")
        n = cols[0].size
        if any(c.ndim != 1 or c.size != n for c in cols):
            raise ValueError("all columns must be 1-D with equal length")
        if len(self.provenance) != len(cols):
            raise ValueError("one provenance marginal per column required")
        if any(m.n != n for m in self.provenance):
            raise ValueError("provenance length must match the column length")
        object.__setattr__(self, "columns", cols)

    @property
    def n(self) -> int:
        return self.columns[0].size

    @property
    def d(self) -> int:
        return len(self.columns)

    @classmethod
    def comonotonic(cls, marginals: Sequence[DiscreteMarginal]) -> "ArrangementMatrix":
        """Every column sorted ascending: row k pairs the k-th quantiles."""
        margs = tuple(marginals)
        return cls(tuple(m.values for m in margs), margs)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[float]]) -> "ArrangementMatrix":
        """Wrap raw value columns; provenance becomes their sorted multisets."""
        cols = tuple(np.asarray(c, dtype=float) for c in columns)
        prov = tuple(
            DiscreteMarginal(n=c.size, values=np.sort(c), kind="exact") for c in cols
        )
        return cls(cols, prov)

    def with_column(self, i: int, column: np.ndarray) -> "ArrangementMatrix":
        cols = self.columns[:i] + (column,) + self.columns[i + 1 :]
        return ArrangementMatrix(cols, self.provenance)

    def columns_match_provenance(self) -> bool:
        return all(
            np.array_equal(np.sort(c), m.values)
            for c, m in zip(self.columns, self.provenance)
        )

    def row(self, k: int) -> np.ndarray:
        return np.array([c[k] for c in self.columns])


@dataclass(frozen=True)
class RaResult:
    """Outcome of a rearrangement run.

    ``objective`` is the plain sum over rows (no 1/n factor); ``converged``
    means a full sweep changed no column, which certifies membership in the
    oppositely-ordered fixed-point set.
    """

    matrix: ArrangementMatrix
    objective: float
    sweeps: int
    column_rearrangements: int
    converged: bool


def _check_arity(X: ArrangementMatrix, d: int) -> None:
    if X.d != d:
        raise ArityMismatch(f"matrix has {X.d} columns but the cost expects {d}")


def objective(X: ArrangementMatrix, cost: CostFunction) -> float:
    """Sum over rows of g(h(row))."""
    _check_arity(X, cost.d)
    return float(np.sum(eval_g_rows(cost.transform, eval_h_rows(cost.agg, X.columns))))


def partial_aggregate_column(
    X: ArrangementMatrix, i: int, agg: AggregationSpec
) -> np.ndarray:
    """Row-wise partial aggregate of every column except i."""
    _check_arity(X, agg.d)
    rest = [c for j, c in enumerate(X.columns) if j != i]
    return eval_partial_rows(agg, i, rest)


def _opposite_arrangement(sorted_col: np.ndarray, part: np.ndarray) -> np.ndarray:
    """Place ascending column values at positions of descending partials.

    Ties in the partial aggregate are broken by original row index (stable
    sort), so the result is deterministic; the opposite-ordering predicate
    holds regardless of how ties fall.
    """
    order = np.argsort(-part, kind="stable")
    out = np.empty_like(sorted_col)
    out[order] = sorted_col
    return out


def _column_pass(
    col: np.ndarray, sorted_col: np.ndarray, part: np.ndarray
) -> Optional[np.ndarray]:
    """One sweep step: None if col is already opposite to part, else the
    rearranged column.

    Shares a single argsort between the predicate and the rearrangement:
    along the descending order of part, col must never decrease across groups
    of distinct part values (ties in part place no constraint), which is
    exactly the opposite-ordering predicate.
    """
    order = np.argsort(-part, kind="stable")
    ps = part[order]
    starts = np.flatnonzero(np.concatenate(([True], ps[1:] != ps[:-1])))
    if starts.size >= 2:
        cs = col[order]
        gmax = np.maximum.reduceat(cs, starts)
        gmin = np.minimum.reduceat(cs, starts)
        if not np.all(gmax[:-1] <= gmin[1:]):
            out = np.empty_like(sorted_col)
            out[order] = sorted_col
            return out
    return None


def rearrange_column(
    X: ArrangementMatrix, i: int, agg: AggregationSpec
) -> ArrangementMatrix:
    """Re-sort column i oppositely to the partial aggregate of the others.

    Returns X itself when the column is already oppositely ordered, so the
    operation is idempotent; otherwise only column i changes.
    """
    part = partial_aggregate_column(X, i, agg)
    col = X.columns[i]
    if is_oppositely_ordered(col, part):
        return X
    return X.with_column(i, _opposite_arrangement(np.sort(col), part))


def is_in_opposite_set(X: ArrangementMatrix, agg: AggregationSpec) -> bool:
    """True iff every column is oppositely ordered to its partial aggregate."""
    _check_arity(X, agg.d)
    return all(
        is_oppositely_ordered(X.columns[i], partial_aggregate_column(X, i, agg))
        for i in range(X.d)
    )


def run_ra(
    X0: ArrangementMatrix, cost: CostFunction, max_sweeps: int = DEFAULT_MAX_SWEEPS
) -> RaResult:
    """Sweep columns cyclically until a full sweep changes nothing.

    Termination is guaranteed in exact arithmetic; under floating point the
    ``max_sweeps`` guard reports converged=False instead of looping. Raises
    :class:`ValidationFailed` when given an unvalidated custom cost.
    """
    if not cost.is_validated:
        raise ValidationFailed(
            "custom aggregation must pass validate_cost before running"
        )
    if max_sweeps < 1:
        raise ValueError(f"max_sweeps must be >= 1, got {max_sweeps}")
    _check_arity(X0, cost.d)
    agg = cost.agg
    cols = list(X0.columns)
    sorted_cols = [np.sort(c) for c in cols]
    sweeps = 0
    rearrangements = 0
    converged = False
    for _ in range(max_sweeps):
        sweeps += 1
        changed = False
        for i in range(len(cols)):
            rest = [c for j, c in enumerate(cols) if j != i]
            part = eval_partial_rows(agg, i, rest)
            new_col = _column_pass(cols[i], sorted_cols[i], part)
            if new_col is None:
                continue
            cols[i] = new_col
            changed = True
            rearrangements += 1
        if not changed:
            converged = True
            break
    result = ArrangementMatrix(tuple(cols), X0.provenance)
    return RaResult(
        matrix=result,
        objective=objective(result, cost),
        sweeps=sweeps,
        column_rearrangements=rearrangements,
        converged=converged,
    )


def shuffle_columns(X: ArrangementMatrix, seed: int) -> ArrangementMatrix:
    """Permute each column independently and deterministically.

    The permutation of column i is derived from (seed, i), so repeated calls
    with the same seed yield the identical matrix.
    """
    if seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed}")
    cols = []
    for i, c in enumerate(X.columns):
        rng = np.random.default_rng([seed, i])
        cols.append(c[rng.permutation(c.size)])
    return ArrangementMatrix(tuple(cols), X.provenance)


def run_ra_restarts(
    X0: ArrangementMatrix,
    cost: CostFunction,
    restarts: int,
    seed: int,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> RaResult:
    """Best result over X0 itself plus restarts-1 shuffled starting points.

    Restart r >= 1 shuffles X0 with a seed derived from (seed, r); ties on
    the objective keep the earliest restart, so the result is deterministic.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed}")
    best = run_ra(X0, cost, max_sweeps=max_sweeps)
    for r in range(1, restarts):
        shuffle_seed = int(np.random.SeedSequence([seed, r]).generate_state(1)[0])
        candidate = run_ra(shuffle_columns(X0, shuffle_seed), cost, max_sweeps=max_sweeps)
        if candidate.objective < best.objective:
            best = candidate
    return best
