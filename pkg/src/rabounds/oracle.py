"""Exhaustive ground truth for tiny instances.

Enumerates every within-column permutation of an arrangement matrix (the
first column is held fixed: the objective is invariant under simultaneous row
permutation, which cuts the work by n!). Provides the global minimum and
maximum of the objective, the minimum restricted to arrangements where every
column is oppositely ordered to its partial aggregate, and the comonotonic
estimate of the supremum.

Sum and weighted-sum aggregations take a vectorized path that evaluates
arrangements in chunks; custom aggregations fall back to a plain loop.
"""

from __future__ import annotations

import itertools
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from .costfn import CostFunction, eval_g_rows
from .errors import BudgetExceeded, InternalInconsistency, LengthMismatch
from .marginals import DiscreteMarginal
from .ra_core import ArrangementMatrix, is_in_opposite_set, objective

__all__ = [
    "brute_force_min",
    "brute_force_max",
    "brute_force_min_over_opposite_set",
    "comonotonic_value",
    "arrangement_count",
]

DEFAULT_BUDGET = 1_000_000


def arrangement_count(n: int, d: int) -> int:
    """Number of arrangements enumerated: (n!)^(d-1)."""
    return math.factorial(n) ** (d - 1)


def _check_budget(X: ArrangementMatrix, budget: int) -> int:
    total = arrangement_count(X.n, X.d)
    if total > budget:
        raise BudgetExceeded(total, budget)
    return total


def _perm_table(n: int) -> np.ndarray:
    """All permutations of range(n) in lexicographic order, one per row."""
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def _opposite_batch(colvals: np.ndarray, part: np.ndarray) -> np.ndarray:
    """All-pairs opposite-ordering predicate for a (chunk, n) batch.

    Sign comparisons rather than difference products: products underflow to
    zero for subnormal-scale differences and would mask violations.
    """
    dx = colvals[:, :, None] - colvals[:, None, :]
    dy = part[:, :, None] - part[:, None, :]
    violating = ((dx > 0) & (dy > 0)) | ((dx < 0) & (dy < 0))
    return ~violating.any(axis=(1, 2))


def _scan_fast(
    X: ArrangementMatrix,
    cost: CostFunction,
    budget: int,
    mode: str,
    chunk_size: Optional[int],
) -> Tuple[float, int]:
    """Chunked vectorized scan for sum / weighted-sum aggregations.

    mode is "min", "max", or "min_restricted"; returns (value, flat index of
    an attaining arrangement).
    """
    total = _check_budget(X, budget)
    n, d = X.n, X.d
    agg = cost.agg
    w = np.ones(d) if agg.kind == "sum" else np.asarray(agg.weights, dtype=float)
    perms = _perm_table(n)
    m = perms.shape[0]
    shape = (m,) * (d - 1)
    tables = [X.columns[i][perms] for i in range(1, d)]
    base = X.columns[0]
    if chunk_size is None:
        # the pairwise predicate builds (chunk, n, n) tensors
        chunk_size = max(1, (1 << 21) // (n * n))

    sign = -1.0 if mode == "max" else 1.0
    best = np.inf
    best_flat = -1
    for lo in range(0, total, chunk_size):
        hi = min(lo + chunk_size, total)
        flat = np.arange(lo, hi)
        ids = np.unravel_index(flat, shape)
        vals = [np.broadcast_to(base, (hi - lo, n))]
        vals.extend(t[idc] for t, idc in zip(tables, ids))
        H = w[0] * vals[0]
        for wi, v in zip(w[1:], vals[1:]):
            H = H + wi * v
        obj = eval_g_rows(cost.transform, H).sum(axis=1)
        if mode == "min_restricted":
            feasible = np.ones(hi - lo, dtype=bool)
            for i in range(d):
                # accumulate the partial directly (same order as the loop's
                # partial_aggregate_column); deriving it as H - w_i*vals_i
                # cancels catastrophically on tied values and can flag exact
                # ties as violations
                rest = [j for j in range(d) if j != i]
                part = w[rest[0]] * vals[rest[0]]
                for j in rest[1:]:
                    part = part + w[j] * vals[j]
                feasible &= _opposite_batch(np.ascontiguousarray(vals[i]), part)
            obj = np.where(feasible, obj, np.inf)
        scored = sign * obj
        k = int(np.argmin(scored))
        if scored[k] < best:
            best = float(scored[k])
            best_flat = lo + k
    if mode == "min_restricted" and not np.isfinite(best):
        raise InternalInconsistency(
            "no oppositely-ordered arrangement found; the fixed-point set is never empty"
        )
    return sign * best, best_flat


def _matrix_at_flat(X: ArrangementMatrix, flat: int) -> ArrangementMatrix:
    n, d = X.n, X.d
    perms = _perm_table(n)
    ids = np.unravel_index(flat, (perms.shape[0],) * (d - 1))
    cols = [X.columns[0]]
    cols.extend(X.columns[i + 1][perms[ids[i]]] for i in range(d - 1))
    return ArrangementMatrix(tuple(cols), X.provenance)


def _scan_generic(
    X: ArrangementMatrix, cost: CostFunction, budget: int, mode: str
) -> Tuple[float, ArrangementMatrix]:
    """Plain enumeration for custom aggregations."""
    _check_budget(X, budget)
    n, d = X.n, X.d
    sign = -1.0 if mode == "max" else 1.0
    best = np.inf
    best_matrix = None
    all_perms = list(itertools.permutations(range(n)))
    for combo in itertools.product(all_perms, repeat=d - 1):
        cols = [X.columns[0]]
        cols.extend(X.columns[i + 1][np.array(p)] for i, p in enumerate(combo))
        candidate = ArrangementMatrix(tuple(cols), X.provenance)
        if mode == "min_restricted" and not is_in_opposite_set(candidate, cost.agg):
            continue
        val = sign * objective(candidate, cost)
        if val < best:
            best = val
            best_matrix = candidate
    if best_matrix is None:
        raise InternalInconsistency(
            "no oppositely-ordered arrangement found; the fixed-point set is never empty"
        )
    return sign * best, best_matrix


def _scan(
    X: ArrangementMatrix,
    cost: CostFunction,
    budget: int,
    mode: str,
    chunk_size: Optional[int],
) -> Tuple[float, ArrangementMatrix]:
    if cost.agg.kind in ("sum", "weighted_sum"):
        val, flat = _scan_fast(X, cost, budget, mode, chunk_size)
        return val, _matrix_at_flat(X, flat)
    return _scan_generic(X, cost, budget, mode)


def brute_force_min(
    X: ArrangementMatrix,
    cost: CostFunction,
    budget: int = DEFAULT_BUDGET,
    chunk_size: Optional[int] = None,
) -> Tuple[float, ArrangementMatrix]:
    """Exact global minimum of the objective over all arrangements."""
    return _scan(X, cost, budget, "min", chunk_size)


def brute_force_max(
    X: ArrangementMatrix,
    cost: CostFunction,
    budget: int = DEFAULT_BUDGET,
    chunk_size: Optional[int] = None,
) -> Tuple[float, ArrangementMatrix]:
    """Exact global maximum of the objective over all arrangements."""
    return _scan(X, cost, budget, "max", chunk_size)


def brute_force_min_over_opposite_set(
    X: ArrangementMatrix,
    cost: CostFunction,
    budget: int = DEFAULT_BUDGET,
    chunk_size: Optional[int] = None,
) -> float:
    """Minimum objective over arrangements in the oppositely-ordered set."""
    val, _ = _scan(X, cost, budget, "min_restricted", chunk_size)
    return val


def comonotonic_value(
    marginals: Sequence[DiscreteMarginal], cost: CostFunction
) -> float:
    """Objective of the all-ascending arrangement, divided by n.

    For supermodular costs this arrangement attains the maximum over all
    arrangements, so the value estimates the supremum of the expectation.
    """
    margs = tuple(marginals)
    if len({m.n for m in margs}) > 1:
        raise LengthMismatch(
            f"marginals must share one n, got {sorted({m.n for m in margs})}"
        )
    X = ArrangementMatrix.comonotonic(margs)
    return objective(X, cost) / X.n
