"""Tests for the majorization orders and the opposite-ordering predicate."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rabounds import (
    LengthMismatch,
    Order,
    compare,
    is_oppositely_ordered,
    sort_asc,
    sort_desc,
)

finite_floats = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)
vectors = st.lists(finite_floats, min_size=1, max_size=20)


class TestSorts:
    def test_desc(self):
        assert np.array_equal(sort_desc([1, 3, 2]), [3, 2, 1])

    def test_asc(self):
        assert np.array_equal(sort_asc([1, 3, 2]), [1, 2, 3])

    def test_empty(self):
        assert sort_desc([]).size == 0
        assert sort_asc([]).size == 0


class TestCompare:
    def test_concentrated_mass_majorizes_flat(self):
        assert compare((1, 1, 1), (3, 0, 0)).value is Order.MAJORIZED

    def test_permutation(self):
        assert compare((2, 1), (1, 2)).value is Order.PERMUTATION

    def test_weak_submajorization_without_total_equality(self):
        assert compare((0, 1), (1, 1)).value is Order.WEAKLY_SUBMAJORIZED
        assert compare((1, 2), (0, 5)).value is Order.WEAKLY_SUBMAJORIZED

    def test_weak_supermajorization(self):
        # ascending prefixes of x dominate those of y; totals differ
        assert compare((1, 1), (0, 1)).value is Order.WEAKLY_SUPERMAJORIZED

    def test_incomparable(self):
        assert compare((0, 3), (1, 1)).value is Order.INCOMPARABLE

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            compare((1, 2), (1, 2, 3))

    def test_witness_prefix_sums_exposed(self):
        rel = compare((1, 1, 1), (3, 0, 0))
        assert np.array_equal(rel.desc_prefix_x, [1, 2, 3])
        assert np.array_equal(rel.desc_prefix_y, [3, 3, 3])

    def test_lattice_implications(self):
        perm = compare((2, 1), (1, 2))
        assert perm.is_majorized and perm.is_weakly_submajorized
        assert perm.is_weakly_supermajorized
        major = compare((1, 1, 1), (3, 0, 0))
        assert major.is_weakly_submajorized and major.is_weakly_supermajorized

    @given(vectors)
    @settings(max_examples=200, deadline=None)
    def test_reflexive_permutation(self, xs):
        rng = np.random.default_rng(0)
        shuffled = rng.permutation(xs)
        assert compare(xs, shuffled).value is Order.PERMUTATION

    def test_mutual_weak_submajorization_implies_permutation(self):
        rng = np.random.default_rng(12)
        seen = 0
        for _ in range(2000):
            n = int(rng.integers(1, 8))
            x = rng.uniform(-2, 2, size=n)
            y = rng.permutation(x) if rng.random() < 0.5 else rng.uniform(-2, 2, size=n)
            both = (
                compare(x, y).is_weakly_submajorized
                and compare(y, x).is_weakly_submajorized
            )
            if both:
                seen += 1
                assert compare(x, y).value is Order.PERMUTATION
        assert seen > 0  # the implication was actually exercised


class TestOppositelyOrdered:
    def test_reversed_vectors(self):
        assert is_oppositely_ordered((1, 2, 3), (3, 2, 1))

    def test_comonotonic_vectors(self):
        assert not is_oppositely_ordered((1, 2, 3), (1, 2, 3))

    def test_ties_place_no_constraint(self):
        # pairwise products (x_i-x_j)(y_i-y_j) are all <= 0
        assert is_oppositely_ordered((1, 1, 2), (5, 0, 0))
        assert is_oppositely_ordered((1, 1, 2), (0, 5, 0))
        assert is_oppositely_ordered((2, 2, 2), (1, 7, 3))

    def test_tie_boundary_violation(self):
        assert not is_oppositely_ordered((1, 1, 2), (0, 5, 1))

    def test_trivial_sizes(self):
        assert is_oppositely_ordered([], [])
        assert is_oppositely_ordered([4.0], [9.0])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            is_oppositely_ordered((1, 2), (1, 2, 3))

    @given(vectors)
    @settings(max_examples=200, deadline=None)
    def test_matches_all_pairs_definition(self, xs):
        rng = np.random.default_rng(1)
        x = np.asarray(xs, dtype=float)
        y = rng.choice(np.asarray(xs), size=len(xs))  # encourage ties
        # sign form of (x_i-x_j)(y_i-y_j) <= 0: the literal product would
        # underflow to zero for subnormal-scale differences
        want = not any(
            (x[i] < x[j] and y[i] < y[j]) or (x[i] > x[j] and y[i] > y[j])
            for i in range(len(x))
            for j in range(len(x))
        )
        assert is_oppositely_ordered(x, y) == want


class TestRearrangementInequalities:
    def test_antithetic_sum_is_majorized_by_any_pairing(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            n = int(rng.integers(1, 21))
            x, y = rng.normal(size=(2, n)) * rng.uniform(0.1, 5)
            rel = compare(sort_desc(x) + sort_asc(y), x + y)
            assert rel.is_majorized

    def test_supermodular_increasing_combine_weakly_submajorized(self):
        rng = np.random.default_rng(3)
        combines = [
            lambda a, b: a * b,  # product on positives
            lambda a, b: 0.7 * a + 0.3 * b,
            np.minimum,
        ]
        for _ in range(1000):
            n = int(rng.integers(1, 21))
            x, y = rng.uniform(0, 3, size=(2, n))
            h2 = combines[int(rng.integers(len(combines)))]
            antithetic = h2(sort_desc(x), sort_asc(y))
            assert compare(antithetic, h2(x, y)).is_weakly_submajorized

    def test_separable_monotone_combine_strongly_majorized(self):
        rng = np.random.default_rng(4)
        phis = [
            (np.exp, lambda v: v**3),
            (lambda v: 2 * v + 1, lambda v: v),
            (lambda v: v**3, np.exp),
        ]
        for _ in range(1000):
            n = int(rng.integers(1, 21))
            x, y = rng.uniform(-2, 2, size=(2, n))
            p1, p2 = phis[int(rng.integers(len(phis)))]
            antithetic = p1(sort_desc(x)) + p2(sort_asc(y))
            assert compare(antithetic, p1(x) + p2(y)).is_majorized

    def test_increasing_convex_sums_respect_weak_submajorization(self):
        rng = np.random.default_rng(5)
        psis = [
            lambda v: np.maximum(v - 0.3, 0.0),
            np.exp,
            lambda v: np.maximum(v, 0.0) ** 2,
        ]
        for _ in range(1000):
            n = int(rng.integers(2, 21))
            y = rng.uniform(-2, 2, size=n)
            x = y.copy()
            for _ in range(3):  # Robin Hood transfers keep x majorized by y
                i, j = rng.integers(n, size=2)
                lam = rng.uniform()
                xi, xj = x[i], x[j]
                x[i] = lam * xi + (1 - lam) * xj
                x[j] = lam * xj + (1 - lam) * xi
            x -= rng.uniform(0, 0.5, size=n)  # lowering keeps weak submajorization
            rel = compare(x, y)
            assert rel.is_weakly_submajorized
            psi = psis[int(rng.integers(len(psis)))]
            assert np.sum(psi(x)) <= np.sum(psi(y)) + 1e-9
