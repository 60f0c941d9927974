"""
Numerics Test Suite

Test Coverage:
--------------
1. Rank and subspaces
   - Numerical rank, product rank against factor norms, rank under transpose
   - Null space, column space, sum, intersection, preimage
   - Hurwitz test

2. Invariant zeros
   - SISO non-minimum-phase zero and its direction
   - Zero-free square and tall systems
   - Degenerate pencils
   - Real zeros against a determinant scan, square zeros against det P(s)

3. Observer gains
   - Unobservable subspace
   - Pole placement, undetectable plants, bad pole lists
   - Requested poles matched to unobservable modes

Usage:
------
    pytest tests/test_numerics.py -v
    python tests/test_numerics.py  # Standalone mode

Expected Results:
-----------------
    - All tests pass in well under a second

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import sys
import unittest
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.model import benchmark_plant
from src.numerics import (
    DesignInfeasibleError,
    DimensionError,
    InvalidInputError,
    SubspaceBasis,
    column_space,
    invariant_zeros,
    is_hurwitz,
    null_space_basis,
    orthogonal_complement,
    place_observer_gain,
    preimage,
    product_rank,
    rank_tol,
    rosenbrock,
    subspace_intersect,
    subspace_sum,
    unobservable_subspace,
    zero_direction,
)

# (s - 1) / (s^2 + 3 s + 2) in controllable canonical form
A_NMP = np.array([[0.0, 1.0], [-2.0, -3.0]])
B_NMP = np.array([[0.0], [1.0]])
C_NMP = np.array([[-1.0, 1.0]])


class TestRank(unittest.TestCase):
    """Numerical rank"""

    def test_identity_and_zero(self):
        self.assertEqual(rank_tol(np.eye(4)), 4)
        self.assertEqual(rank_tol(np.zeros((3, 2))), 0)

    def test_outer_product_has_rank_one(self):
        v = np.array([[1.0], [2.0], [3.0]])
        self.assertEqual(rank_tol(v @ v.T), 1)

    def test_rank_survives_transpose(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            rows, cols = rng.integers(1, 7, size=2)
            rank = int(rng.integers(0, min(rows, cols) + 1))
            m = rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, cols))
            m *= 10.0 ** rng.uniform(-3, 3)
            self.assertEqual(rank_tol(m), rank)
            self.assertEqual(rank_tol(m.T), rank_tol(m))

    def test_rejects_bad_input(self):
        with self.assertRaises(InvalidInputError):
            rank_tol(np.array([[np.nan, 1.0]]))
        with self.assertRaises(InvalidInputError):
            rank_tol(np.eye(2), tol=0.0)

    def test_product_rank_sees_cancellation(self):
        self.assertEqual(product_rank([[1.0, 1.0]], [[1.0], [-1.0]]), 0)
        self.assertEqual(product_rank(np.eye(3), np.diag([1.0, 1.0, 0.0])), 2)


class TestSubspaces(unittest.TestCase):
    """Subspace arithmetic"""

    def setUp(self):
        self.e = np.eye(3)

    def test_null_space_is_orthonormal(self):
        kernel = null_space_basis([[1.0, 0.0, 0.0]])
        self.assertEqual(kernel.dim, 2)
        np.testing.assert_allclose(kernel.basis.T @ kernel.basis, np.eye(2), atol=1e-12)
        self.assertFalse(kernel.contains(self.e[:, 0]))

    def test_sum_and_intersection(self):
        a = column_space(self.e[:, :2])
        b = column_space(self.e[:, 1:])
        self.assertEqual(subspace_sum(a, b).dim, 3)
        meet = subspace_intersect(a, b)
        self.assertEqual(meet.dim, 1)
        self.assertTrue(meet.contains(self.e[:, 1]))

    def test_intersection_with_zero(self):
        self.assertTrue(subspace_intersect(SubspaceBasis.zero(3), SubspaceBasis.full(3)).is_zero)

    def test_ambient_mismatch(self):
        with self.assertRaises(DimensionError):
            subspace_sum(SubspaceBasis.full(2), SubspaceBasis.full(3))

    def test_complement(self):
        line = column_space([[1.0], [1.0], [0.0]])
        comp = orthogonal_complement(line)
        self.assertEqual(comp.dim, 2)
        self.assertTrue(comp.contains([1.0, -1.0, 0.0]))

    def test_preimage(self):
        s = SubspaceBasis(2, np.array([[1.0], [0.0]]))
        self.assertEqual(preimage(np.diag([1.0, 2.0]), s).dim, 1)
        # the zero map sends everything into any subspace
        self.assertEqual(preimage(np.zeros((2, 2)), s).dim, 2)


class TestHurwitz(unittest.TestCase):

    def test_stable_and_marginal(self):
        self.assertTrue(is_hurwitz(-np.eye(3)))
        self.assertFalse(is_hurwitz([[0.0, 1.0], [0.0, 0.0]]))
        self.assertFalse(is_hurwitz(-0.5 * np.eye(2), margin=1.0))

    def test_rejects_non_square(self):
        with self.assertRaises(DimensionError):
            is_hurwitz(np.ones((2, 3)))


class TestInvariantZeros(unittest.TestCase):
    """Zeros of the Rosenbrock pencil"""

    def test_siso_non_minimum_phase_zero(self):
        zero_set = invariant_zeros(A_NMP, B_NMP, C_NMP)
        self.assertEqual(zero_set.zeros.size, 1)
        self.assertAlmostEqual(zero_set.zeros[0].real, 1.0, places=8)
        self.assertEqual(zero_set.normal_rank, 3)
        self.assertFalse(zero_set.degenerate)
        np.testing.assert_allclose(zero_set.real_zeros(), [1.0], atol=1e-8)
        self.assertEqual(zero_set.unstable().size, 1)

    def test_zero_direction_annihilates_pencil(self):
        x0, u0 = zero_direction(A_NMP, B_NMP, C_NMP, z=1.0)
        pencil = rosenbrock(A_NMP, B_NMP, C_NMP, np.zeros((1, 1)), 1.0)
        np.testing.assert_allclose(pencil @ np.concatenate([x0, u0]), 0.0, atol=1e-9)
        self.assertAlmostEqual(np.max(np.abs(x0)), 1.0)

    def test_zero_direction_rejects_non_zero(self):
        with self.assertRaises(ValueError):
            zero_direction(A_NMP, B_NMP, C_NMP, z=3.0)

    def test_first_order_lag_has_no_zeros(self):
        self.assertEqual(invariant_zeros([[-1.0]], [[1.0]], [[1.0]]).zeros.size, 0)

    def test_tall_system_without_common_zero(self):
        c = np.vstack([C_NMP, [[1.0, 0.0]]])
        zero_set = invariant_zeros(A_NMP, B_NMP, c)
        self.assertEqual(zero_set.zeros.size, 0)
        self.assertEqual(zero_set.pencil_shape, (4, 3))

    def test_degenerate_pencil(self):
        zero_set = invariant_zeros(-np.eye(2), [[1.0], [0.0]], [[0.0, 0.0]])
        self.assertTrue(zero_set.degenerate)
        self.assertLess(zero_set.normal_rank, 3)

    def test_benchmark_zeros_match_determinant_scan(self):
        plant = benchmark_plant()
        a, b, c = plant.a_s, plant.b_s, plant.c_s
        d = np.zeros((c.shape[0], b.shape[1]))

        def det(s):
            return np.linalg.det(rosenbrock(a, b, c, d, s))

        grid = np.linspace(-8.0, 8.0, 3201)
        values = np.array([det(s) for s in grid])
        crossings = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
        scanned = sorted(brentq(det, grid[i], grid[i + 1], xtol=1e-12) for i in crossings)

        computed = invariant_zeros(a, b, c).real_zeros()
        computed = np.sort(computed[np.abs(computed) < 8.0])
        np.testing.assert_allclose(computed, scanned, atol=1e-7)
        self.assertTrue(np.any(np.abs(np.asarray(scanned) - (np.sqrt(13.0) - 3.0) / 2.0) < 1e-7))

    def test_square_systems_match_determinant_polynomial(self):
        # det P(s) of a square system is a polynomial whose roots are the zeros
        rng = np.random.default_rng(5)
        nodes = 2.0 * np.cos(np.pi * (np.arange(9) + 0.5) / 9)
        for _ in range(10):
            a = rng.standard_normal((4, 4))
            b = rng.standard_normal((4, 2))
            c = rng.standard_normal((2, 4))
            d = np.zeros((2, 2))
            values = [np.linalg.det(rosenbrock(a, b, c, d, s)) for s in nodes]
            coeffs = np.polyfit(nodes, values, 4)
            coeffs[np.abs(coeffs) < 1e-8 * np.max(np.abs(coeffs))] = 0.0
            expected = np.roots(np.trim_zeros(coeffs, "f"))

            zeros = invariant_zeros(a, b, c).zeros
            self.assertEqual(zeros.size, expected.size)
            for z in expected:
                self.assertLess(np.min(np.abs(zeros - z)), 1e-6 * max(1.0, abs(z)))

    def test_to_dict(self):
        data = invariant_zeros(A_NMP, B_NMP, C_NMP).to_dict()
        self.assertEqual(data["pencil_shape"], [3, 3])
        self.assertAlmostEqual(data["zeros"][0][0], 1.0, places=8)

    def test_shape_errors(self):
        with self.assertRaises(DimensionError):
            invariant_zeros(A_NMP, np.ones((3, 1)), C_NMP)


class TestObserver(unittest.TestCase):
    """Unobservable subspace and gain placement"""

    def test_unobservable_subspace(self):
        unobservable = unobservable_subspace(np.diag([-1.0, -2.0]), [[1.0, 0.0]])
        self.assertEqual(unobservable.dim, 1)
        self.assertTrue(unobservable.contains([0.0, 1.0]))

    def test_scalar_gain(self):
        np.testing.assert_allclose(place_observer_gain([[0.0]], [[1.0]], [-2.0]), [[2.0]])

    def test_double_integrator(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        c = np.array([[1.0, 0.0]])
        gain = place_observer_gain(a, c, [-1.0, -2.0])
        np.testing.assert_allclose(np.sort(np.linalg.eigvals(a - gain @ c).real), [-2.0, -1.0], atol=1e-8)

    def test_unobservable_mode_listed_first(self):
        # mode -1 is unobservable; listing it first must not steal the observable pole
        a = np.diag([1.0, -1.0])
        c = np.array([[1.0, 0.0]])
        gain = place_observer_gain(a, c, [-1.0, -2.0])
        np.testing.assert_allclose(np.sort(np.linalg.eigvals(a - gain @ c).real), [-2.0, -1.0], atol=1e-8)
        np.testing.assert_allclose(gain, [[3.0], [0.0]], atol=1e-8)

    def test_unmatched_unobservable_mode_keeps_order(self):
        a = np.diag([1.0, -3.0])
        c = np.array([[1.0, 0.0]])
        gain = place_observer_gain(a, c, [-1.0, -2.0])
        np.testing.assert_allclose(np.sort(np.linalg.eigvals(a - gain @ c).real), [-3.0, -1.0], atol=1e-8)

    def test_undetectable_plant(self):
        with self.assertRaises(DesignInfeasibleError):
            place_observer_gain(np.diag([1.0, -1.0]), [[0.0, 1.0]], [-1.0, -2.0])

    def test_bad_pole_lists(self):
        with self.assertRaises(ValueError):
            place_observer_gain([[0.0]], [[1.0]], [-1.0, -2.0])
        with self.assertRaises(ValueError):
            place_observer_gain(np.zeros((2, 2)), np.eye(2), [-1.0 + 1.0j, -2.0])


if __name__ == "__main__":
    unittest.main()
