import itertools
import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase, override_settings

from .checks import ALGEBRA_CHECKS, check_product_laws
from .tensors import (
    SymTensor, apply, combine, metric_of_subspace, metric_power, multi_indices,
    multinomial, sym_product, tensor_power,
)


def random_integer_tensor(rng, dim, rank):
    return SymTensor(dim, rank, {a: float(rng.integers(-5, 6)) for a in multi_indices(dim, rank)})


class MultiIndexTests(SimpleTestCase):

    def test_degree_and_order(self):
        indices = multi_indices(3, 2)
        self.assertEqual(len(indices), 6)
        self.assertTrue(all(sum(a) == 2 for a in indices))
        self.assertEqual(indices, sorted(indices))

    def test_multinomial(self):
        self.assertEqual(multinomial((2, 1)), 3)
        self.assertEqual(multinomial((1, 1, 1)), 6)
        self.assertEqual(multinomial((0, 0)), 1)


class TensorPowerTests(SimpleTestCase):

    def test_axis_vector(self):
        t = tensor_power([1, 0], 3)
        self.assertEqual(t.coeffs, {(3, 0): 1.0})

    def test_binomial_expansion(self):
        t = tensor_power([1, 1], 2)
        self.assertEqual(t.coeffs, {(2, 0): 1.0, (1, 1): 2.0, (0, 2): 1.0})

    def test_rank_zero_is_one(self):
        t = tensor_power([2, 0, 0], 0)
        self.assertEqual(t.rank, 0)
        self.assertEqual(t.value, 1.0)

    def test_power_splits_into_product(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            v = rng.normal(size=3)
            p, q = rng.integers(0, 4, size=2)
            lhs = tensor_power(v, p + q)
            rhs = sym_product(tensor_power(v, p), tensor_power(v, q))
            self.assertTrue(lhs.allclose(rhs, atol=1e-12, rtol=1e-12))


class SymProductTests(SimpleTestCase):

    def test_metric_square(self):
        q = SymTensor.metric(2)
        self.assertEqual(sym_product(q, q).coeffs, {(4, 0): 1.0, (2, 2): 2.0, (0, 4): 1.0})

    def test_axis_product(self):
        e1 = tensor_power([1, 0], 2)
        e2 = tensor_power([0, 1], 2)
        self.assertEqual(sym_product(e1, e2).coeffs, {(2, 2): 1.0})

    def test_identity_element(self):
        a = tensor_power([1, 2], 3)
        self.assertEqual(sym_product(a, SymTensor.scalar(2, 1.0)), a)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            sym_product(SymTensor.metric(2), SymTensor.metric(3))

    def test_commutative_and_associative_on_integer_tensors(self):
        rng = np.random.default_rng(11)
        for dim in (2, 3):
            for _ in range(5):
                a, b, c = (random_integer_tensor(rng, dim, int(rng.integers(0, 5))) for _ in range(3))
                self.assertEqual(sym_product(a, b), sym_product(b, a))
                self.assertEqual(sym_product(sym_product(a, b), c), sym_product(a, sym_product(b, c)))

    def test_metric_power(self):
        self.assertEqual(metric_power(2, 2), sym_product(SymTensor.metric(2), SymTensor.metric(2)))
        self.assertEqual(metric_power(3, 0).value, 1.0)


class MetricOfSubspaceTests(SimpleTestCase):

    def test_single_axis(self):
        self.assertEqual(metric_of_subspace([[1, 0]]).coeffs, {(2, 0): 1.0})

    def test_full_basis_is_metric(self):
        self.assertEqual(metric_of_subspace(np.eye(3)), SymTensor.metric(3))

    def test_diagonal_direction(self):
        t = metric_of_subspace([[1 / math.sqrt(2), 1 / math.sqrt(2)]])
        expected = SymTensor(2, 2, {(2, 0): 0.5, (1, 1): 1.0, (0, 2): 0.5})
        self.assertTrue(t.allclose(expected, atol=1e-15, rtol=0))

    def test_empty_basis(self):
        self.assertTrue(metric_of_subspace([], dim=3).is_zero)

    def test_non_orthonormal_basis(self):
        with self.assertRaises(ValueError):
            metric_of_subspace([[1, 0], [1, 1]])
        with self.assertRaises(ValueError):
            metric_of_subspace([[2, 0]])


class ApplyTests(SimpleTestCase):

    def test_orthogonal_axes(self):
        self.assertAlmostEqual(apply(SymTensor.metric(2), [1, 0], [0, 1]), 0.0)

    def test_metric_norm(self):
        v = np.array([3.0, -4.0])
        self.assertAlmostEqual(apply(SymTensor.metric(2), v, v), 25.0)

    def test_square_of_vector(self):
        self.assertAlmostEqual(apply(tensor_power([1, 2], 2), [1, 0], [0, 1]), 2.0)

    def test_arity_mismatch(self):
        with self.assertRaises(ValueError):
            apply(SymTensor.metric(2), [1, 0])

    def test_permutation_invariance(self):
        rng = np.random.default_rng(3)
        for p in range(1, 5):
            t = SymTensor(3, p, {a: rng.normal() for a in multi_indices(3, p)})
            args = [rng.normal(size=3) for _ in range(p)]
            reference = apply(t, *args)
            for perm in itertools.permutations(args):
                self.assertAlmostEqual(apply(t, *perm), reference, places=10)

    def test_polarization_recovers_coefficients(self):
        rng = np.random.default_rng(5)
        basis = np.eye(3)
        for p in range(0, 5):
            t = SymTensor(3, p, {a: rng.normal() for a in multi_indices(3, p)})
            rebuilt = {}
            for exponents in multi_indices(3, p):
                slots = [basis[i] for i, a in enumerate(exponents) for _ in range(a)]
                rebuilt[exponents] = multinomial(exponents) * apply(t, *slots)
            self.assertTrue(SymTensor(3, p, rebuilt).allclose(t, atol=1e-12, rtol=0))

    def test_component_matches_apply(self):
        t = tensor_power([1, 2, 3], 3)
        self.assertAlmostEqual(t.component(0, 1, 2), 6.0)
        self.assertAlmostEqual(t.component(2, 2, 2), 27.0)


class CombineTests(SimpleTestCase):

    def test_cancellation(self):
        a = tensor_power([1, 2], 2)
        self.assertTrue(combine([(1, a), (-1, a)]).is_zero)

    def test_scaled_metric(self):
        self.assertEqual(combine([(2, SymTensor.metric(2))]).coeffs, {(2, 0): 2.0, (0, 2): 2.0})

    def test_halves(self):
        q = SymTensor.metric(2)
        self.assertEqual(combine([(0.5, q), (0.5, q)]), q)

    def test_mixed_rank(self):
        with self.assertRaises(ValueError):
            combine([(1, SymTensor.metric(2)), (1, tensor_power([1, 0], 1))])

    def test_empty_needs_shape(self):
        with self.assertRaises(ValueError):
            combine([])
        self.assertTrue(combine([], dim=2, rank=3).is_zero)


class SerializationTests(SimpleTestCase):

    def test_list_form_is_sorted(self):
        t = tensor_power([1, 1], 2)
        self.assertEqual(t.to_list(), [[[0, 2], 1.0], [[1, 1], 2.0], [[2, 0], 1.0]])
        self.assertEqual(SymTensor.from_list(2, 2, t.to_list()), t)

    def test_array_form(self):
        t = tensor_power([1, 2, 3], 2)
        self.assertEqual(SymTensor.from_array(3, 2, t.to_array()), t)

    def test_allclose_tolerance(self):
        q = SymTensor.metric(2)
        self.assertTrue(q.allclose(q + SymTensor(2, 2, {(2, 0): 1e-11})))
        self.assertFalse(q.allclose(q + SymTensor(2, 2, {(2, 0): 1e-8})))

    def test_allclose_reads_tolerance_settings(self):
        q = SymTensor.metric(2)
        nearby = q + SymTensor(2, 2, {(2, 0): 1e-4})
        self.assertFalse(q.allclose(nearby))
        with override_settings(TENSORVAL_RTOL=1e-3):
            self.assertTrue(q.allclose(nearby))
        with override_settings(TENSORVAL_ATOL=1e-3):
            self.assertTrue(q.allclose(nearby))
            self.assertFalse(q.allclose(nearby, atol=1e-10))


class AlgebraCheckTests(SimpleTestCase):

    def test_all_identities_hold(self):
        rng = np.random.default_rng(0)
        for check in ALGEBRA_CHECKS:
            summary = check(rng)
            self.assertGreater(summary['checked'], 0)
            self.assertEqual(summary['failed'], 0, summary['errors'])

    def test_broken_product_is_reported(self):
        def lopsided(*tensors):
            return sym_product(*tensors).scale(1.0 + 1e-3 * tensors[0].rank)

        with mock.patch('symtensor.checks.sym_product', lopsided):
            summary = check_product_laws(np.random.default_rng(1), dims=(2,), max_rank=2)
        self.assertGreater(summary['failed'], 0)
        self.assertLessEqual(len(summary['errors']), 5)
