import csv
import io
import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase, override_settings
from scipy import stats

from polytope.polytopes import build_polytope
from symtensor.tensors import SymTensor
from valuations.formulas import classical_crofton, principal_kinematic, rhs_crofton, rhs_kinematic

from .estimators import (
    Estimate, compare, estimate_crofton, estimate_kinematic, estimate_parallel_volume,
)
from .sampling import RigidMotion, sample_direction_space, sample_rotation
from .serializers import EstimateSerializer

UNIT_SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]
UNIT_CUBE = [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]


def square():
    return build_polytope(UNIT_SQUARE)


def cube():
    return build_polytope(UNIT_CUBE)


def scalar_estimate(mean, stderr):
    return Estimate(SymTensor.scalar(2, mean), SymTensor.scalar(2, stderr), 100, 0, 1.0)


class RotationSamplingTests(SimpleTestCase):

    def test_plane_angle_is_uniform(self):
        rng = np.random.default_rng(20240611)
        angles = []
        for _ in range(2000):
            R = sample_rotation(2, rng)
            angles.append(math.atan2(R[1, 0], R[0, 0]) % (2 * math.pi))
        result = stats.kstest(np.array(angles) / (2 * math.pi), 'uniform')
        self.assertGreater(result.pvalue, 1e-3)

    def test_space_rotation_moves_axis_uniformly(self):
        rng = np.random.default_rng(5)
        counts = np.zeros((12, 4))
        for _ in range(4800):
            x, y, z = sample_rotation(3, rng)[:, 2]
            band = min(int((z + 1) / 2 * 12), 11)
            sector = int((math.atan2(y, x) % (2 * math.pi)) / (math.pi / 2)) % 4
            counts[band, sector] += 1
        result = stats.chisquare(counts.ravel())
        self.assertGreater(result.pvalue, 1e-3)

    def test_rotations_are_proper(self):
        rng = np.random.default_rng(1)
        for n in (2, 3):
            for _ in range(20):
                R = sample_rotation(n, rng)
                self.assertTrue(np.allclose(R @ R.T, np.eye(n), atol=1e-12))
                self.assertAlmostEqual(np.linalg.det(R), 1.0)

    def test_unsupported_dimension(self):
        with self.assertRaises(ValueError):
            sample_rotation(4, np.random.default_rng(0))

    def test_direction_spaces_are_orthonormal(self):
        rng = np.random.default_rng(2)
        for n, k in ((2, 1), (3, 1), (3, 2)):
            basis = sample_direction_space(n, k, rng)
            self.assertEqual(basis.shape, (k, n))
            self.assertTrue(np.allclose(basis @ basis.T, np.eye(k), atol=1e-12))
        self.assertEqual(sample_direction_space(3, 0, rng).shape, (0, 3))
        self.assertTrue(np.array_equal(sample_direction_space(2, 2, rng), np.eye(2)))
        with self.assertRaises(ValueError):
            sample_direction_space(2, 3, rng)


class RigidMotionTests(SimpleTestCase):

    def test_rejects_non_orthogonal_matrix(self):
        with self.assertRaises(ValueError):
            RigidMotion([[1.0, 0.1], [0.0, 1.0]], [0.0, 0.0])

    def test_rejects_reflection(self):
        with self.assertRaises(ValueError):
            RigidMotion([[1.0, 0.0], [0.0, -1.0]], [0.0, 0.0])

    def test_rejects_shape_mismatch(self):
        with self.assertRaises(ValueError):
            RigidMotion(np.eye(2), [0.0, 0.0, 0.0])

    def test_apply(self):
        motion = RigidMotion([[0.0, -1.0], [1.0, 0.0]], [2.0, 0.0])
        self.assertTrue(np.allclose(motion.apply_points([[1.0, 0.0]]), [[2.0, 1.0]]))
        moved = motion.apply(square())
        self.assertAlmostEqual(moved.volume, 1.0)
        self.assertTrue(np.allclose(moved.centroid, [1.5, 0.5]))


class CompareTests(SimpleTestCase):

    def test_z_score(self):
        result = compare(scalar_estimate(1.0, 0.1), SymTensor.scalar(2, 1.25), zmax=3.0)
        self.assertAlmostEqual(result.z[0], -2.5)
        self.assertAlmostEqual(result.max_abs_z, 2.5)
        self.assertEqual(result.verdict, 'PASS')
        self.assertEqual(compare(scalar_estimate(1.0, 0.1), SymTensor.scalar(2, 1.25), zmax=2.0).verdict, 'FAIL')

    def test_zero_stderr_uses_absolute_tolerance(self):
        result = compare(scalar_estimate(1.0, 0.0), SymTensor.scalar(2, 1.0 + 1e-12), atol=1e-10)
        self.assertIsNone(result.z[0])
        self.assertTrue(result.passed)
        self.assertFalse(compare(scalar_estimate(1.0, 0.0), SymTensor.scalar(2, 1.1), atol=1e-10).passed)

    def test_zero_stderr_relative_tolerance(self):
        estimate, exact = scalar_estimate(100.0, 0.0), SymTensor.scalar(2, 100.05)
        self.assertFalse(compare(estimate, exact).passed)
        self.assertTrue(compare(estimate, exact, rtol=1e-3).passed)
        with override_settings(TENSORVAL_RTOL=1e-3):
            self.assertTrue(compare(estimate, exact).passed)

    def test_shape_mismatch(self):
        with self.assertRaises(ValueError):
            compare(scalar_estimate(1.0, 0.1), SymTensor.zeros(2, 1))
        with self.assertRaises(ValueError):
            compare(scalar_estimate(1.0, 0.1), SymTensor.scalar(3, 1.0))

    def test_to_dict(self):
        data = compare(scalar_estimate(1.0, 0.5), SymTensor.scalar(2, 1.0), zmax=3.0).to_dict()
        self.assertEqual(data['verdict'], 'PASS')
        self.assertEqual(data['z'], [0.0])


class ParallelVolumeEstimateTests(SimpleTestCase):

    def test_unit_square(self):
        estimate = estimate_parallel_volume(square(), 1.0, samples=4000, seed=3, workers=1)
        self.assertEqual(estimate.samples, 4000)
        self.assertAlmostEqual(estimate.window_volume, 9.0)
        self.assertTrue(compare(estimate, SymTensor.scalar(2, 5 + math.pi), zmax=3.0).passed)

    def test_antithetic(self):
        estimate = estimate_parallel_volume(square(), 0.5, samples=2000, seed=4, workers=1, antithetic=True)
        self.assertTrue(compare(estimate, SymTensor.scalar(2, 1 + 2 + math.pi / 4), zmax=3.0).passed)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            estimate_parallel_volume(square(), 0.0, samples=10, seed=0)
        with self.assertRaises(ValueError):
            estimate_parallel_volume(square(), 1.0, samples=0, seed=0)
        with self.assertRaises(ValueError):
            estimate_parallel_volume(square(), 1.0, samples=10, seed=-1)


class ConvergenceTests(SimpleTestCase):

    def assertStderrHalves(self, small, large):
        ratio = large.stderr.value / small.stderr.value
        self.assertGreaterEqual(ratio, 0.4)
        self.assertLessEqual(ratio, 0.6)

    def test_parallel_volume(self):
        self.assertStderrHalves(
            estimate_parallel_volume(square(), 1.0, samples=4000, seed=12),
            estimate_parallel_volume(square(), 1.0, samples=16000, seed=13),
        )

    def test_crofton_lines(self):
        self.assertStderrHalves(
            estimate_crofton(square(), 1, 0, 0, 0, samples=500, seed=14),
            estimate_crofton(square(), 1, 0, 0, 0, samples=2000, seed=15),
        )


class DeterminismTests(SimpleTestCase):

    def run_estimate(self, seed, workers):
        return estimate_parallel_volume(square(), 1.0, samples=1500, seed=seed, workers=workers, batch_size=400)

    def test_same_seed_same_result(self):
        first, second = self.run_estimate(8, 1), self.run_estimate(8, 1)
        self.assertEqual(first.mean, second.mean)
        self.assertEqual(first.stderr, second.stderr)

    def test_independent_of_worker_count(self):
        serial, pooled = self.run_estimate(8, 1), self.run_estimate(8, 2)
        self.assertTrue(np.array_equal(serial.mean.to_array(), pooled.mean.to_array()))
        self.assertTrue(np.array_equal(serial.stderr.to_array(), pooled.stderr.to_array()))

    def test_seeds_differ(self):
        self.assertNotEqual(self.run_estimate(8, 1).mean.value, self.run_estimate(9, 1).mean.value)

    def test_batch_split_does_not_change_the_sample_count(self):
        estimate = estimate_parallel_volume(square(), 1.0, samples=1001, seed=1, batch_size=250)
        self.assertEqual(estimate.samples, 1001)


class KinematicEstimateTests(SimpleTestCase):

    def rectangle(self):
        return build_polytope([[0, 0], [2, 0], [2, 1], [0, 1]])

    def triangle(self):
        return build_polytope([[0, 0], [0.6, 0], [0.1, 0.5]])

    def assertAgrees(self, estimate, exact):
        result = compare(estimate, exact, zmax=3.0)
        self.assertTrue(result.passed, result.to_dict())

    def test_euler_characteristic_of_two_squares(self):
        K = square()
        estimate = estimate_kinematic(K, K, 0, 0, 0, samples=300, seed=11, workers=1)
        exact = principal_kinematic(K, K, 0)
        self.assertAlmostEqual(exact, 2 + 8 / math.pi)
        self.assertAgrees(estimate, SymTensor.scalar(2, exact))

    def test_position_tensor(self):
        K = self.rectangle()
        K2 = build_polytope([[0, 0], [0.5, 0], [0, 0.5]])
        estimate = estimate_kinematic(K, K2, 1, 1, 0, samples=300, seed=12, workers=1)
        self.assertAgrees(estimate, rhs_kinematic(K, K2, 1, 1, 0))

    def test_normal_tensor(self):
        K, K2 = self.rectangle(), self.triangle()
        estimate = estimate_kinematic(K, K2, 1, 0, 2, samples=600, seed=13, workers=1)
        exact = rhs_kinematic(K, K2, 1, 0, 2)
        self.assertEqual(exact.rank, 2)
        self.assertGreater(exact.norm_inf(), 0.1)
        self.assertAgrees(estimate, exact)

    def test_mixed_tensor(self):
        K, K2 = self.rectangle(), self.triangle()
        self.assertAgrees(
            estimate_kinematic(K, K2, 1, 1, 1, samples=600, seed=14, workers=1),
            rhs_kinematic(K, K2, 1, 1, 1),
        )

    def test_odd_rank_vanishes_for_a_symmetric_body(self):
        K, K2 = square(), self.triangle()
        exact = rhs_kinematic(K, K2, 0, 0, 3)
        self.assertTrue(exact.allclose(SymTensor.zeros(2, 3), atol=1e-9))
        estimate = estimate_kinematic(K, K2, 0, 0, 3, samples=600, seed=15, workers=1)
        self.assertGreater(estimate.stderr.norm_inf(), 0.0)
        self.assertAgrees(estimate, exact)

    def test_moving_the_bodies(self):
        K, K2 = self.rectangle(), self.triangle()
        angle = 0.7
        motion = RigidMotion(
            [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]], [3.0, -1.0],
        )
        self.assertAgrees(
            estimate_kinematic(motion.apply(K), K2, 0, 0, 0, samples=400, seed=16, workers=1),
            SymTensor.scalar(2, principal_kinematic(K, K2, 0)),
        )
        self.assertAgrees(
            estimate_kinematic(K, motion.apply(K2), 1, 0, 2, samples=600, seed=17, workers=1),
            rhs_kinematic(K, K2, 1, 0, 2),
        )

    def test_motions_are_rigid_motions(self):
        with mock.patch('mc_integration.estimators.RigidMotion', wraps=RigidMotion) as motion:
            estimate_kinematic(square(), self.triangle(), 0, 0, 0, samples=5, seed=0, workers=1)
        self.assertEqual(motion.call_count, 10)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            estimate_kinematic(square(), cube(), 0, 0, 0, samples=1, seed=0)


class CroftonEstimateTests(SimpleTestCase):

    def assertAgrees(self, estimate, exact):
        result = compare(estimate, exact, zmax=3.0)
        self.assertTrue(result.passed, result.to_dict())

    def test_lines_hitting_a_square(self):
        K = square()
        estimate = estimate_crofton(K, 1, 0, 0, 0, samples=400, seed=21, workers=1)
        self.assertAlmostEqual(classical_crofton(K, 1, 0), 4 / math.pi)
        self.assertAgrees(estimate, SymTensor.scalar(2, 4 / math.pi))

    def test_first_moment_of_chords(self):
        K = build_polytope([[0, 0], [2, 0], [2, 1], [0, 1]])
        estimate = estimate_crofton(K, 1, 0, 1, 0, samples=400, seed=22, workers=1)
        self.assertAgrees(estimate, rhs_crofton(K, 1, 0, 1, 0))

    def test_plane_sections_of_the_cube(self):
        K = cube()
        exact = rhs_crofton(K, 2, 1, 0, 2)
        self.assertEqual((exact.dim, exact.rank), (3, 2))
        self.assertAgrees(estimate_crofton(K, 2, 1, 0, 2, samples=500, seed=23, workers=1), exact)

    def test_plane_sections_of_the_cube_scalar(self):
        K = cube()
        self.assertAgrees(
            estimate_crofton(K, 2, 1, 0, 0, samples=400, seed=24, workers=1),
            SymTensor.scalar(3, classical_crofton(K, 2, 1)),
        )

    def test_full_flat_is_deterministic(self):
        K = square()
        estimate = estimate_crofton(K, 2, 2, 0, 0, samples=5, seed=0, workers=1)
        self.assertEqual(estimate.stderr.value, 0.0)
        self.assertTrue(compare(estimate, rhs_crofton(K, 2, 2, 0, 0)).passed)

    def test_invalid_indices(self):
        with self.assertRaises(ValueError):
            estimate_crofton(square(), 1, 2, 0, 0, samples=1, seed=0)


class EstimateExportTests(SimpleTestCase):

    def estimate(self):
        return Estimate(
            SymTensor.from_array(2, 1, [0.5, 0.25]), SymTensor.from_array(2, 1, [0.01, 0.02]), 50, 7, 3.0,
        )

    def test_csv(self):
        rows = list(csv.reader(io.StringIO(self.estimate().to_csv())))
        self.assertEqual(rows[0], ['exponents', 'mean', 'stderr', 'samples', 'seed'])
        self.assertEqual(len(rows), 3)
        self.assertEqual(float(rows[1][1]) + float(rows[2][1]), 0.75)
        self.assertEqual(rows[1][3:], ['50', '7'])

    def test_serializer_round_trip(self):
        data = EstimateSerializer(self.estimate()).data
        self.assertEqual(data['windowVolume'], 3.0)
        serializer = EstimateSerializer(data=data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        restored = serializer.save()
        self.assertTrue(restored.mean.allclose(self.estimate().mean))
        self.assertEqual((restored.samples, restored.seed), (50, 7))

    def test_serializer_rejects_mismatched_shapes(self):
        data = dict(EstimateSerializer(self.estimate()).data)
        data['stderr'] = {'dim': 2, 'rank': 0, 'coefficients': [[[0, 0], 0.1]]}
        self.assertFalse(EstimateSerializer(data=data).is_valid())
