import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from polytope.polytopes import EMPTY, build_polytope
from symtensor.tensors import SymTensor, combine, sym_product, tensor_power

from .checks import check_gen_tcm_expansion, check_mcmullen, check_structure
from .cones import arc_moment, sphere_moment, spherical_polygon_moments, theta
from .formulas import (
    classical_crofton, principal_kinematic, rhs_crofton, rhs_crofton_tcm, rhs_kinematic,
    rhs_kinematic_tcm,
)
from .moments import upsilon, volume_moment
from .tensors import (
    expand_gen_tcm, gen_tcm_total, intrinsic_volumes, mcmullen_residual, mcmullen_sides,
    minkowski_tensor, phi, steiner_polynomial, tcm_total,
)

UNIT_SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]
UNIT_CUBE = [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]


def square():
    return build_polytope(UNIT_SQUARE)


def cube():
    return build_polytope(UNIT_CUBE)


def random_polygons(count, seed):
    rng = np.random.default_rng(seed)
    return [build_polytope(rng.normal(size=(rng.integers(3, 9), 2))) for _ in range(count)]


def random_polyhedra(count, seed):
    rng = np.random.default_rng(seed)
    return [build_polytope(rng.normal(size=(rng.integers(5, 10), 3))) for _ in range(count)]


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def vertex_at(P, point):
    return next(v for v in P.faces[0] if np.allclose(v.points[0], point))


class TensorAssertions:

    def assertTensorClose(self, got, expected, atol=1e-10):
        self.assertEqual(got.rank, expected.rank)
        self.assertTrue(got.allclose(expected, atol=atol, rtol=atol), f"{got} != {expected}")


class UpsilonTests(TensorAssertions, SimpleTestCase):

    def test_segment_first_moment(self):
        P = build_polytope([[0, 0], [1, 0]])
        value = upsilon(P.top_face, 1)
        self.assertAlmostEqual(value.component(0), 0.5)
        self.assertAlmostEqual(value.component(1), 0.0)

    def test_zeroth_moment_is_measure(self):
        for face in cube().faces[2]:
            self.assertAlmostEqual(upsilon(face, 0).value, 1.0)

    def test_square_second_moment(self):
        value = upsilon(square().top_face, 2)
        self.assertAlmostEqual(value.component(0, 0), 1 / 6)
        self.assertAlmostEqual(value.component(0, 1), 1 / 8)
        self.assertAlmostEqual(value.component(1, 1), 1 / 6)

    def test_negative_rank(self):
        self.assertTrue(upsilon(square().top_face, -1).is_zero)

    def test_rank_cap(self):
        with self.settings(TENSORVAL_MAX_POSITION_RANK=2):
            with self.assertRaises(ValueError):
                upsilon(square().top_face, 3)

    def test_volume_moments(self):
        self.assertAlmostEqual(volume_moment(square(), 0).value, 1.0)
        self.assertTensorClose(volume_moment(square(), 1), tensor_power([0.5, 0.5], 1))
        triangle = build_polytope([[0, 0], [1, 0], [0, 1]])
        self.assertTensorClose(volume_moment(triangle, 1), tensor_power([1 / 6, 1 / 6], 1))
        segment = build_polytope([[0, 0], [1, 1]])
        self.assertTrue(volume_moment(segment, 2).is_zero)

    def test_cube_moments(self):
        self.assertTensorClose(volume_moment(cube(), 1), tensor_power([0.5, 0.5, 0.5], 1))
        second = volume_moment(cube(), 2)
        self.assertAlmostEqual(second.component(0, 0), 1 / 6)
        self.assertAlmostEqual(second.component(0, 2), 1 / 8)


class ThetaTests(TensorAssertions, SimpleTestCase):

    def test_square_vertex(self):
        P = square()
        vertex = vertex_at(P, [0, 0])
        self.assertAlmostEqual(theta(P, vertex, 0).value, 0.25)
        self.assertTensorClose(theta(P, vertex, 1), tensor_power([-1, -1], 1).scale(1 / (4 * math.pi)))

    def test_cube_facet(self):
        P = cube()
        top = next(f for f in P.facets if np.allclose(f.centroid, [0.5, 0.5, 1.0]))
        self.assertTensorClose(theta(P, top, 2), tensor_power([0, 0, 1], 2).scale(1 / (8 * math.pi)))

    def test_conventions(self):
        P = square()
        self.assertTrue(theta(P, P.faces[0][0], -1).is_zero)
        self.assertEqual(theta(P, P.top_face, 0).value, 1.0)
        self.assertTrue(theta(P, P.top_face, 2).is_zero)

    def test_segment_endpoint_is_half_circle(self):
        P = build_polytope([[0, 0], [1, 0]])
        self.assertAlmostEqual(theta(P, P.faces[0][0], 0).value, 0.5)

    def test_point_in_space(self):
        P = build_polytope([[0.2, 0.3, 0.4]])
        self.assertAlmostEqual(theta(P, P.top_face, 0).value, 1.0)
        # full sphere: integral of u^2 is omega_3 / 3 * Q
        expected = SymTensor.metric(3).scale(4 * math.pi / 3 / (2 * 8 * math.pi ** 2 / 3))
        self.assertTensorClose(theta(P, P.top_face, 2), expected)

    def test_sphere_moment(self):
        circle = sphere_moment(np.eye(2), 2)
        self.assertTensorClose(circle, SymTensor.metric(2).scale(math.pi))
        self.assertTrue(sphere_moment(np.eye(3), 3).is_zero)

    def test_arc_moment_quarter_circle(self):
        value = arc_moment(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 1)
        self.assertTensorClose(value, tensor_power([1, 1], 1))
        value = arc_moment(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 2)
        self.assertAlmostEqual(value.component(0, 0), math.pi / 4)
        self.assertAlmostEqual(value.component(0, 1), 0.5)

    def test_spherical_octant(self):
        rays = np.eye(3)
        moments = spherical_polygon_moments(rays, range(3))
        self.assertAlmostEqual(moments[0].value, math.pi / 2, delta=1e-12)
        self.assertTensorClose(moments[1], tensor_power([1, 1, 1], 1).scale(math.pi / 4), atol=1e-9)
        self.assertAlmostEqual(moments[2].component(0, 0), math.pi / 6, delta=1e-10)
        self.assertAlmostEqual(moments[2].component(0, 1), 1 / 3, delta=1e-10)

    def test_vertex_cones_tile_the_sphere(self):
        for P in random_polygons(5, 11) + random_polyhedra(3, 12):
            total = sum(theta(P, vertex, 0).value for vertex in P.faces[0])
            self.assertAlmostEqual(total, 1.0, delta=1e-10)


class MinkowskiTensorTests(TensorAssertions, SimpleTestCase):

    def test_intrinsic_volumes(self):
        np.testing.assert_allclose(intrinsic_volumes(square()), [1, 2, 1], atol=1e-12)
        np.testing.assert_allclose(intrinsic_volumes(cube()), [1, 3, 3, 1], atol=1e-12)
        np.testing.assert_allclose(intrinsic_volumes(build_polytope([[0, 0], [3, 4]])), [1, 5, 0], atol=1e-12)
        planar = build_polytope([[0, 0, 0], [2, 0, 0], [2, 1, 0], [0, 1, 0]])
        np.testing.assert_allclose(intrinsic_volumes(planar), [1, 3, 2, 0], atol=1e-12)

    def test_empty_gives_zero(self):
        value = minkowski_tensor(EMPTY, 0, 1, 2, dim=3)
        self.assertEqual(value.value.rank, 3)
        self.assertTrue(value.value.is_zero)
        self.assertEqual(intrinsic_volumes(EMPTY, dim=2), [0.0, 0.0, 0.0])
        with self.assertRaises(ValueError):
            minkowski_tensor(EMPTY, 0, 0, 0)

    def test_out_of_range(self):
        P = square()
        self.assertTrue(phi(P, 3, 0, 0).is_zero)
        self.assertTrue(phi(P, 2, 0, 1).is_zero)
        self.assertEqual(phi(P, 1, -1, 2).rank, 1)
        self.assertEqual(phi(P, 0, -1, -2).rank, 0)

    def test_first_normal_moment_vanishes(self):
        for P in [square(), cube()] + random_polygons(5, 1) + random_polyhedra(3, 2):
            for k in range(P.dim_ambient):
                tol = 1e-10 if (k == 0 and P.dim_ambient == 3) else 1e-12
                self.assertLessEqual(phi(P, k, 0, 1).norm_inf(), tol)

    def test_vertex_normal_moment(self):
        for P in [square(), cube()] + random_polygons(5, 3) + random_polyhedra(3, 4):
            expected = SymTensor.metric(P.dim_ambient).scale(1 / (4 * math.pi))
            self.assertTensorClose(phi(P, 0, 0, 2), expected)

    def test_exactness_flag(self):
        self.assertTrue(minkowski_tensor(cube(), 0, 0, 0).exact)
        self.assertFalse(minkowski_tensor(cube(), 0, 0, 2).exact)
        self.assertTrue(minkowski_tensor(cube(), 1, 1, 2).exact)
        self.assertEqual(minkowski_tensor(square(), 1, 0, 2).to_dict()['rank'], 2)

    def test_rigid_motion_invariance(self):
        rng = np.random.default_rng(5)
        for P in (square(), cube(), random_polyhedra(1, 6)[0]):
            reference = intrinsic_volumes(P)
            for _ in range(5):
                n = P.dim_ambient
                moved = P.transformed(random_rotation(rng, n), rng.normal(size=n))
                np.testing.assert_allclose(intrinsic_volumes(moved), reference, atol=1e-9)

    def test_translation_invariance(self):
        rng = np.random.default_rng(7)
        for P in (square(), random_polygons(1, 8)[0], cube()):
            moved = P.translated(rng.normal(size=P.dim_ambient))
            for j in range(P.dim_ambient):
                for s in range(3):
                    self.assertTensorClose(phi(moved, j, 0, s), phi(P, j, 0, s))

    def test_translation_covariance_of_position_moment(self):
        P = square()
        moved = P.translated([2.0, -1.0])
        expected = phi(P, 1, 1, 0) + tensor_power([2.0, -1.0], 1).scale(phi(P, 1, 0, 0).value)
        self.assertTensorClose(phi(moved, 1, 1, 0), expected)


class GeneralizedMeasureTests(TensorAssertions, SimpleTestCase):

    def test_square_and_cube(self):
        metric2 = SymTensor.metric(2).scale(2 * math.pi)
        self.assertTensorClose(gen_tcm_total(square(), 1, 0, 0).value, metric2)
        metric3 = SymTensor.metric(3).scale(2 * math.pi)
        self.assertTensorClose(gen_tcm_total(cube(), 2, 0, 0).value, metric3)

    def test_negative_normal_rank(self):
        value = gen_tcm_total(square(), 1, 0, -1)
        self.assertTrue(value.value.is_zero)
        self.assertEqual(value.value.rank, 1)

    def test_range(self):
        with self.assertRaises(ValueError):
            gen_tcm_total(square(), 0, 0, 0)
        with self.assertRaises(ValueError):
            gen_tcm_total(square(), 2, 0, 0)

    def test_tcm_total_dispatch(self):
        P = cube()
        self.assertTensorClose(tcm_total(P, 1, 1, 1).value, phi(P, 1, 1, 1))
        self.assertEqual(tcm_total(P, 1, 0, 0, i=1).i, 1)
        with self.assertRaises(ValueError):
            tcm_total(P, 1, 0, 0, i=2)


class McMullenTests(TensorAssertions, SimpleTestCase):

    def check_residuals(self, P, max_order):
        n = P.dim_ambient
        for k in range(n + 1):
            for r in range(min(max_order, 4) + 1):
                for s in range(max_order + 1 - r):
                    lhs, rhs = mcmullen_sides(P, k, r, s)
                    tol = 1e-9 * (1 + lhs.norm_inf())
                    self.assertLessEqual((lhs - rhs).norm_inf(), tol, f"k={k} r={r} s={s} on {P}")

    def test_square(self):
        self.assertLessEqual(mcmullen_residual(square(), 1, 1, 1).norm_inf(), 1e-10)
        self.check_residuals(square(), 5)

    def test_cube(self):
        self.assertLessEqual(mcmullen_residual(cube(), 1, 0, 2).norm_inf(), 1e-10)
        self.check_residuals(cube(), 3)

    def test_random_polygons(self):
        for P in random_polygons(4, 21):
            self.check_residuals(P, 4)

    def test_random_polyhedra(self):
        for P in random_polyhedra(2, 22):
            self.check_residuals(P, 3)

    def test_lower_dimensional(self):
        self.check_residuals(build_polytope([[0, 0], [1, 2]]), 3)
        self.check_residuals(build_polytope([[0, 0, 0], [1, 0, 0], [0, 1, 1]]), 3)

    def test_range(self):
        with self.assertRaises(ValueError):
            mcmullen_residual(square(), 3, 0, 0)


class ExpansionTests(TensorAssertions, SimpleTestCase):

    def check_expansion(self, P, max_order):
        n = P.dim_ambient
        for k in range(1, n):
            for r in range(max_order + 1):
                for s in range(max_order + 1 - r):
                    got = expand_gen_tcm(P, k, r, s)
                    expected = gen_tcm_total(P, k, r, s - 2).value.scale(k / (2 * math.pi))
                    self.assertTensorClose(got, expected, atol=1e-9 * (1 + expected.norm_inf()))

    def test_square_example(self):
        self.assertTensorClose(expand_gen_tcm(square(), 1, 0, 2), SymTensor.metric(2))

    def test_corpus(self):
        for P in [square(), cube()] + random_polygons(3, 31) + random_polyhedra(2, 32):
            self.check_expansion(P, 4)

    def test_range(self):
        with self.assertRaises(ValueError):
            expand_gen_tcm(square(), 0, 0, 2)


class SteinerTests(SimpleTestCase):

    def test_square(self):
        self.assertAlmostEqual(steiner_polynomial(square(), 1.0), 5 + math.pi)
        self.assertAlmostEqual(steiner_polynomial(square(), 0.0), 1.0)

    def test_cube(self):
        self.assertAlmostEqual(steiner_polynomial(cube(), 1.0), 1 + 6 + 3 * math.pi + 4 * math.pi / 3)
        self.assertAlmostEqual(steiner_polynomial(cube(), 0.5), 1 + 3 + 0.75 * math.pi + math.pi / 6)

    def test_negative_radius(self):
        with self.assertRaises(ValueError):
            steiner_polynomial(square(), -0.1)


class KinematicFormulaTests(TensorAssertions, SimpleTestCase):

    def test_principal_kinematic_squares(self):
        value = rhs_kinematic(square(), square(), 0, 0, 0)
        self.assertAlmostEqual(value.value, 2 + 8 / math.pi)
        self.assertAlmostEqual(principal_kinematic(square(), square(), 0), 2 + 8 / math.pi)

    def test_top_index(self):
        self.assertAlmostEqual(rhs_kinematic(square(), square(), 2, 0, 0).value, 1.0)

    def test_odd_normal_rank_vanishes(self):
        for s in (1, 3):
            self.assertLessEqual(rhs_kinematic(square(), rectangle(), 0, 0, s).norm_inf(), 1e-12)

    def test_scalar_case_matches_principal_formula(self):
        pairs = [(square(), random_polygons(1, 41)[0]), (cube(), random_polyhedra(1, 42)[0])]
        for K, K2 in pairs:
            for j in range(K.dim_ambient + 1):
                self.assertAlmostEqual(rhs_kinematic(K, K2, j, 0, 0).value, principal_kinematic(K, K2, j))

    def test_curvature_measure_form_agrees(self):
        pairs = [(square(), random_polygons(1, 43)[0]), (random_polygons(1, 44)[0], square())]
        for K, K2 in pairs:
            for j in range(3):
                for r in range(3):
                    for s in range(4 if j < 2 else 1):
                        self.assertTensorClose(
                            rhs_kinematic_tcm(K, K2, j, r, s), rhs_kinematic(K, K2, j, r, s), atol=1e-9,
                        )

    def test_curvature_measure_form_agrees_in_space(self):
        K, K2 = cube(), random_polyhedra(1, 45)[0]
        for j in (1, 2):
            for r in range(2):
                for s in range(3):
                    self.assertTensorClose(
                        rhs_kinematic_tcm(K, K2, j, r, s), rhs_kinematic(K, K2, j, r, s), atol=1e-9,
                    )

    def test_index_errors(self):
        with self.assertRaises(ValueError):
            rhs_kinematic(square(), square(), 2, 0, 1)
        with self.assertRaises(ValueError):
            rhs_kinematic(square(), cube(), 0, 0, 0)
        with self.assertRaises(ValueError):
            rhs_kinematic(square(), square(), 0, -1, 0)


def rectangle():
    return build_polytope([[0, 0], [2, 0], [2, 1], [0, 1]])


class CroftonFormulaTests(TensorAssertions, SimpleTestCase):

    def test_square_lines(self):
        self.assertAlmostEqual(rhs_crofton(square(), 1, 0, 0, 0).value, 4 / math.pi)
        self.assertAlmostEqual(classical_crofton(square(), 1, 0), 4 / math.pi)

    def test_cube_planes(self):
        self.assertAlmostEqual(rhs_crofton(cube(), 2, 1, 0, 0).value, 3 * math.pi / 4)

    def test_equal_indices(self):
        expected = SymTensor.metric(2).scale(1 / (8 * math.pi))
        self.assertTensorClose(rhs_crofton(square(), 1, 1, 0, 2), expected)
        self.assertTrue(rhs_crofton(square(), 1, 1, 0, 1).is_zero)
        self.assertEqual(rhs_crofton(square(), 1, 1, 0, 1).rank, 1)

    def test_whole_space(self):
        P = random_polygons(1, 51)[0]
        self.assertTensorClose(rhs_crofton(P, 2, 0, 1, 2), phi(P, 0, 1, 2))

    def test_scalar_case_matches_classical_formula(self):
        for P in (square(), cube(), random_polyhedra(1, 52)[0]):
            n = P.dim_ambient
            for k in range(n + 1):
                for j in range(k + 1):
                    self.assertAlmostEqual(rhs_crofton(P, k, j, 0, 0).value, classical_crofton(P, k, j))

    def test_curvature_measure_form_agrees(self):
        for P in (square(), random_polygons(1, 53)[0], cube()):
            n = P.dim_ambient
            for k in range(1, n + 1):
                for j in range(k + 1):
                    for r in range(2):
                        for s in range(3):
                            self.assertTensorClose(
                                rhs_crofton_tcm(P, k, j, r, s), rhs_crofton(P, k, j, r, s), atol=1e-9,
                            )

    def test_index_errors(self):
        with self.assertRaises(ValueError):
            rhs_crofton(square(), 1, 2, 0, 0)
        with self.assertRaises(ValueError):
            classical_crofton(square(), 3, 0)


class ProductStructureTests(TensorAssertions, SimpleTestCase):

    def test_face_sum_matches_direct_assembly(self):
        P = square()
        direct = combine([
            (1.0, sym_product(upsilon(face, 1), theta(P, face, 1))) for face in P.faces[1]
        ])
        self.assertTensorClose(phi(P, 1, 1, 1), direct)


class IdentitySuiteTests(SimpleTestCase):

    def assertSuitePasses(self, summary):
        self.assertGreater(summary['checked'], 0, summary['name'])
        self.assertEqual(summary['failed'], 0, summary['errors'])

    def test_suites_on_unit_bodies(self):
        for P in (square(), cube()):
            self.assertSuitePasses(check_mcmullen(P, max_order=3))
            self.assertSuitePasses(check_gen_tcm_expansion(P, max_order=3))
            self.assertSuitePasses(check_structure(P))

    def test_suites_on_random_polygons(self):
        for P in random_polygons(3, 7):
            self.assertSuitePasses(check_mcmullen(P, max_order=4))
            self.assertSuitePasses(check_gen_tcm_expansion(P, max_order=4))
            self.assertSuitePasses(check_structure(P))

    def test_broken_mcmullen_side_is_reported(self):
        def skewed(P, k, r, s):
            lhs, rhs = mcmullen_sides(P, k, r, s)
            return lhs, rhs.scale(1.01)

        with mock.patch('valuations.checks.mcmullen_sides', skewed):
            summary = check_mcmullen(square(), max_order=2)
        self.assertGreater(summary['failed'], 0)
        self.assertGreater(summary['max_residual'], 1e-6)
