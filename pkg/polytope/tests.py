import json
import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from .clipping import (
    distances, intersect_polytopes, project_point, slice_flat, translation_window,
)
from .loaders import PolytopeFileError, load_polytope, parse_off, polytope_from_data
from .polytopes import EMPTY, Flat, build_polytope, face_measure, normal_cone

UNIT_SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]
UNIT_CUBE = [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def sorted_measures(P):
    return [sorted(face.measure for face in faces) for faces in P.faces]


class BuildPolytopeTests(SimpleTestCase):

    def test_square_lattice(self):
        P = build_polytope(UNIT_SQUARE)
        self.assertEqual(P.face_counts, (4, 4, 1))
        self.assertEqual(P.lattice_dim, 2)
        self.assertAlmostEqual(P.volume, 1.0)

    def test_cube_lattice(self):
        P = build_polytope(UNIT_CUBE)
        self.assertEqual(P.face_counts, (8, 12, 6, 1))
        self.assertAlmostEqual(P.volume, 1.0)

    def test_interior_and_collinear_points_are_dropped(self):
        P = build_polytope(UNIT_SQUARE + [[0.5, 0.5], [0.5, 0.0]])
        self.assertEqual(P.face_counts, (4, 4, 1))
        Q = build_polytope(UNIT_CUBE + [[0.5, 0.5, 0.0], [0.5, 0.0, 0.0], [0.5, 0.5, 0.5]])
        self.assertEqual(Q.face_counts, (8, 12, 6, 1))

    def test_collinear_points_give_segment(self):
        P = build_polytope([[0, 0], [0.5, 0], [1, 0]])
        self.assertEqual(P.lattice_dim, 1)
        self.assertEqual(len(P.vertices), 2)

    def test_planar_polygon_in_space(self):
        P = build_polytope([[0, 0, 0.5], [1, 0, 0.5], [1, 1, 0.5], [0, 1, 0.5]])
        self.assertEqual(P.lattice_dim, 2)
        self.assertEqual(P.face_counts, (4, 4, 1))
        self.assertAlmostEqual(P.top_face.measure, 1.0)

    def test_single_point(self):
        P = build_polytope([[1, 2, 3], [1, 2, 3]])
        self.assertEqual(P.lattice_dim, 0)
        self.assertEqual(P.face_counts, (1,))

    def test_empty_input(self):
        with self.assertRaises(ValueError):
            build_polytope([])
        with self.assertRaises(ValueError):
            build_polytope([[0, 0, 0, 0]])

    def test_euler_relation(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            P = build_polytope(rng.normal(size=(20, 3)))
            self.assertEqual(sum((-1) ** i * f for i, f in enumerate(P.face_counts)), 1)
            Q = build_polytope(rng.normal(size=(12, 2)))
            self.assertEqual(sum((-1) ** i * f for i, f in enumerate(Q.face_counts)), 1)

    def test_every_edge_lies_on_two_facets(self):
        P = build_polytope(np.random.default_rng(1).normal(size=(25, 3)))
        for edge in P.edges:
            self.assertEqual(len(edge.facet_ids), 2)

    def test_rigid_motion_equivariance(self):
        rng = np.random.default_rng(2)
        for n, base in ((2, UNIT_SQUARE), (3, UNIT_CUBE)):
            P = build_polytope(base)
            reference = sorted_measures(P)
            for _ in range(100):
                Q = P.transformed(random_rotation(rng, n), rng.normal(size=n))
                self.assertEqual(Q.face_counts, P.face_counts)
                for got, want in zip(sorted_measures(Q), reference):
                    np.testing.assert_allclose(got, want, atol=1e-9)


class FaceMeasureTests(SimpleTestCase):

    def test_cube_facet(self):
        P = build_polytope(UNIT_CUBE)
        for facet in P.facets:
            self.assertAlmostEqual(face_measure(P, facet), 1.0)

    def test_diagonal_segment(self):
        P = build_polytope([[0, 0], [1, 1]])
        self.assertAlmostEqual(face_measure(P, P.top_face), math.sqrt(2))

    def test_vertex_counts_one(self):
        P = build_polytope(UNIT_SQUARE)
        self.assertEqual(face_measure(P, P.faces[0][0]), 1.0)


class NormalConeTests(SimpleTestCase):

    def test_cube_facet(self):
        P = build_polytope(UNIT_CUBE)
        top = next(f for f in P.facets if np.allclose(f.centroid, [0.5, 0.5, 1.0]))
        cone = normal_cone(P, top)
        self.assertEqual(cone.ell, 0)
        self.assertEqual(cone.q, 1)
        np.testing.assert_allclose(cone.rays[0], [0, 0, 1], atol=1e-12)

    def test_square_vertex(self):
        P = build_polytope(UNIT_SQUARE)
        origin = next(v for v in P.faces[0] if np.allclose(v.points[0], [0, 0]))
        cone = normal_cone(P, origin)
        self.assertEqual(cone.q, 2)
        rays = sorted(map(tuple, np.round(cone.rays, 12)))
        self.assertEqual(rays, [(-1.0, 0.0), (0.0, -1.0)])
        self.assertTrue(cone.is_pointed())

    def test_segment_endpoint(self):
        P = build_polytope([[0, 0], [1, 0]])
        end = next(v for v in P.faces[0] if np.allclose(v.points[0], [0, 0]))
        cone = normal_cone(P, end)
        self.assertEqual(cone.ell, 1)
        np.testing.assert_allclose(np.abs(cone.lineality[0]), [0, 1], atol=1e-12)
        np.testing.assert_allclose(cone.rays[0], [-1, 0], atol=1e-12)

    def test_lineality_orthogonal_to_pointed_part(self):
        P = build_polytope([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
        for faces in P.faces:
            for face in faces:
                cone = normal_cone(P, face)
                if cone.q:
                    np.testing.assert_allclose(cone.lineality @ cone.pointed_frame.T, 0, atol=1e-12)

    def test_vertex_cones_tile_sphere(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            P = build_polytope(rng.normal(size=(9, 2)))
            angles = 0.0
            for vertex in P.faces[0]:
                a, b = normal_cone(P, vertex).rays
                angles += math.acos(np.clip(a @ b, -1, 1))
            self.assertAlmostEqual(angles, 2 * math.pi, delta=1e-9)
        for _ in range(3):
            P = build_polytope(rng.normal(size=(15, 3)))
            solid = 0.0
            for vertex in P.faces[0]:
                rays = normal_cone(P, vertex).rays
                for i in range(1, len(rays) - 1):
                    a, b, c = rays[0], rays[i], rays[i + 1]
                    num = abs(np.linalg.det(np.array([a, b, c])))
                    den = 1 + a @ b + b @ c + c @ a
                    solid += 2 * math.atan2(num, den)
            self.assertAlmostEqual(solid, 4 * math.pi, delta=1e-9)


class IntersectionTests(SimpleTestCase):

    def test_overlapping_squares(self):
        A = build_polytope(UNIT_SQUARE)
        B = A.translated([0.5, 0.5])
        self.assertAlmostEqual(intersect_polytopes(A, B).volume, 0.25)

    def test_disjoint(self):
        A = build_polytope(UNIT_SQUARE)
        self.assertIs(intersect_polytopes(A, A.translated([3, 0])), EMPTY)
        C = build_polytope(UNIT_CUBE)
        self.assertIs(intersect_polytopes(C, C.translated([0, 0, 2])), EMPTY)

    def test_identical(self):
        for base in (UNIT_SQUARE, UNIT_CUBE):
            A = build_polytope(base)
            result = intersect_polytopes(A, A)
            self.assertEqual(sorted(map(tuple, np.round(result.vertices, 9))),
                             sorted(map(tuple, np.round(A.vertices, 9))))

    def test_cubes(self):
        A = build_polytope(UNIT_CUBE)
        result = intersect_polytopes(A, A.translated([0.5, 0.25, -0.5]))
        self.assertAlmostEqual(result.volume, 0.5 * 0.75 * 0.5)
        self.assertEqual(result.face_counts, (8, 12, 6, 1))

    def test_touching_squares_give_segment(self):
        A = build_polytope(UNIT_SQUARE)
        result = intersect_polytopes(A, A.translated([1, 0]))
        self.assertEqual(result.lattice_dim, 1)

    def test_lower_dimensional_operand(self):
        A = build_polytope(UNIT_SQUARE)
        segment = build_polytope([[-1, 0.5], [2, 0.5]])
        result = intersect_polytopes(A, segment)
        self.assertEqual(result.lattice_dim, 1)
        self.assertAlmostEqual(result.top_face.measure, 1.0)

    def test_rotated_square(self):
        A = build_polytope(UNIT_SQUARE)
        c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)
        B = A.transformed([[c, -s], [s, c]], [0.5, 0.5 - math.sqrt(2) / 2])
        result = intersect_polytopes(A, B)
        self.assertTrue(result.is_full_dimensional)
        self.assertTrue(np.all(A.contains_many(result.vertices, 1e-9)))
        self.assertTrue(np.all(B.contains_many(result.vertices, 1e-9)))


class SliceFlatTests(SimpleTestCase):

    def test_square_vertical_line(self):
        P = build_polytope(UNIT_SQUARE)
        result = slice_flat(P, Flat([[0, 1]], [0.5, 0]))
        self.assertEqual(sorted(map(tuple, result.vertices)), [(0.5, 0.0), (0.5, 1.0)])

    def test_cube_mid_plane(self):
        P = build_polytope(UNIT_CUBE)
        result = slice_flat(P, Flat([[1, 0, 0], [0, 1, 0]], [0, 0, 0.5]))
        self.assertEqual(result.lattice_dim, 2)
        self.assertEqual(result.face_counts, (4, 4, 1))
        self.assertAlmostEqual(result.top_face.measure, 1.0)

    def test_missing_flat(self):
        P = build_polytope(UNIT_SQUARE)
        self.assertIs(slice_flat(P, Flat([[0, 1]], [2, 0])), EMPTY)

    def test_flat_dimension(self):
        with self.assertRaises(ValueError):
            slice_flat(build_polytope(UNIT_SQUARE), Flat(np.eye(2), [0, 0]))

    def test_random_slices_lie_in_both(self):
        rng = np.random.default_rng(8)
        P = build_polytope(rng.normal(size=(14, 3)))
        for k in (1, 2):
            for _ in range(20):
                basis = np.linalg.qr(rng.normal(size=(3, k)))[0].T
                flat = Flat(basis, rng.normal(size=3) * 0.3)
                result = slice_flat(P, flat)
                if result.is_empty:
                    continue
                self.assertTrue(np.all(P.contains_many(result.vertices, 1e-10)))
                offsets = (result.vertices - flat.anchor) @ flat.normals.T
                np.testing.assert_allclose(offsets, 0, atol=1e-10)


class ProjectionTests(SimpleTestCase):

    def test_outside_edge(self):
        p, dist = project_point(build_polytope(UNIT_SQUARE), [2, 0.5])
        np.testing.assert_allclose(p, [1, 0.5])
        self.assertAlmostEqual(dist, 1.0)

    def test_inside(self):
        _, dist = project_point(build_polytope(UNIT_SQUARE), [0.3, 0.6])
        self.assertEqual(dist, 0.0)

    def test_outside_corner(self):
        p, dist = project_point(build_polytope(UNIT_SQUARE), [2, 2])
        np.testing.assert_allclose(p, [1, 1])
        self.assertAlmostEqual(dist, math.sqrt(2))

    def test_variational_characterization(self):
        rng = np.random.default_rng(6)
        P = build_polytope(rng.normal(size=(12, 3)))
        for x in rng.normal(size=(50, 3)) * 3:
            p, dist = project_point(P, x)
            self.assertTrue(np.all((P.vertices - p) @ (x - p) <= 1e-7))
            self.assertAlmostEqual(dist, np.linalg.norm(x - p))

    def test_batch_matches_single(self):
        P = build_polytope(UNIT_CUBE)
        X = np.random.default_rng(9).uniform(-1, 2, size=(40, 3))
        expected = [project_point(P, x)[1] for x in X]
        np.testing.assert_allclose(distances(P, X), expected, atol=1e-12)


class TranslationWindowTests(SimpleTestCase):

    def test_squares(self):
        box = translation_window(build_polytope(UNIT_SQUARE), build_polytope(UNIT_SQUARE))
        np.testing.assert_allclose(box.lower, [-1, -1])
        self.assertEqual(box.volume, 4.0)

    def test_points(self):
        box = translation_window(build_polytope([[1, 2]]), build_polytope([[0, 0]]))
        self.assertEqual(box.volume, 0.0)
        np.testing.assert_allclose(box.lower, [1, 2])

    def test_cubes(self):
        self.assertEqual(translation_window(build_polytope(UNIT_CUBE), build_polytope(UNIT_CUBE)).volume, 8.0)


class LoaderTests(SimpleTestCase):

    def test_json_document(self):
        P = polytope_from_data({'dim': 2, 'vertices': UNIT_SQUARE})
        self.assertEqual(P.face_counts, (4, 4, 1))

    def test_invalid_document(self):
        with self.assertRaises(PolytopeFileError):
            polytope_from_data({'dim': 2, 'vertices': [[0, 0, 0]]})
        with self.assertRaises(PolytopeFileError):
            polytope_from_data({'dim': 4, 'vertices': [[0, 0]]})

    def test_off_file(self):
        text = "OFF\n# cube\n8 6 12\n" + "\n".join(" ".join(map(str, v)) for v in UNIT_CUBE) + "\n4 0 1 2 3\n"
        self.assertEqual(len(parse_off(text)), 8)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'cube.off'
            path.write_text(text)
            self.assertEqual(load_polytope(path).face_counts, (8, 12, 6, 1))
            json_path = Path(tmp) / 'square.json'
            json_path.write_text(json.dumps({'dim': 2, 'vertices': UNIT_SQUARE}))
            self.assertAlmostEqual(load_polytope(json_path).volume, 1.0)

    def test_bad_off(self):
        with self.assertRaises(PolytopeFileError):
            parse_off("PLY\n")
