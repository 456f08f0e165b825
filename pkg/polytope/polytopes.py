"""
Convex polytopes in R^2 and R^3 with their full face lattice.

A Polytope is built from a point list by :func:`build_polytope`. Lower-dimensional hulls
(points, segments, polygons in R^3) are hulled inside their affine hull and re-embedded,
so one lattice builder serves every intrinsic dimension. Facet normals are taken inside
aff(P); the orthogonal complement of aff(P) is the lineality space of every normal cone.
"""
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from django.conf import settings
from scipy.linalg import null_space
from scipy.spatial import ConvexHull, QhullError

logger = logging.getLogger(__name__)


def geometry_tol():
    return getattr(settings, 'TENSORVAL_GEOMETRY_TOL', 1e-9)


def _orthonormal_rows(vectors, rank):
    """Orthonormal basis (rank x n) of the span of the given row vectors."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if rank == 0:
        return np.zeros((0, vectors.shape[1]))
    _, _, vt = np.linalg.svd(vectors, full_matrices=False)
    return vt[:rank]


def complement_basis(basis, dim):
    """Orthonormal basis (rows) of the orthogonal complement of span(basis) in R^dim."""
    basis = np.asarray(basis, dtype=float).reshape(-1, dim)
    if basis.shape[0] == 0:
        return np.eye(dim)
    return null_space(basis).T


def simplex_volume(simplex):
    """k-dimensional volume of the simplex with the k+1 rows of ``simplex`` as vertices."""
    simplex = np.asarray(simplex, dtype=float)
    k = simplex.shape[0] - 1
    if k == 0:
        return 1.0
    edges = simplex[1:] - simplex[0]
    gram = edges @ edges.T
    return math.sqrt(max(np.linalg.det(gram), 0.0)) / math.factorial(k)


class Empty:
    """The empty intersection. Valuations of Empty are zero tensors."""
    is_empty = True
    lattice_dim = -1

    def __repr__(self):
        return 'Empty'

    def __bool__(self):
        return False


EMPTY = Empty()


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [lower, upper]."""
    lower: np.ndarray
    upper: np.ndarray

    @property
    def dim(self):
        return len(self.lower)

    @property
    def edges(self):
        return np.maximum(self.upper - self.lower, 0.0)

    @property
    def volume(self):
        return float(np.prod(self.edges))

    @property
    def center(self):
        return (self.lower + self.upper) / 2

    def sample(self, rng, size):
        return self.lower + self.edges * rng.random((size, self.dim))

    def overlaps(self, other, tol=0.0):
        return bool(np.all(self.lower <= other.upper + tol) and np.all(other.lower <= self.upper + tol))


@dataclass(frozen=True)
class Flat:
    """Affine k-flat E = anchor + span(basis) with an orthonormal direction basis."""
    basis: np.ndarray
    anchor: np.ndarray
    normals: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        anchor = np.asarray(self.anchor, dtype=float)
        basis = np.asarray(self.basis, dtype=float).reshape(-1, anchor.shape[0])
        if basis.shape[0]:
            gram = basis @ basis.T
            if np.max(np.abs(gram - np.eye(basis.shape[0]))) > 1e-12:
                raise ValueError("Flat direction basis is not orthonormal within 1e-12.")
        object.__setattr__(self, 'anchor', anchor)
        object.__setattr__(self, 'basis', basis)
        object.__setattr__(self, 'normals', complement_basis(basis, anchor.shape[0]))

    @property
    def k(self):
        return self.basis.shape[0]

    @property
    def dim_ambient(self):
        return self.anchor.shape[0]


@dataclass(frozen=True, eq=False)
class Face:
    """
    A j-face of a polytope.

    ``vertex_ids`` index into the polytope's vertices; 2-faces list them in cyclic order.
    ``facet_ids`` index the facets (faces of dimension lattice_dim - 1) containing the face.
    """
    dim: int
    index: int
    vertex_ids: tuple
    facet_ids: tuple
    points: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)
    simplices: tuple = field(repr=False)
    measure: float = 0.0

    @property
    def dim_ambient(self):
        return self.points.shape[1]

    @property
    def centroid(self):
        return self.points.mean(axis=0)

    @property
    def normal_space(self):
        """Orthonormal basis of the orthogonal complement of the face's direction space."""
        return complement_basis(self.basis, self.dim_ambient)


@dataclass(frozen=True)
class Cone:
    """
    Normal cone N(P, F) = lineality (+) pointed part.

    ``lineality`` is an orthonormal basis of (aff P)^perp, ``rays`` are the unit extreme rays of
    the pointed part (cyclically ordered when there are three or more) and ``pointed_frame`` is an
    orthonormal basis of their span.
    """
    lineality: np.ndarray
    rays: np.ndarray
    pointed_frame: np.ndarray

    @property
    def ell(self):
        return self.lineality.shape[0]

    @property
    def q(self):
        return self.pointed_frame.shape[0]

    @property
    def dim_ambient(self):
        return self.lineality.shape[1]

    def is_pointed(self):
        if len(self.rays) == 0:
            return True
        direction = self.rays.sum(axis=0)
        norm = np.linalg.norm(direction)
        return norm > 0 and bool(np.all(self.rays @ direction / norm > 0))


class Polytope:
    """
    Convex polytope with its face lattice.

    Attributes:
        vertices: (m, n) array of extreme points.
        lattice_dim: intrinsic dimension d.
        faces: ``faces[j]`` is the list of j-faces, j = 0..d; ``faces[d]`` holds P itself.
        facet_normals: outward unit normals inside aff(P) of the facets ``faces[d-1]``.
        origin, frame: a point of aff(P) and an orthonormal basis (d x n) of its direction space.
    """
    is_empty = False

    def __init__(self, vertices, faces, facet_normals, origin, frame):
        self.vertices = vertices
        self.faces = faces
        self.facet_normals = facet_normals
        self.origin = origin
        self.frame = frame
        self.lineality = complement_basis(frame, vertices.shape[1])
        self._cones = {}
        self._cache = {}

    def __repr__(self):
        return f"Polytope(n={self.dim_ambient}, d={self.lattice_dim}, f={self.face_counts})"

    @property
    def dim_ambient(self):
        return self.vertices.shape[1]

    @property
    def lattice_dim(self):
        return self.frame.shape[0]

    @property
    def is_full_dimensional(self):
        return self.lattice_dim == self.dim_ambient

    @property
    def face_counts(self):
        return tuple(len(faces) for faces in self.faces)

    @property
    def top_face(self):
        return self.faces[self.lattice_dim][0]

    @property
    def facets(self):
        return self.faces[self.lattice_dim - 1] if self.lattice_dim > 0 else []

    @property
    def edges(self):
        return self.faces[1] if self.lattice_dim >= 1 else []

    @property
    def centroid(self):
        return self.vertices.mean(axis=0)

    @property
    def volume(self):
        return self.top_face.measure if self.is_full_dimensional else 0.0

    def halfspaces(self):
        """
        H-representation (A, b, C, c): P = {x : A x <= b, C x = c}.

        Facet inequalities live inside aff(P); the equalities pin down aff(P).
        """
        if self.lattice_dim > 0:
            offsets = np.array([
                normal @ facet.points[0] for normal, facet in zip(self.facet_normals, self.facets)
            ])
            a = np.asarray(self.facet_normals)
        else:
            a = np.zeros((0, self.dim_ambient))
            offsets = np.zeros(0)
        c = self.lineality @ self.origin
        return a, offsets, self.lineality, c

    def contains_many(self, points, tol=None):
        tol = geometry_tol() if tol is None else tol
        points = np.atleast_2d(points)
        a, b, c_mat, c = self.halfspaces()
        inside = np.ones(len(points), dtype=bool)
        if len(a):
            inside &= np.all(points @ a.T <= b + tol, axis=1)
        if len(c_mat):
            inside &= np.all(np.abs(points @ c_mat.T - c) <= tol, axis=1)
        return inside

    def contains(self, point, tol=None):
        return bool(self.contains_many(np.asarray(point, dtype=float)[None], tol)[0])

    def bounding_box(self):
        return Box(self.vertices.min(axis=0), self.vertices.max(axis=0))

    def transformed(self, rotation, translation=None):
        """gP for the rigid motion x -> R x + t."""
        points = self.vertices @ np.asarray(rotation, dtype=float).T
        if translation is not None:
            points = points + np.asarray(translation, dtype=float)
        return build_polytope(points)

    def translated(self, translation):
        """P + t; the face lattice is shifted, not rebuilt."""
        t = np.asarray(translation, dtype=float)
        faces = [
            [replace(face, points=face.points + t, simplices=tuple(s + t for s in face.simplices)) for face in level]
            for level in self.faces
        ]
        return Polytope(self.vertices + t, faces, self.facet_normals, self.origin + t, self.frame)

    def to_dict(self):
        return {'dim': self.dim_ambient, 'vertices': self.vertices.tolist()}

    def cached(self, key, compute):
        """Per-polytope memo for derived quantities (face moments, cone integrals)."""
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]


# Hull construction

def _dedupe(points, tol):
    kept = []
    for p in points:
        if not kept or np.min(np.max(np.abs(np.asarray(kept) - p), axis=1)) > tol:
            kept.append(p)
    return np.asarray(kept)


def _affine_frame(points, tol):
    origin = points.mean(axis=0)
    if len(points) == 1:
        return origin, np.zeros((0, points.shape[1]))
    _, sing, vt = np.linalg.svd(points - origin, full_matrices=False)
    scale = max(1.0, sing[0])
    rank = int(np.sum(sing > tol * scale))
    return origin, vt[:rank]


def _polygon_order(coords, tol):
    """Indices of the extreme points of a planar point set, counter-clockwise, collinear points dropped."""
    order = list(ConvexHull(coords).vertices)
    changed = True
    while changed and len(order) > 3:
        changed = False
        for pos in range(len(order)):
            a, b, c = coords[order[pos - 1]], coords[order[pos]], coords[order[(pos + 1) % len(order)]]
            u, v = b - a, c - b
            cross = u[0] * v[1] - u[1] * v[0]
            if abs(cross) <= tol * np.linalg.norm(u) * np.linalg.norm(v):
                del order[pos]
                changed = True
                break
    return order


def _cyclic_order(normals):
    """Order unit vectors of a pointed 3D cone cyclically around their mean direction."""
    axis = normals.sum(axis=0)
    axis /= np.linalg.norm(axis)
    plane = complement_basis(axis[None], 3)
    angles = np.arctan2(normals @ plane[1], normals @ plane[0])
    return normals[np.argsort(angles)]


def _hull_polygon(points, coords, tol):
    order = _polygon_order(coords, tol)
    if len(order) < 3:
        return None
    vertices = points[order]
    facets, normals = [], []
    m = len(order)
    for i in range(m):
        t = coords[order[(i + 1) % m]] - coords[order[i]]
        facets.append((i, (i + 1) % m))
        normals.append(np.array([t[1], -t[0]]) / np.linalg.norm(t))
    return vertices, facets, normals


def _hull_polyhedron(points, coords, tol):
    hull = ConvexHull(coords)
    scale = max(1.0, float(np.max(np.abs(coords))))
    groups = []
    for simplex, equation in zip(hull.simplices, hull.equations):
        normal, offset = equation[:3], equation[3]
        for group in groups:
            if np.max(np.abs(group['normal'] - normal)) <= tol and abs(group['offset'] - offset) <= tol * scale:
                group['ids'].update(int(i) for i in simplex)
                break
        else:
            groups.append({'normal': normal, 'offset': offset, 'ids': {int(i) for i in simplex}})

    # Order each facet's vertices in its own plane; points that are not extreme in every
    # facet containing them lie on an edge and are not vertices of P.
    removed = set()
    for group in groups:
        ids = sorted(group['ids'])
        plane = complement_basis(group['normal'][None], 3)
        local = (coords[ids] - coords[ids].mean(axis=0)) @ plane.T
        order = [ids[i] for i in _polygon_order(local, tol)]
        removed.update(set(ids) - set(order))
        group['order'] = order
    facet_orders, normals = [], []
    for group in groups:
        order = [i for i in group['order'] if i not in removed]
        if len(order) < 3:
            logger.warning(f"Dropping a degenerate facet with {len(order)} vertices.")
            continue
        facet_orders.append(order)
        normals.append(group['normal'] / np.linalg.norm(group['normal']))
    if len(facet_orders) < 4:
        return None

    used = sorted({i for order in facet_orders for i in order})
    relabel = {old: new for new, old in enumerate(used)}
    facets = [tuple(relabel[i] for i in order) for order in facet_orders]
    return points[used], facets, normals


def _make_face(dim, index, vertex_ids, vertices, facet_sets, simplices=None):
    points = vertices[list(vertex_ids)]
    if simplices is None:
        if dim == 0:
            simplices = (points[:1],)
        elif dim == 1:
            simplices = (points,)
        else:
            simplices = tuple(points[[0, i, i + 1]] for i in range(1, len(points) - 1))
    basis = _orthonormal_rows(points - points.mean(axis=0), dim)
    ids = set(vertex_ids)
    facet_ids = tuple(i for i, facet in enumerate(facet_sets) if ids <= facet)
    return Face(
        dim=dim,
        index=index,
        vertex_ids=tuple(vertex_ids),
        facet_ids=facet_ids,
        points=points,
        basis=basis,
        simplices=tuple(simplices),
        measure=float(sum(simplex_volume(s) for s in simplices)),
    )


def _assemble(vertices, d, facets, facet_normals, origin, frame):
    m = len(vertices)
    facet_sets = [set(f) for f in facets]
    faces = [[] for _ in range(d + 1)]
    for i in range(m):
        faces[0].append(_make_face(0, i, (i,), vertices, facet_sets))
    if d == 3:
        edges = []
        for order in facets:
            for pos in range(len(order)):
                edge = tuple(sorted((order[pos], order[(pos + 1) % len(order)])))
                if edge not in edges:
                    edges.append(edge)
        for i, edge in enumerate(sorted(edges)):
            faces[1].append(_make_face(1, i, edge, vertices, facet_sets))
    if d >= 2:
        for i, order in enumerate(facets):
            faces[d - 1].append(_make_face(d - 1, i, order, vertices, facet_sets))
    if d >= 1:
        ids = tuple(range(m))
        if d == 3:
            center = vertices.mean(axis=0)
            simplices = [
                np.vstack([center, vertices[[order[0], order[i], order[i + 1]]]])
                for order in facets for i in range(1, len(order) - 1)
            ]
            faces[3].append(_make_face(3, 0, ids, vertices, facet_sets, simplices))
        else:
            faces[d].append(_make_face(d, 0, ids, vertices, facet_sets))
    normals = np.array([n @ frame for n in facet_normals]) if d > 0 else np.zeros((0, vertices.shape[1]))
    return Polytope(vertices, faces, normals, origin, frame)


def _build_in_frame(points, origin, frame, tol):
    d = frame.shape[0]
    coords = (points - origin) @ frame.T
    if d == 0:
        return _assemble(points[:1], 0, [], [], points[0].copy(), frame)
    if d == 1:
        lo, hi = int(np.argmin(coords[:, 0])), int(np.argmax(coords[:, 0]))
        return _assemble(points[[lo, hi]], 1, [(0,), (1,)], [np.array([-1.0]), np.array([1.0])], origin, frame)
    try:
        built = _hull_polygon(points, coords, tol) if d == 2 else _hull_polyhedron(points, coords, tol)
    except QhullError as exc:
        logger.warning(f"Hull in dimension {d} failed ({exc.__class__.__name__}); retrying in dimension {d - 1}.")
        built = None
    if built is None:
        return _build_in_frame(points, origin, frame[:d - 1], tol)
    vertices, facets, normals = built
    return _assemble(vertices, d, facets, normals, origin, frame)


def build_polytope(points, tol=None):
    """
    Convex hull of a finite point set in R^2 or R^3 with its full face lattice.

    Args:
        points: (m, n) array-like, m >= 1, n in {2, 3}.
        tol: merge tolerance for duplicate points, affine rank and coplanar facets
            (defaults to ``settings.TENSORVAL_GEOMETRY_TOL``).

    Raises:
        ValueError: on an empty point list or an unsupported ambient dimension.
    """
    tol = geometry_tol() if tol is None else tol
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        raise ValueError("Cannot build a polytope from an empty point list.")
    points = np.atleast_2d(points)
    if points.shape[1] not in (2, 3):
        raise ValueError(f"Only ambient dimensions 2 and 3 are supported, got {points.shape[1]}.")
    if not np.all(np.isfinite(points)):
        raise ValueError("Polytope vertices must be finite.")
    points = _dedupe(points, tol)
    origin, frame = _affine_frame(points, tol)
    return _build_in_frame(points, origin, frame, tol)


def face_measure(P, F):
    """H^j(F); a vertex has counting measure 1."""
    return F.measure


def normal_cone(P, F):
    """
    N(P, F): the lineality space (aff P)^perp plus the cone spanned by the outward normals
    (inside aff P) of the facets containing F.
    """
    key = (F.dim, F.index)
    if key not in P._cones:
        q = P.lattice_dim - F.dim
        n = P.dim_ambient
        if q == 0:
            rays = np.zeros((0, n))
        else:
            rays = np.asarray([P.facet_normals[i] for i in F.facet_ids])
            if len(rays) >= 3:
                rays = _cyclic_order(rays)
        P._cones[key] = Cone(
            lineality=P.lineality,
            rays=rays,
            pointed_frame=_orthonormal_rows(rays, q) if q else np.zeros((0, n)),
        )
    return P._cones[key]
