"""
Intersections of polytopes with polytopes and flats, metric projection and translation windows.

Clipping keeps the vertices on the inner side of a hyperplane and adds the crossing points of
edges that straddle it; the surviving point set is re-hulled by :func:`build_polytope`, which
also collapses degenerate (lower-dimensional or sub-tolerance) results.
"""

import numpy as np

from .polytopes import EMPTY, Box, build_polytope, geometry_tol


def _crossing(p, q, dp, dq):
    return p + (dp / (dp - dq)) * (q - p)


def clip_halfspace(P, normal, offset, tol=None):
    """P intersected with {x : <normal, x> <= offset}."""
    tol = geometry_tol() if tol is None else tol
    if P.is_empty:
        return EMPTY
    dist = P.vertices @ normal - offset
    if np.all(dist <= tol):
        return P
    if np.all(dist > tol):
        return EMPTY
    points = [P.vertices[dist <= tol]]
    for edge in P.edges:
        i, j = edge.vertex_ids
        if (dist[i] < -tol and dist[j] > tol) or (dist[j] < -tol and dist[i] > tol):
            points.append(_crossing(P.vertices[i], P.vertices[j], dist[i], dist[j])[None])
    return build_polytope(np.vstack(points), tol)


def slice_hyperplane(P, normal, offset, tol=None):
    """P intersected with the hyperplane {x : <normal, x> = offset}; ``normal`` is a unit vector."""
    tol = geometry_tol() if tol is None else tol
    if P.is_empty:
        return EMPTY
    dist = P.vertices @ normal - offset
    on_plane = np.abs(dist) <= tol
    points = [P.vertices[on_plane] - np.outer(dist[on_plane], normal)]
    for edge in P.edges:
        i, j = edge.vertex_ids
        if (dist[i] < -tol and dist[j] > tol) or (dist[j] < -tol and dist[i] > tol):
            points.append(_crossing(P.vertices[i], P.vertices[j], dist[i], dist[j])[None])
    points = np.vstack(points)
    if len(points) == 0:
        return EMPTY
    return build_polytope(points, tol)


def _clip_polygon(polygon, normal, offset, tol):
    """One Sutherland-Hodgman pass of a cyclically ordered polygon against a half-plane."""
    result = []
    count = len(polygon)
    for pos in range(count):
        prev, cur = polygon[pos - 1], polygon[pos]
        d_prev, d_cur = prev @ normal - offset, cur @ normal - offset
        if d_cur <= tol:
            if d_prev > tol:
                result.append(_crossing(prev, cur, d_prev, d_cur))
            result.append(cur)
        elif d_prev <= tol:
            result.append(_crossing(prev, cur, d_prev, d_cur))
    return result


def intersect_polytopes(A, B, tol=None):
    """
    A intersected with B, as a Polytope or EMPTY.

    Two full-dimensional polygons are clipped with Sutherland-Hodgman; every other pair by
    successive half-space clips of A against B's H-representation.
    """
    tol = geometry_tol() if tol is None else tol
    if A.is_empty or B.is_empty:
        return EMPTY
    if A.dim_ambient != B.dim_ambient:
        raise ValueError(f"Ambient dimension mismatch: {A.dim_ambient} != {B.dim_ambient}.")
    if not A.bounding_box().overlaps(B.bounding_box(), tol):
        return EMPTY

    normals, offsets, eq_normals, eq_offsets = B.halfspaces()
    if A.dim_ambient == 2 and A.is_full_dimensional and B.is_full_dimensional:
        polygon = list(A.vertices[list(A.top_face.vertex_ids)])
        for normal, offset in zip(normals, offsets):
            polygon = _clip_polygon(polygon, normal, offset, tol)
            if not polygon:
                return EMPTY
        return build_polytope(np.asarray(polygon), tol)

    P = A
    for normal, offset in zip(eq_normals, eq_offsets):
        P = slice_hyperplane(P, normal, offset, tol)
        if P.is_empty:
            return EMPTY
    for normal, offset in zip(normals, offsets):
        P = clip_halfspace(P, normal, offset, tol)
        if P.is_empty:
            return EMPTY
    return P


def slice_flat(P, flat, tol=None):
    """P intersected with the affine flat E (E.k < n), embedded in R^n."""
    if flat.k >= P.dim_ambient:
        raise ValueError(f"slice_flat needs a flat of dimension below {P.dim_ambient}, got {flat.k}.")
    if flat.dim_ambient != P.dim_ambient:
        raise ValueError(f"Flat lives in R^{flat.dim_ambient}, polytope in R^{P.dim_ambient}.")
    result = P
    for normal in flat.normals:
        result = slice_hyperplane(result, normal, normal @ flat.anchor, tol)
        if result.is_empty:
            return EMPTY
    return result


def _face_projections(P, X, tol):
    """Distances from each row of X to P: the minimum over faces F of the distance to the
    projection onto aff(F), among projections lying in P."""
    best = np.full(len(X), np.inf)
    best_points = np.zeros_like(X)
    for faces in P.faces:
        for face in faces:
            anchor = face.points[0]
            rel = X - anchor
            proj = anchor + (rel @ face.basis.T) @ face.basis
            dist = np.linalg.norm(X - proj, axis=1)
            ok = P.contains_many(proj, tol) & (dist < best)
            best[ok] = dist[ok]
            best_points[ok] = proj[ok]
    return best_points, best


def distances(P, X, tol=None):
    """Vectorized distance from each row of X to P."""
    tol = geometry_tol() if tol is None else tol
    X = np.atleast_2d(np.asarray(X, dtype=float))
    inside = P.contains_many(X, tol)
    _, dist = _face_projections(P, X, tol)
    dist[inside] = 0.0
    return dist


def project_point(P, x, tol=None):
    """Metric projection p(P, x) and the distance ||x - p||."""
    tol = geometry_tol() if tol is None else tol
    x = np.asarray(x, dtype=float)
    if P.contains(x, tol):
        return x.copy(), 0.0
    points, dist = _face_projections(P, x[None], tol)
    return points[0], float(dist[0])


def translation_window(A, B):
    """
    Box containing every t with A intersected with (B + t) nonempty: bbox(A) (+) (-bbox(B)).
    """
    if A.dim_ambient != B.dim_ambient:
        raise ValueError(f"Ambient dimension mismatch: {A.dim_ambient} != {B.dim_ambient}.")
    box_a, box_b = A.bounding_box(), B.bounding_box()
    return Box(box_a.lower - box_b.upper, box_a.upper - box_b.lower)
