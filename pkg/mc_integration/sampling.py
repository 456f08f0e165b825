"""
Haar-uniform rotations and linear subspaces for R^2 and R^3.

Rotations of the plane are drawn from a uniform angle; rotations of space from a uniform unit
quaternion (a normalized Gaussian 4-vector).
"""
from dataclasses import dataclass

import numpy as np

ORTHOGONALITY_TOL = 1e-12


@dataclass(frozen=True)
class RigidMotion:
    """Proper rigid motion x -> rotation @ x + translation."""
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rotation = np.asarray(self.rotation, dtype=float)
        translation = np.asarray(self.translation, dtype=float)
        n = rotation.shape[0]
        if rotation.shape != (n, n) or translation.shape != (n,):
            raise ValueError(f"Rotation {rotation.shape} and translation {translation.shape} do not match.")
        if np.max(np.abs(rotation @ rotation.T - np.eye(n))) > ORTHOGONALITY_TOL:
            raise ValueError("Rotation matrix is not orthogonal within 1e-12.")
        if np.linalg.det(rotation) <= 0:
            raise ValueError("Rotation matrix must have positive determinant.")
        object.__setattr__(self, 'rotation', rotation)
        object.__setattr__(self, 'translation', translation)

    @property
    def dim(self):
        return self.rotation.shape[0]

    def apply_points(self, points):
        return np.asarray(points, dtype=float) @ self.rotation.T + self.translation

    def apply(self, P):
        """gP."""
        return P.transformed(self.rotation, self.translation)


def quaternion_to_matrix(q):
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def sample_rotation(n, rng):
    """Haar-uniform element of SO(n) for n in {2, 3}."""
    if n == 2:
        angle = rng.uniform(0.0, 2 * np.pi)
        c, s = np.cos(angle), np.sin(angle)
        return np.array([[c, -s], [s, c]])
    if n == 3:
        q = rng.normal(size=4)
        return quaternion_to_matrix(q / np.linalg.norm(q))
    raise ValueError(f"Rotations are only sampled in dimensions 2 and 3, got {n}.")


def sample_direction_space(n, k, rng):
    """
    Orthonormal basis (k x n) of a Haar-uniform k-dimensional linear subspace.

    The first k columns of a Haar rotation span a uniformly distributed subspace: a uniform
    line for (2, 1), a uniform axis for (3, 1) and a plane with uniform normal for (3, 2).
    """
    if not 0 <= k <= n:
        raise ValueError(f"Need 0 <= k <= {n}, got k={k}.")
    if k == 0:
        return np.zeros((0, n))
    if k == n:
        return np.eye(n)
    return sample_rotation(n, rng)[:, :k].T.copy()
