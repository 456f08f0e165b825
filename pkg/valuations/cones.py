"""
Normal-cone moments Theta_s(P, F) = 1/s! * 1/omega_{n-k+s} * integral over N(P,F) and the unit
sphere of u^s.

A normal cone splits as L (+) C with L = (aff P)^perp of dimension ell and C pointed of
dimension q. Writing u = cos(phi) a + sin(phi) b with a in C and b in L, both unit,

    integral of u^s = sum_i binom(s, i) HB(i + q - 1, s - i + ell - 1) A_i * B_(s-i),

with HB(a, b) the integral of cos^a sin^b over [0, pi/2], A_i the moment of the pointed
section and B_m the moment of the full unit sphere of L. A_i is a point value for q = 1, an
arc integral for q = 2 and an adaptive spherical-triangle quadrature for q = 3.
"""
import cmath
import logging
import math
from functools import lru_cache

import numpy as np
from django.conf import settings
from scipy.special import beta, gamma, roots_jacobi, roots_legendre

from coefficients.exact import sphere_constants
from polytope.polytopes import normal_cone
from symtensor.tensors import SymTensor, combine, multi_indices, multinomial, sym_product, tensor_power

logger = logging.getLogger(__name__)

MAX_DEPTH = 12


def quadrature_tol():
    return getattr(settings, 'TENSORVAL_QUADRATURE_TOL', 1e-10)


def half_beta(a, b):
    """Integral of cos^a(phi) sin^b(phi) over [0, pi/2]."""
    return beta((a + 1) / 2, (b + 1) / 2) / 2


def sphere_monomial(exponents):
    """Integral over S^(d-1) of y^exponents; zero unless every exponent is even."""
    if any(a % 2 for a in exponents):
        return 0.0
    value = 2.0
    for a in exponents:
        value *= gamma((a + 1) / 2)
    return value / gamma((sum(exponents) + len(exponents)) / 2)


def sphere_moment(basis, m):
    """B_m: integral of b^m over the unit sphere of span(basis) (orthonormal rows)."""
    ell, dim = basis.shape
    powers = [[tensor_power(v, a) for a in range(m + 1)] for v in basis]
    terms = []
    for exponents in multi_indices(ell, m):
        weight = sphere_monomial(exponents)
        if weight:
            factors = (powers[t][a] for t, a in enumerate(exponents))
            terms.append((multinomial(exponents) * weight, sym_product(*factors)))
    return combine(terms, dim=dim, rank=m) if terms else SymTensor.zeros(dim, m)


def _arc_power_integral(a, b, angle):
    """Integral of cos^a(t) sin^b(t) over [0, angle], expanded in complex exponentials."""
    total = 0j
    for p in range(a + 1):
        for q in range(b + 1):
            freq = 2 * p - a + 2 * q - b
            weight = math.comb(a, p) * math.comb(b, q) * (-1) ** (b - q)
            if freq == 0:
                total += weight * angle
            else:
                total += weight * (cmath.exp(1j * freq * angle) - 1) / (1j * freq)
    return (total / (2 ** (a + b) * 1j ** b)).real


def arc_moment(first, second, i):
    """A_i for the arc of the unit circle from ``first`` to ``second`` (angle below pi)."""
    e1 = first / np.linalg.norm(first)
    e2 = second - (second @ e1) * e1
    e2 /= np.linalg.norm(e2)
    angle = math.acos(float(np.clip(first @ second / np.linalg.norm(second), -1.0, 1.0)))
    p1, p2 = [tensor_power(e1, c) for c in range(i + 1)], [tensor_power(e2, c) for c in range(i + 1)]
    terms = [
        (math.comb(i, c) * _arc_power_integral(c, i - c, angle), sym_product(p1[c], p2[i - c]))
        for c in range(i + 1)
    ]
    return combine(terms, dim=len(e1), rank=i)


def _spherical_triangle_area(a, b, c):
    numerator = abs(float(np.linalg.det(np.array([a, b, c]))))
    denominator = 1.0 + a @ b + b @ c + c @ a
    return 2.0 * math.atan2(numerator, denominator)


@lru_cache(maxsize=None)
def _triangle_rule():
    """Conical product rule on the reference triangle, exact to degree 7."""
    xu, wu = roots_jacobi(4, 1, 0)
    xv, wv = roots_legendre(4)
    u, v = (xu + 1) / 2, (xv + 1) / 2
    points = np.array([(ui, (1 - ui) * vj) for ui in u for vj in v])
    weights = np.array([wi / 4 * wj / 2 for wi in wu for wj in wv])
    return points, weights


class _MonomialBlock:
    """Flattened monomials u^a for all |a| = i, i in ``ranks``, with their tensor layout."""

    def __init__(self, dim, ranks):
        self.dim = dim
        self.ranks = list(ranks)
        self.layout = [(i, multi_indices(dim, i)) for i in self.ranks]
        self.exponents = np.array([e for _, block in self.layout for e in block]).reshape(-1, dim)

    def evaluate(self, units):
        return np.prod(units[:, None, :] ** self.exponents[None, :, :], axis=2)

    def tensors(self, values):
        result, pos = {}, 0
        for i, block in self.layout:
            coeffs = {e: multinomial(e) * values[pos + t] for t, e in enumerate(block)}
            result[i] = SymTensor(self.dim, i, coeffs)
            pos += len(block)
        return result


def _triangle_estimate(a, b, c, block):
    points, weights = _triangle_rule()
    y = a + points[:, :1] * (b - a) + points[:, 1:] * (c - a)
    norms = np.linalg.norm(y, axis=1)
    jacobian = abs(float(np.linalg.det(np.array([a, b, c])))) / norms ** 3
    values = block.evaluate(y / norms[:, None])
    return (weights * jacobian) @ values


def _normalized(v):
    return v / np.linalg.norm(v)


def _adaptive_triangle(a, b, c, block, tol, estimate, depth):
    ab, bc, ca = _normalized(a + b), _normalized(b + c), _normalized(c + a)
    children = [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
    estimates = [_triangle_estimate(*child, block) for child in children]
    refined = np.sum(estimates, axis=0)
    if np.max(np.abs(refined - estimate)) <= tol:
        return refined
    if depth >= MAX_DEPTH:
        logger.warning(f"Spherical quadrature stopped at depth {depth} with error "
                       f"{np.max(np.abs(refined - estimate)):.3e} above {tol:.3e}.")
        return refined
    return np.sum([
        _adaptive_triangle(*child, block, tol / 4, child_estimate, depth + 1)
        for child, child_estimate in zip(children, estimates)
    ], axis=0)


def spherical_polygon_moments(rays, ranks, tol=None):
    """
    A_i for i in ``ranks`` over the spherical polygon with cyclically ordered unit vertices.

    The polygon is fanned into triangles from its first vertex; each triangle is integrated
    through the gnomonic map with a degree-7 rule and refined at normalized edge midpoints.
    """
    tol = quadrature_tol() if tol is None else tol
    dim = rays.shape[1]
    block = _MonomialBlock(dim, ranks)
    fan = [(rays[0], rays[i], rays[i + 1]) for i in range(1, len(rays) - 1)]
    total = np.zeros(len(block.exponents))
    for triangle in fan:
        estimate = _triangle_estimate(*triangle, block)
        total += _adaptive_triangle(*triangle, block, tol / len(fan), estimate, 0)
    moments = block.tensors(total)
    if 0 in moments:
        area = sum(_spherical_triangle_area(*triangle) for triangle in fan)
        moments[0] = SymTensor.scalar(dim, area)
    return moments


def pointed_moments(cone, s):
    """A_0..A_s of the pointed section of a cone; the q = 3 case goes through quadrature."""
    dim = cone.dim_ambient
    if cone.q == 1:
        return {i: tensor_power(cone.rays[0], i) for i in range(s + 1)}
    if cone.q == 2:
        first, second = cone.rays
        return {i: arc_moment(first, second, i) for i in range(s + 1)}
    if cone.q == 3:
        return spherical_polygon_moments(cone.rays, range(s + 1))
    raise ValueError(f"Pointed cones of dimension {cone.q} in R^{dim} are not supported.")


def uses_quadrature(cone, s):
    return cone.q >= 3 and s > 0


def cone_sphere_moment(cone, s):
    """Integral of u^s over the unit sphere section of a normal cone (before normalization)."""
    dim, q, ell = cone.dim_ambient, cone.q, cone.ell
    if q == 0:
        return sphere_moment(cone.lineality, s)
    if ell == 0:
        return pointed_moments(cone, s)[s]
    pointed = pointed_moments(cone, s)
    terms = []
    for i in range(s + 1):
        b = sphere_moment(cone.lineality, s - i)
        if b.is_zero or pointed[i].is_zero:
            continue
        weight = math.comb(s, i) * half_beta(i + q - 1, s - i + ell - 1)
        terms.append((weight, sym_product(pointed[i], b)))
    return combine(terms, dim=dim, rank=s) if terms else SymTensor.zeros(dim, s)


def theta(P, F, s):
    """
    Theta_s(P, F) as a rank-s tensor.

    Zero (rank 0) for s < 0. When the normal cone is {0}, i.e. F = P full-dimensional, the
    value is 1 for s = 0 and zero otherwise.
    """
    n = P.dim_ambient
    if s < 0:
        return SymTensor.zeros(n, 0)
    return P.cached(('theta', F.dim, F.index, s), lambda: _theta(P, F, s))


def _theta(P, F, s):
    n = P.dim_ambient
    codim = n - F.dim
    if codim == 0:
        return SymTensor.scalar(n, 1.0) if s == 0 else SymTensor.zeros(n, s)
    cone = normal_cone(P, F)
    omega = float(sphere_constants(codim + s)[0])
    return cone_sphere_moment(cone, s).scale(1.0 / (math.factorial(s) * omega))


def theta_is_exact(P, F, s):
    if s <= 0 or F.dim == P.dim_ambient:
        return True
    return not uses_quadrature(normal_cone(P, F), s)
