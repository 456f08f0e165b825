"""
Identity suites evaluated on a single polytope: the McMullen relation, the expansion of the
generalized curvature measures, and structural identities of the normal-cone integrals.

Each suite returns a summary dict with the largest residual seen.
"""
import math

from coefficients.exact import sphere_constants
from symtensor.tensors import SymTensor

from .cones import theta
from .moments import max_position_rank
from .tensors import expand_gen_tcm, gen_tcm_total, mcmullen_sides, phi

MAX_REPORTED_ERRORS = 5


def _summary(name):
    return {'name': name, 'checked': 0, 'failed': 0, 'errors': [], 'max_residual': 0.0}


def _record(summary, residual, tolerance, message):
    summary['checked'] += 1
    summary['max_residual'] = max(summary['max_residual'], residual)
    if residual > tolerance:
        summary['failed'] += 1
        if len(summary['errors']) < MAX_REPORTED_ERRORS:
            summary['errors'].append(f"{message}: residual {residual:.3e} > {tolerance:.3e}")


def _order_grid(max_order):
    for r in range(min(max_order, max_position_rank()) + 1):
        for s in range(max_order + 1 - r):
            yield r, s


def check_mcmullen(P, max_order=5, rtol=1e-9):
    """2 pi s Phi_k^{r,s} against its face decomposition, for all k and r + s <= max_order."""
    summary = _summary('McMullen relation')
    for k in range(P.dim_ambient + 1):
        for r, s in _order_grid(max_order):
            lhs, rhs = mcmullen_sides(P, k, r, s)
            residual = (lhs - rhs).norm_inf()
            _record(summary, residual, rtol * (1 + lhs.norm_inf()), f"k={k} r={r} s={s}")
    return summary


def check_gen_tcm_expansion(P, max_order=5, rtol=1e-9):
    """k / (2 pi) phi_k^{r,s-2,1} against its expansion in Minkowski tensors, for 1 <= k <= n - 1."""
    summary = _summary('generalized curvature measure expansion')
    for k in range(1, P.dim_ambient):
        for r, s in _order_grid(max_order):
            expected = gen_tcm_total(P, k, r, s - 2).value.scale(k / (2 * math.pi))
            residual = (expand_gen_tcm(P, k, r, s) - expected).norm_inf()
            _record(summary, residual, rtol * (1 + expected.norm_inf()), f"k={k} r={r} s={s}")
    return summary


def check_structure(P, atol=1e-10):
    """
    Phi_k^{0,1} = 0 for k < n, Phi_0^{0,2} = omega_n / (2 n omega_{n+2}) Q, and the vertex
    normal cones tile the unit sphere.
    """
    summary = _summary('structural tensor identities')
    n = P.dim_ambient
    for k in range(n):
        _record(summary, phi(P, k, 0, 1).norm_inf(), atol, f"Phi_{k}^(0,1) does not vanish")
    omega_n, omega_n2 = (float(sphere_constants(d)[0]) for d in (n, n + 2))
    expected = SymTensor.metric(n).scale(omega_n / (2 * n * omega_n2))
    _record(summary, (phi(P, 0, 0, 2) - expected).norm_inf(), atol * (2 + expected.norm_inf()), "Phi_0^(0,2) is not a multiple of Q")
    covered = sum(omega_n * theta(P, vertex, 0).value for vertex in P.faces[0])
    _record(summary, abs(covered - omega_n), atol * omega_n, "vertex normal cones do not tile the sphere")
    return summary
