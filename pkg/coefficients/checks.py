"""
Exact identity suite for the kinematic, Crofton and curvature-measure coefficients.

Every check walks an index grid and compares ExactScalars for equality; a summary dict per
identity records how many instances were checked and which ones failed.
"""
from fractions import Fraction

from .exact import ExactScalar
from .formulas import (
    alpha, crofton_coeff_jk, kf_coeff_e, kinematic_coeff_kn, tcm_coeff_c, tcm_coeff_ebar,
)

MAX_REPORTED_ERRORS = 5


def _summary(name):
    return {'name': name, 'checked': 0, 'failed': 0, 'errors': []}


def _record(summary, ok, message):
    summary['checked'] += 1
    if not ok:
        summary['failed'] += 1
        if len(summary['errors']) < MAX_REPORTED_ERRORS:
            summary['errors'].append(message)


def index_grid(n_max, s_max):
    for n in range(1, n_max + 1):
        for k in range(n + 1):
            for j in range(k + 1):
                for s in range(s_max + 1):
                    yield n, j, k, s


def check_diagonal(n_max=5, s_max=6, p_max=3):
    """e_{n,j,j}^{s,m,p} = 1{m = p = 0} and c_{n,j,j}^{s,i,m} = 1{m = i = 0}."""
    summary = _summary('diagonal coefficients')
    for n, j, k, s in index_grid(n_max, s_max):
        if j != k:
            continue
        for m in range(s // 2 + 1):
            for p in range(p_max + 1):
                got = kf_coeff_e(n, j, j, s, m, p)
                _record(summary, got == (1 if m == p == 0 else 0), f"e[{n},{j},{j}]^({s},{m},{p}) = {got!r}")
            for i in (0, 1):
                got = tcm_coeff_c(n, j, j, s, i, m)
                _record(summary, got == (1 if m == i == 0 else 0), f"c[{n},{j},{j}]^({s},{i},{m}) = {got!r}")
    return summary


def check_c_first_order(n_max=5, s_max=6):
    """c_{n,j,k}^{s,1,0} = 0."""
    summary = _summary('c^(s,1,0) vanishes')
    for n, j, k, s in index_grid(n_max, s_max):
        got = tcm_coeff_c(n, j, k, s, 1, 0)
        _record(summary, got.is_zero, f"c[{n},{j},{k}]^({s},1,0) = {got!r}")
    return summary


def check_scalar_mcmullen_terms(n_max=5, p_max=3):
    """e_{n,j,k}^{0,0,p} = 0 for p >= 1 and e_{n,j,k}^{0,0,0} = alpha(n, j, k)."""
    summary = _summary('scalar coefficients')
    for n, j, k, _ in index_grid(n_max, 0):
        got = kf_coeff_e(n, j, k, 0, 0, 0)
        _record(summary, got == alpha(n, j, k), f"e[{n},{j},{k}]^(0,0,0) = {got!r}")
        for p in range(1, p_max + 1):
            got = kf_coeff_e(n, j, k, 0, 0, p)
            _record(summary, got.is_zero, f"e[{n},{j},{k}]^(0,0,{p}) = {got!r}")
    return summary


def check_last_term_closed_form(n_max=5, s_max=6):
    """e_{n,j,n}^{s,s/2,0} agrees with its closed form and with e_{n,j}^s for even s."""
    summary = _summary('k = n closed form')
    for n in range(1, n_max + 1):
        for j in range(n):
            for s in range(0, s_max + 1, 2):
                got = kf_coeff_e(n, j, n, s, s // 2, 0)
                _record(summary, got == kinematic_coeff_kn(n, j, s), f"e[{n},{j},{n}]^({s},{s // 2},0) = {got!r}")
                _record(summary, got == tcm_coeff_ebar(n, j, s), f"e[{n},{j},{n}]^({s},{s // 2},0) != ebar")
    return summary


def check_crofton_diagonal(n_max=5, s_max=6):
    """The j = k Crofton coefficient equals e_{n,k}^s."""
    summary = _summary('Crofton j = k coefficient')
    for n in range(1, n_max + 1):
        for k in range(n + 1):
            for s in range(s_max + 1):
                got = crofton_coeff_jk(n, k, s)
                _record(summary, got == tcm_coeff_ebar(n, k, s), f"crofton[{n},{k}]^{s} = {got!r}")
    return summary


def check_alpha_symmetry(n_max=5):
    summary = _summary('alpha symmetry')
    for n, j, k, _ in index_grid(n_max, 0):
        got, mirrored = alpha(n, j, k), alpha(n, j, n - k + j)
        _record(summary, got == mirrored, f"alpha({n},{j},{k}) = {got!r} != {mirrored!r}")
    return summary


def check_reconstruction(n_max=5, s_max=6, p_max=3):
    """
    e_{n,j,k}^{s,m,p} rebuilt from c_{n,j,k}^{s,i,m} for 0 < j < k < n:

        p = 0, m < s/2:  c^{s,0,m} + 2 pi / k c^{s,1,m} - 4 pi^2 (s - 2m) / k c^{s,1,m+1}
        p = 0, m = s/2:  c^{s,0,m} + 2 pi / k c^{s,1,m}
        p >= 1, m < s/2: 2 pi / k (c^{s,1,m} - 2 pi (s - 2m + p) c^{s,1,m+1})
        p >= 1, m = s/2: 2 pi / k c^{s,1,m}
    """
    summary = _summary('reconstruction from curvature-measure coefficients')
    for n, j, k, s in index_grid(n_max, s_max):
        if not 0 < j < k < n:
            continue
        two_pi_over_k = ExactScalar(Fraction(2, k), 2)
        M = s // 2
        for m in range(M + 1):
            c0, c1 = tcm_coeff_c(n, j, k, s, 0, m), tcm_coeff_c(n, j, k, s, 1, m)
            next_c1 = tcm_coeff_c(n, j, k, s, 1, m + 1) if m < M else ExactScalar(0)
            rebuilt = c0 + two_pi_over_k * c1 - ExactScalar(Fraction(4 * (s - 2 * m), k), 4) * next_c1
            got = kf_coeff_e(n, j, k, s, m, 0)
            _record(summary, got == rebuilt, f"e[{n},{j},{k}]^({s},{m},0) = {got!r}, rebuilt {rebuilt!r}")
            for p in range(1, p_max + 1):
                rebuilt = two_pi_over_k * (c1 - ExactScalar(2 * (s - 2 * m + p), 2) * next_c1)
                got = kf_coeff_e(n, j, k, s, m, p)
                _record(summary, got == rebuilt, f"e[{n},{j},{k}]^({s},{m},{p}) = {got!r}, rebuilt {rebuilt!r}")
    return summary


COEFFICIENT_CHECKS = (
    check_diagonal,
    check_c_first_order,
    check_scalar_mcmullen_terms,
    check_last_term_closed_form,
    check_crofton_diagonal,
    check_alpha_symmetry,
    check_reconstruction,
)
