"""
Closed-form right-hand sides of the kinematic and Crofton formulae, for Minkowski tensors and
for total tensorial curvature measures, assembled from exact coefficients.

Coefficients stay exact until they multiply a tensor; they are converted to floats there.
"""

from coefficients.formulas import (
    alpha, crofton_coeff_jk, kf_coeff_e, tcm_coeff_c, tcm_coeff_ebar,
)
from symtensor.tensors import SymTensor, combine, metric_power, sym_product

from .tensors import gen_tcm_total, intrinsic_volumes, phi


def _check_indices(n, j, r, s):
    if not 0 <= j <= n:
        raise ValueError(f"Need 0 <= j <= {n}, got j={j}.")
    if r < 0 or s < 0:
        raise ValueError(f"Ranks must be nonnegative, got r={r}, s={s}.")
    if j == n and s != 0:
        raise ValueError(f"Phi_n^(r,s) is only defined for s = 0, got s={s}.")


def _check_pair(K, K2):
    if K.dim_ambient != K2.dim_ambient:
        raise ValueError(f"Ambient dimension mismatch: {K.dim_ambient} != {K2.dim_ambient}.")
    return K.dim_ambient


def _check_crofton(n, k, j, r, s):
    if not 0 <= j <= k <= n:
        raise ValueError(f"Need 0 <= j <= k <= {n}, got j={j}, k={k}.")
    if r < 0 or s < 0:
        raise ValueError(f"Ranks must be nonnegative, got r={r}, s={s}.")


def _metric_times(n, m, tensor):
    return sym_product(metric_power(n, m), tensor) if m else tensor


def _translation_sum(K, n, j, k, r, s):
    """sum_p sum_m e_{n,j,k}^{s,m,p} Q^m Phi_{k+p}^{r-p, s-2m+p}(K)."""
    terms = []
    for p in range(min(r, n - k) + 1):
        for m in range(s // 2 + 1):
            coefficient = kf_coeff_e(n, j, k, s, m, p)
            if coefficient.is_zero:
                continue
            terms.append((float(coefficient), _metric_times(n, m, phi(K, k + p, r - p, s - 2 * m + p))))
    return combine(terms, dim=n, rank=r + s)


def rhs_kinematic(K, K2, j, r, s):
    """
    sum_{k=j}^{n} sum_p sum_m e_{n,j,k}^{s,m,p} Q^m Phi_{k+p}^{r-p, s-2m+p}(K) V_{n-k+j}(K2),

    the integral over rigid motions g of Phi_j^{r,s}(K cap gK2).
    """
    n = _check_pair(K, K2)
    _check_indices(n, j, r, s)
    volumes = intrinsic_volumes(K2)
    terms = []
    for k in range(j, n + 1):
        weight = volumes[n - k + j]
        if weight:
            terms.append((weight, _translation_sum(K, n, j, k, r, s)))
    return combine(terms, dim=n, rank=r + s)


def rhs_crofton(K, k, j, r, s):
    """
    The integral over affine k-flats E of Phi_j^{r,s}(K cap E).

    For j = k this is the closed form Q^{s/2} Phi_n^{r,0}(K) times the j = k Crofton
    coefficient; for j < k the sum over p and m with coefficients e_{n,j,n-k+j}^{s,m,p}.
    """
    n = K.dim_ambient
    _check_crofton(n, k, j, r, s)
    if j == k:
        if s % 2:
            return SymTensor.zeros(n, r + s)
        coefficient = crofton_coeff_jk(n, k, s)
        volume_term = _metric_times(n, s // 2, phi(K, n, r, 0))
        return volume_term.scale(float(coefficient))
    return _translation_sum(K, n, j, n - k + j, r, s)


def principal_kinematic(K, K2, j):
    """sum_{k=j}^{n} alpha_{n,j,k} V_k(K) V_{n-k+j}(K2)."""
    n = _check_pair(K, K2)
    if not 0 <= j <= n:
        raise ValueError(f"Need 0 <= j <= {n}, got j={j}.")
    v, w = intrinsic_volumes(K), intrinsic_volumes(K2)
    return sum(float(alpha(n, j, k)) * v[k] * w[n - k + j] for k in range(j, n + 1))


def classical_crofton(K, k, j):
    """alpha_{n,j,k} V_{n-k+j}(K)."""
    n = K.dim_ambient
    if not 0 <= j <= k <= n:
        raise ValueError(f"Need 0 <= j <= k <= {n}, got j={j}, k={k}.")
    return float(alpha(n, j, k)) * intrinsic_volumes(K)[n - k + j]


def _curvature_measure_total(K, n, k, r, s, i):
    if i == 0:
        return phi(K, k, r, s)
    return gen_tcm_total(K, k, r, s).value


def _curvature_measure_sum(K, n, j, k, r, s):
    """sum_m sum_i c_{n,j,k}^{s,i,m} Q^{m-i} phi_k^{r,s-2m,i}(K, R^n)."""
    terms = []
    for m in range(s // 2 + 1):
        for i in (0, 1):
            coefficient = tcm_coeff_c(n, j, k, s, i, m)
            if coefficient.is_zero:
                continue
            total = _curvature_measure_total(K, n, k, r, s - 2 * m, i)
            terms.append((float(coefficient), _metric_times(n, m - i, total)))
    return combine(terms, dim=n, rank=r + s)


def rhs_kinematic_tcm(K, K2, j, r, s):
    """
    The kinematic formula for total tensorial curvature measures:

        sum_{k=j+1}^{n-1} sum_m sum_i c_{n,j,k}^{s,i,m} Q^{m-i} phi_k^{r,s-2m,i}(K) V_{n-k+j}(K2)
            + Phi_j^{r,s}(K) V_n(K2) + e_{n,j}^s Q^{s/2} Phi_n^r(K) V_j(K2).

    For j = n only Phi_n^r(K) V_n(K2) remains.
    """
    n = _check_pair(K, K2)
    _check_indices(n, j, r, s)
    volumes = intrinsic_volumes(K2)
    if j == n:
        return phi(K, n, r, 0).scale(volumes[n])
    terms = []
    for k in range(j + 1, n):
        weight = volumes[n - k + j]
        if weight:
            terms.append((weight, _curvature_measure_sum(K, n, j, k, r, s)))
    terms.append((volumes[n], phi(K, j, r, s)))
    ebar = tcm_coeff_ebar(n, j, s)
    if not ebar.is_zero:
        terms.append((float(ebar) * volumes[j], _metric_times(n, s // 2, phi(K, n, r, 0))))
    return combine(terms, dim=n, rank=r + s)


def rhs_crofton_tcm(K, k, j, r, s):
    """
    The Crofton formula for total tensorial curvature measures: e_{n,k}^s Q^{s/2} Phi_n^r(K) for
    j = k, and sum_m sum_i c_{n,j,n-k+j}^{s,i,m} Q^{m-i} phi_{n-k+j}^{r,s-2m,i}(K) for j < k.
    """
    n = K.dim_ambient
    _check_crofton(n, k, j, r, s)
    if j == k:
        if s % 2:
            return SymTensor.zeros(n, r + s)
        ebar = tcm_coeff_ebar(n, k, s)
        return _metric_times(n, s // 2, phi(K, n, r, 0)).scale(float(ebar))
    return _curvature_measure_sum(K, n, j, n - k + j, r, s)
