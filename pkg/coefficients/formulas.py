"""
Exact coefficients of the kinematic and Crofton formulae for Minkowski tensors and for
the (generalized) tensorial curvature measures.

Arguments named ``two_*`` are twice the Gamma argument, see :mod:`coefficients.exact`.
All functions are cached; results are immutable ExactScalars.
"""
import math
from fractions import Fraction
from functools import lru_cache

from .exact import ExactScalar, gamma_half, rgamma_ratio, sphere_constants

FOUR_PI = ExactScalar(4, 2)


def _require(condition, message):
    if not condition:
        raise ValueError(message)


def _check_njk(n, j, k):
    _require(n >= 1, f"Ambient dimension must be positive, got n={n}.")
    _require(0 <= j <= k <= n, f"Need 0 <= j <= k <= n, got n={n}, j={j}, k={k}.")


def _check_sm(s, m):
    _require(s >= 0, f"Normal rank s must be nonnegative, got {s}.")
    _require(0 <= m <= s // 2, f"Need 0 <= m <= floor(s/2) = {s // 2}, got m={m}.")


def _kinematic_shift(j, k, m):
    """Gamma((k-j)/2 + m) / Gamma((k-j)/2) for k > j."""
    return rgamma_ratio(k - j + 2 * m, k - j)


@lru_cache(maxsize=None)
def alpha(n, j, k):
    """alpha_{n,j,k} = Gamma((k+1)/2) Gamma((n-k+j+1)/2) / (Gamma((j+1)/2) Gamma((n+1)/2))."""
    _check_njk(n, j, k)
    return (gamma_half(k + 1) * gamma_half(n - k + j + 1)) / (gamma_half(j + 1) * gamma_half(n + 1))


@lru_cache(maxsize=None)
def kf_coeff_e_generic(n, j, k, s, m):
    """
    The generic-m expression of e_{n,j,k}^{s,m,0} for j < k.

    Gamma((j+s)/2 - m) / Gamma(j/2) is evaluated as one ratio, which reads as 1{m = s/2}
    for j = 0.
    """
    _check_njk(n, j, k)
    _check_sm(s, m)
    _require(j < k, f"The generic expression needs j < k, got j={j}, k={k}.")
    prefactor = ExactScalar(Fraction(1, math.factorial(m))) / FOUR_PI ** m
    return (
        prefactor
        * rgamma_ratio(j + s - 2 * m, j)
        * gamma_half(k)
        / gamma_half(k + s)
        * _kinematic_shift(j, k, m)
        * alpha(n, j, k)
    )


@lru_cache(maxsize=None)
def kf_coeff_e(n, j, k, s, m, p):
    """
    Coefficient e_{n,j,k}^{s,m,p} of the kinematic formula for Phi_j^{r,s}.

    p = 0 covers the translation invariant tensors, p >= 1 the tensors contributed by the
    McMullen relations. The same coefficients with k replaced by n-k+j appear in the
    Crofton formulae.
    """
    _check_njk(n, j, k)
    _check_sm(s, m)
    _require(p >= 0, f"p must be nonnegative, got {p}.")
    M = s // 2

    if k == j:
        # includes the convention for j = k = 0
        return ExactScalar(1 if (p == 0 and m == 0) else 0)

    if p == 0:
        if m < M:
            return kf_coeff_e_generic(n, j, k, s, m)
        return (
            ExactScalar(Fraction(k + 2 * M, 2 * math.factorial(M)))
            / FOUR_PI ** M
            * gamma_half(k)
            / gamma_half(j + 2)
            * gamma_half(j + s - 2 * M + 2)
            / gamma_half(k + s + 2)
            * _kinematic_shift(j, k, M)
            * alpha(n, j, k)
        )

    if m < M:
        factor = Fraction(m * (k - p), k) - Fraction((s + p) * (k - j), 2 * k)
        return (
            ExactScalar(factor / math.factorial(m))
            / FOUR_PI ** m
            * gamma_half(k + 2)
            / gamma_half(j + 2)
            * gamma_half(j + s - 2 * m)
            / gamma_half(k + s + 2)
            * _kinematic_shift(j, k, m)
            * alpha(n, j, k)
        )

    if M == 0:
        # 1/(-1)! = 0
        return ExactScalar(0)
    return (
        ExactScalar(Fraction(1, math.factorial(M - 1)))
        / FOUR_PI ** M
        * gamma_half(k)
        / gamma_half(j + 2)
        * gamma_half(j + s - 2 * M + 2)
        / gamma_half(k + s + 2)
        * _kinematic_shift(j, k, M)
        * alpha(n, j, k)
    )


@lru_cache(maxsize=None)
def tcm_coeff_c(n, j, k, s, i, m):
    """Coefficient c_{n,j,k}^{s,i,m} of the kinematic formula for tensorial curvature measures."""
    _check_njk(n, j, k)
    _check_sm(s, m)
    _require(i in (0, 1), f"i must be 0 or 1, got {i}.")
    if k == j:
        return ExactScalar(1 if (m == 0 and i == 0) else 0)
    binom = math.comb(m, i)
    if binom == 0:
        return ExactScalar(0)
    return (
        ExactScalar(Fraction(binom, math.factorial(m)))
        / FOUR_PI ** m
        / ExactScalar.pi(2 * i)
        * gamma_half(k + 2)
        / gamma_half(j + 2)
        * gamma_half(j + s - 2 * m + 2)
        / gamma_half(k + s + 2)
        * _kinematic_shift(j, k, m)
        * alpha(n, j, k)
    )


@lru_cache(maxsize=None)
def tcm_coeff_ebar(n, j, s):
    """e_{n,j}^s = 1{s even} / ((2 pi)^s (s/2)!) * Gamma((n-j+s)/2) / Gamma((n-j)/2) * omega_{n+s} / omega_n."""
    _require(0 <= j <= n, f"Need 0 <= j <= n, got n={n}, j={j}.")
    _require(s >= 0, f"s must be nonnegative, got {s}.")
    if s % 2:
        return ExactScalar(0)
    omega_ns, _ = sphere_constants(n + s)
    omega_n, _ = sphere_constants(n)
    return (
        ExactScalar(Fraction(1, math.factorial(s // 2)))
        / ExactScalar(2 ** s, 2 * s)
        * rgamma_ratio(n - j + s, n - j)
        * omega_ns
        / omega_n
    )


@lru_cache(maxsize=None)
def crofton_coeff_jk(n, k, s):
    """
    Coefficient of Q^(s/2) Phi_n^{r,0} in the Crofton formula for Phi_k^{r,s} over A(n,k):

        1{s even} / ((4 pi)^(s/2) (s/2)!) * Gamma(n/2) Gamma((n-k+s)/2) / (Gamma((n+s)/2) Gamma((n-k)/2))
    """
    _require(0 <= k <= n, f"Need 0 <= k <= n, got n={n}, k={k}.")
    _require(s >= 0, f"s must be nonnegative, got {s}.")
    if s % 2:
        return ExactScalar(0)
    half = s // 2
    return (
        ExactScalar(Fraction(1, math.factorial(half)))
        / FOUR_PI ** half
        * gamma_half(n)
        / gamma_half(n + s)
        * rgamma_ratio(n - k + s, n - k)
    )


@lru_cache(maxsize=None)
def kinematic_coeff_kn(n, j, s):
    """Closed form of e_{n,j,n}^{s,s/2,0} for even s: 1/((2 sqrt(pi))^s (s/2)!) Gamma(n/2)/Gamma((n+s)/2) Gamma((n-j+s)/2)/Gamma((n-j)/2)."""
    _require(0 <= j <= n, f"Need 0 <= j <= n, got n={n}, j={j}.")
    _require(s >= 0 and s % 2 == 0, f"The closed form needs an even s >= 0, got {s}.")
    return (
        ExactScalar(Fraction(1, 2 ** s * math.factorial(s // 2)), -s)
        * gamma_half(n)
        / gamma_half(n + s)
        * rgamma_ratio(n - j + s, n - j)
    )
