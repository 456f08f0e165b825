import math
from fractions import Fraction
from unittest import mock

from django.test import SimpleTestCase

from .checks import COEFFICIENT_CHECKS, check_reconstruction, index_grid
from .exact import ExactScalar, gamma_half, rgamma_ratio, sphere_constants
from .formulas import (
    alpha, crofton_coeff_jk, kf_coeff_e, kf_coeff_e_generic, kinematic_coeff_kn,
    tcm_coeff_c, tcm_coeff_ebar,
)

PI = ExactScalar.pi()


class ExactScalarTests(SimpleTestCase):

    def test_monomial_arithmetic(self):
        a = ExactScalar(Fraction(3, 4), 1)
        b = ExactScalar(2, -1)
        self.assertEqual(a * b, ExactScalar(Fraction(3, 2)))
        self.assertEqual(a / a, 1)
        self.assertEqual(a + a, ExactScalar(Fraction(3, 2), 1))
        self.assertTrue((a - a).is_zero)

    def test_mixed_pi_powers_stay_exact(self):
        total = PI + 1
        self.assertFalse(total.is_monomial)
        self.assertEqual(total - PI, 1)
        self.assertAlmostEqual(float(total), math.pi + 1)
        with self.assertRaises(ValueError):
            total.q
        with self.assertRaises(ValueError):
            1 / total

    def test_powers(self):
        self.assertEqual(PI ** 2, ExactScalar(1, 4))
        self.assertEqual(ExactScalar(2, 1) ** -2, ExactScalar(Fraction(1, 4), -2))

    def test_float_is_monotone_in_q(self):
        values = [float(ExactScalar(Fraction(q, 7), 3)) for q in range(-5, 6)]
        self.assertEqual(values, sorted(values))

    def test_report_form(self):
        x = ExactScalar(Fraction(-3, 8), -2)
        data = x.to_dict()
        self.assertEqual((data['num'], data['den'], data['piHalfPow']), ('-3', '8', -2))
        self.assertAlmostEqual(data['value'], -3 / (8 * math.pi))
        self.assertEqual(ExactScalar.from_dict(data), x)
        self.assertEqual(ExactScalar.from_dict((PI + 1).to_dict()), PI + 1)

    def test_rejects_floats(self):
        with self.assertRaises(TypeError):
            ExactScalar(1) + 0.5


class GammaTests(SimpleTestCase):

    def test_known_values(self):
        self.assertEqual(gamma_half(1), ExactScalar(1, 1))
        self.assertEqual(gamma_half(6), 2)
        self.assertEqual(gamma_half(5), ExactScalar(Fraction(3, 4), 1))

    def test_matches_float_gamma(self):
        for two_arg in range(1, 25):
            self.assertAlmostEqual(float(gamma_half(two_arg)) / math.gamma(two_arg / 2), 1.0, places=12)

    def test_nonpositive_argument(self):
        for bad in (0, -1, -4):
            with self.assertRaises(ValueError):
                gamma_half(bad)

    def test_ratio_conventions(self):
        self.assertEqual(rgamma_ratio(4, 0), 0)
        self.assertEqual(rgamma_ratio(0, 0), 1)
        self.assertEqual(rgamma_ratio(2, 2), 1)
        self.assertEqual(rgamma_ratio(-2, 0), -1)
        self.assertEqual(rgamma_ratio(-1, 1), -2)
        with self.assertRaises(ValueError):
            rgamma_ratio(0, 3)

    def test_sphere_constants(self):
        omega2, kappa2 = sphere_constants(2)
        self.assertEqual(omega2, ExactScalar(2, 2))
        self.assertEqual(kappa2, PI)
        self.assertEqual(sphere_constants(3)[1], ExactScalar(Fraction(4, 3), 2))
        self.assertEqual(sphere_constants(4)[0], ExactScalar(2, 4))
        with self.assertRaises(ValueError):
            sphere_constants(0)


class AlphaTests(SimpleTestCase):

    def test_values(self):
        self.assertEqual(alpha(2, 0, 1), ExactScalar(2, -2))
        self.assertEqual(alpha(3, 1, 2), ExactScalar(Fraction(1, 4), 2))
        for n in range(1, 7):
            for j in range(n + 1):
                self.assertEqual(alpha(n, j, j), 1)

    def test_integer_pi_power(self):
        for n in range(1, 7):
            for k in range(n + 1):
                for j in range(k + 1):
                    a = alpha(n, j, k)
                    self.assertTrue(a.is_monomial)
                    self.assertEqual(a.pi_half_pow % 2, 0)

    def test_index_violation(self):
        with self.assertRaises(ValueError):
            alpha(2, 2, 1)
        with self.assertRaises(ValueError):
            alpha(2, 0, 3)


class CoefficientIdentityTests(SimpleTestCase):
    """Exact identities of the kinematic and Crofton coefficients."""

    def index_grid(self, n_max=5, s_max=6):
        for n in range(1, n_max + 1):
            for k in range(n + 1):
                for j in range(k + 1):
                    for s in range(s_max + 1):
                        yield n, j, k, s

    def test_diagonal_coefficients(self):
        for n, j, k, s in self.index_grid():
            if j != k:
                continue
            for m in range(s // 2 + 1):
                self.assertEqual(kf_coeff_e(n, j, j, s, m, 0), 1 if m == 0 else 0)
                for p in range(1, 4):
                    self.assertEqual(kf_coeff_e(n, j, j, s, m, p), 0)
                for i in (0, 1):
                    self.assertEqual(tcm_coeff_c(n, j, j, s, i, m), 1 if m == i == 0 else 0)

    def test_scalar_case_reduces_to_alpha(self):
        for n, j, k, s in self.index_grid(s_max=0):
            self.assertEqual(kf_coeff_e(n, j, k, 0, 0, 0), alpha(n, j, k))
            self.assertEqual(tcm_coeff_c(n, j, k, 0, 0, 0), alpha(n, j, k))
            for p in range(1, 4):
                self.assertEqual(kf_coeff_e(n, j, k, 0, 0, p), 0)

    def test_c_vanishes_for_i1_m0(self):
        for n, j, k, s in self.index_grid():
            self.assertEqual(tcm_coeff_c(n, j, k, s, 1, 0), 0)

    def test_ebar_values(self):
        self.assertEqual(tcm_coeff_ebar(2, 0, 2), ExactScalar(Fraction(1, 4), -2))
        for n in range(1, 6):
            for j in range(n + 1):
                self.assertEqual(tcm_coeff_ebar(n, j, 0), 1)
                self.assertEqual(tcm_coeff_ebar(n, j, 3), 0)

    def test_k_equals_n_closed_form(self):
        for n in range(1, 7):
            for j in range(n):
                for s in range(0, 9, 2):
                    e = kf_coeff_e(n, j, n, s, s // 2, 0)
                    self.assertEqual(e, kinematic_coeff_kn(n, j, s))
                    self.assertEqual(e, tcm_coeff_ebar(n, j, s))

    def test_crofton_diagonal_coefficient_matches_ebar(self):
        self.assertEqual(crofton_coeff_jk(2, 1, 2), ExactScalar(Fraction(1, 8), -2))
        for n in range(1, 6):
            for k in range(n + 1):
                for s in range(7):
                    self.assertEqual(crofton_coeff_jk(n, k, s), tcm_coeff_ebar(n, k, s))

    def test_last_m_agrees_with_generic_formula_for_even_s(self):
        for n, j, k, s in self.index_grid():
            if j < k and s % 2 == 0:
                self.assertEqual(kf_coeff_e(n, j, k, s, s // 2, 0), kf_coeff_e_generic(n, j, k, s, s // 2))

    def test_zero_j_indicator(self):
        for n in range(1, 6):
            for k in range(1, n + 1):
                for s in range(1, 7):
                    for m in range(s // 2):
                        self.assertEqual(kf_coeff_e(n, 0, k, s, m, 0), 0)

    def test_translation_invariant_reconstruction(self):
        for n, j, k, s in self.index_grid():
            if not 0 < j < k < n:
                continue
            for m in range(s // 2):
                rebuilt = (
                    tcm_coeff_c(n, j, k, s, 0, m)
                    + ExactScalar(Fraction(2, k), 2) * tcm_coeff_c(n, j, k, s, 1, m)
                    - ExactScalar(Fraction(4 * (s - 2 * m), k), 4) * tcm_coeff_c(n, j, k, s, 1, m + 1)
                )
                self.assertEqual(kf_coeff_e(n, j, k, s, m, 0), rebuilt)

    def test_general_reconstruction(self):
        for n, j, k, s in self.index_grid():
            if not 0 < j < k < n:
                continue
            for p in range(1, 4):
                for m in range(s // 2):
                    rebuilt = ExactScalar(Fraction(2, k), 2) * (
                        tcm_coeff_c(n, j, k, s, 1, m)
                        - ExactScalar(2 * (s - 2 * m + p), 2) * tcm_coeff_c(n, j, k, s, 1, m + 1)
                    )
                    self.assertEqual(kf_coeff_e(n, j, k, s, m, p), rebuilt)
                M = s // 2
                self.assertEqual(
                    kf_coeff_e(n, j, k, s, M, p),
                    ExactScalar(Fraction(2, k), 2) * tcm_coeff_c(n, j, k, s, 1, M),
                )

    def test_last_m_reconstruction(self):
        for n, j, k, s in self.index_grid():
            if not 0 < j < k < n:
                continue
            M = s // 2
            rebuilt = tcm_coeff_c(n, j, k, s, 0, M) + ExactScalar(Fraction(2, k), 2) * tcm_coeff_c(n, j, k, s, 1, M)
            self.assertEqual(kf_coeff_e(n, j, k, s, M, 0), rebuilt)

    def test_coefficients_are_monomials(self):
        for n, j, k, s in self.index_grid():
            for m in range(s // 2 + 1):
                for p in range(4):
                    self.assertTrue(kf_coeff_e(n, j, k, s, m, p).is_monomial)

    def test_index_violations(self):
        with self.assertRaises(ValueError):
            kf_coeff_e(2, 0, 1, 2, 2, 0)
        with self.assertRaises(ValueError):
            kf_coeff_e(2, 0, 1, 2, 0, -1)
        with self.assertRaises(ValueError):
            tcm_coeff_c(2, 0, 1, 2, 2, 0)
        with self.assertRaises(ValueError):
            tcm_coeff_ebar(2, 3, 0)


class CoefficientCheckTests(SimpleTestCase):

    def test_identity_suite_passes(self):
        for check in COEFFICIENT_CHECKS:
            summary = check()
            self.assertGreater(summary['checked'], 0, summary['name'])
            self.assertEqual(summary['failed'], 0, summary['errors'])

    def test_index_grid_respects_ordering(self):
        for n, j, k, s in index_grid(3, 2):
            self.assertTrue(0 <= j <= k <= n)
            self.assertLessEqual(s, 2)

    def test_perturbed_coefficient_is_reported(self):
        def perturbed(n, j, k, s, m, p):
            value = kf_coeff_e(n, j, k, s, m, p)
            return value + ExactScalar(Fraction(1, 10 ** 6)) if (n, j, k) == (3, 1, 2) else value

        with mock.patch('coefficients.checks.kf_coeff_e', perturbed):
            summary = check_reconstruction(n_max=3, s_max=2)
        self.assertGreater(summary['failed'], 0)
        self.assertLessEqual(len(summary['errors']), 5)
        self.assertIn('e[3,1,2]', summary['errors'][0])
