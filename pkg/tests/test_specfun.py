import math

import numpy as np
import pytest

from shiftsieve import specfun as sf

from .oracles import aell_unfold, bessel_modulus_oscillatory, k0_decimal


class TestZeta:
    def test_even_values_closed_form(self):
        assert sf.zeta(2).real == pytest.approx(math.pi**2 / 6, rel=1e-14)
        assert sf.zeta(4).real == pytest.approx(math.pi**4 / 90, rel=1e-14)

    def test_zeta3_against_tail_integral_oracle(self):
        n = 4000
        partial = math.fsum(k**-3 for k in range(1, n + 1))
        # integral sandwich: tail between 1/(2(n+1)^2) and 1/(2 n^2)
        low = partial + 0.5 / (n + 1) ** 2
        high = partial + 0.5 / n**2
        val = sf.zeta(3).real
        assert low - 1e-12 <= val <= high + 1e-12

    def test_zero_value(self):
        assert sf.zeta(0).real == pytest.approx(-0.5, abs=1e-12)

    def test_pole_guard(self):
        with pytest.raises(sf.PoleError):
            sf.zeta(1.0 + 1e-9)

    def test_conjugate_symmetry(self):
        s = complex(0.8, 13.0)
        assert sf.zeta(s.conjugate()) == pytest.approx(sf.zeta(s).conjugate(), rel=1e-12)


class TestGamma:
    def test_matches_real_lgamma(self):
        for x in (0.5, 1.0, 2.5, 11.0, 300.0):
            assert sf.clgamma(x).real == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-13)
            assert abs(sf.clgamma(x).imag) < 1e-13

    def test_integer_factorials(self):
        assert sf.cgamma(5).real == pytest.approx(24.0, rel=1e-13)

    def test_half_plus_it_modulus_closed_form(self):
        for t in (0.0, 0.5, 1.0, 5.0, 20.0):
            assert abs(sf.cgamma(complex(0.5, t))) == pytest.approx(
                sf.gamma_half_plus_it_abs(t), rel=1e-12
            )

    def test_reflection_near_pole(self):
        # Gamma(-1e-6) ~ -1/1e-6 - gamma_euler
        val = sf.cgamma(-1e-6)
        assert val.real == pytest.approx(-1e6 - 0.5772156649, rel=1e-9)

    def test_recursion(self):
        z = complex(1.3, 2.1)
        assert sf.cgamma(z + 1) == pytest.approx(z * sf.cgamma(z), rel=1e-12)


class TestBessel:
    def test_k0_against_decimal_series(self):
        for w in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
            assert sf.bessel_k_it(0.0, w) == pytest.approx(k0_decimal(w), abs=1e-12, rel=1e-10)

    def test_k0_at_one_pinned(self):
        assert sf.bessel_k_it(0.0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-10)

    def test_symmetry_in_t(self):
        for t in (0.5, 1.0, 7.0):
            assert sf.bessel_k_it(t, 2.0) == sf.bessel_k_it(-t, 2.0)

    def test_two_independent_quadratures_at_1_1(self):
        cosh_route = sf.bessel_k_it(1.0, 1.0)
        scaled_route = math.exp(-math.pi / 2) * sf.bessel_k_scaled(1.0, 1.0)
        assert cosh_route == pytest.approx(0.2894280370259921, rel=1e-10)
        assert abs(cosh_route - scaled_route) < 1e-8

    def test_modulus_against_oscillatory_oracle(self):
        for t, w in ((0.0, 1.0), (1.0, 1.0), (1.0, 0.5), (2.0, 1.5)):
            ours = abs(sf.bessel_k_it(t, w))
            oracle = bessel_modulus_oscillatory(t, w)
            assert ours == pytest.approx(oracle, rel=1e-8, abs=1e-10)

    def test_scaled_matches_cosh_for_moderate_order(self):
        for t in (0.0, 0.5, 2.0, 5.0, 8.0):
            for w in (0.1, 1.0, 3.0):
                a = sf.bessel_k_it(t, w)
                b = math.exp(-math.pi * t / 2) * sf.bessel_k_scaled(t, w)
                assert abs(a - b) <= 1e-9 * max(1.0, abs(a))

    def test_grid_matches_scalar(self):
        ts = np.array([0.0, 0.7, 3.0, 9.0])
        grid = sf.bessel_k_it_grid(ts, 1.3)
        for t, val in zip(ts, grid):
            assert val == pytest.approx(sf.bessel_k_it(float(t), 1.3), rel=1e-12, abs=1e-15)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            sf.bessel_k_it(0.0, 0.0)
        with pytest.raises(ValueError):
            sf.bessel_k_it(51.0, 1.0)


class TestBesselBound:
    def test_grid_ratios_below_envelope(self):
        worst = 0.0
        for t in (0, 1, 5):
            for w in (0.1, 1, 10):
                for a_exp in (0, 2):
                    chk = sf.bessel_bound_check(t, w, A=a_exp, eps=0.1)
                    assert math.isfinite(chk.ratio)
                    assert chk.holds
                    worst = max(worst, chk.ratio)
        assert worst <= sf.BESSEL_ENVELOPE

    def test_a0_eps0_is_gamma_normalized(self):
        chk = sf.bessel_bound_check(1.0, 1.0, A=0, eps=0.0)
        expected = abs(sf.bessel_k_it(1.0, 1.0)) / sf.gamma_half_plus_it_abs(1.0)
        assert chk.ratio == pytest.approx(expected, rel=1e-12)

    def test_large_w_decay(self):
        ratios = [sf.bessel_bound_check(1.0, w, A=0, eps=0.0).ratio for w in (1.0, 5.0, 20.0)]
        assert ratios[0] > ratios[1] > ratios[2]


class TestEisensteinFormulas:
    def test_theta_at_two(self):
        # pi^-2 Gamma(2) zeta(4) = pi^2/90
        assert sf.theta_s(2.0) == pytest.approx(math.pi**2 / 90, rel=1e-12)

    def test_phi_unit_modulus_on_critical_line(self):
        for t in (0.5, 1.0, 5.0):
            assert abs(sf.varphi_s(complex(0.5, t))) == pytest.approx(1.0, abs=1e-10)

    def test_phi_residue_three_over_pi(self):
        s = 1.0 + 1e-6
        val = (s - 1.0) * sf.varphi_s(s)
        assert abs(val - 3.0 / math.pi) < 1e-6

    def test_residue_limit_trend(self):
        deviations = []
        for j in (3, 4, 5):
            s = 1.0 + 10.0**-j
            deviations.append(abs((s - 1.0) * sf.varphi_s(s) - 3.0 / math.pi))
        assert deviations[0] > deviations[1] > deviations[2]

    def test_phi_equals_theta_quotient(self):
        for s in (complex(0.7, 0.3), complex(0.5, 2.0), complex(1.4, -1.1)):
            assert sf.varphi_s(s) == pytest.approx(
                sf.theta_s(1 - s) / sf.theta_s(s), rel=1e-11
            )

    def test_phi_finite_at_integer_points(self):
        # theta-quotient has a removable pole/zero pair here; phi is finite
        val = sf.varphi_s(2.0)
        expected = (
            math.sqrt(math.pi)
            * math.gamma(1.5)
            / math.gamma(2.0)
            * sf.zeta(3).real
            / sf.zeta(4).real
        )
        assert val.real == pytest.approx(expected, rel=1e-12)
        assert abs(val.imag) < 1e-14

    def test_varphi_ell_single_divisor(self):
        s = complex(0.7, 1.3)
        assert sf.varphi_ell(1, s) == pytest.approx(2.0 / sf.theta_s(s), rel=1e-12)

    def test_varphi_ell_divisor_sum(self):
        s = complex(0.6, 0.4)
        expected = (
            2.0
            / sf.theta_s(s)
            * sum((a / (6 // a)) ** (s - 0.5) for a in (1, 2, 3, 6))
        )
        assert sf.varphi_ell(6, s) == pytest.approx(expected, rel=1e-12)

    def test_pole_guards(self):
        with pytest.raises(sf.PoleError):
            sf.theta_s(0.5)
        with pytest.raises(sf.PoleError):
            sf.theta_s(0.0)


class TestMellin:
    def test_bump_shape(self):
        g = sf.DEFAULT_BUMP
        assert g(1.0) == 0.0 and g(2.0) == 0.0 and g(0.5) == 0.0
        assert g(1.5) == 1.0
        assert 0 < g(1.2) < 1

    def test_positive_on_reals(self, mellin):
        for sigma in (-2.0, -1.0, 0.0, 1.0, 2.0):
            val = mellin(sigma)
            assert val.real > 0 and abs(val.imag) < 1e-15

    def test_node_count_converged(self):
        coarse = sf.MellinTransform(nodes=512)
        fine = sf.MellinTransform(nodes=2048)
        for s in (complex(-1, 0), complex(-0.5, -10), complex(2, 25)):
            assert coarse(s) == pytest.approx(fine(s), rel=1e-10, abs=1e-13)

    def test_rapid_decay_envelope(self, mellin):
        # |G|(1+t)^A peaks near t ~ (A / c)^2 for the Gevrey-type bump;
        # calibrate through the peak, then check decay holds past it
        a_exp = 4
        c4 = mellin.measured_decay_constant(
            a_exp, sigmas=(-2, -0.5, 0, 2), ts=range(0, 151, 5)
        )
        assert math.isfinite(c4)
        for sigma in (-2.0, -0.5, 2.0):
            for t in (200.0, 260.0, 320.0):
                assert abs(mellin(complex(sigma, t))) <= c4 * (1 + t) ** -a_exp

    def test_values_at_matches_scalar(self, mellin):
        ss = np.array([complex(-0.5, -3.0), complex(1.0, 7.0)])
        vals = mellin.values_at(ss)
        for s, v in zip(ss, vals):
            assert v == pytest.approx(mellin(complex(s)), rel=1e-13)


class TestAell:
    def test_against_unfolding_oracle(self, mellin):
        for ell, y in ((1, 0.1), (2, 0.3)):
            ours = sf.a_ell_y(mellin, ell, y, tol=1e-7).real
            oracle = aell_unfold(ell, y, mellin.bump)
            assert abs(ours - oracle) < 5e-7

    def test_sign_of_shift_irrelevant(self, mellin):
        plus = sf.a_ell_y(mellin, 2, 0.2, tol=1e-6)
        minus = sf.a_ell_y(mellin, -2, 0.2, tol=1e-6)
        assert abs(plus) == pytest.approx(abs(minus), rel=1e-9)

    def test_imag_part_zero(self, mellin):
        assert sf.a_ell_y(mellin, 1, 0.25, tol=1e-6).imag == 0.0

    def test_large_ell_y_decay(self, mellin):
        # |l| y >= 10 squashes the coefficient far below 1e-6 sqrt(y)
        for ell, y in ((2, 5.0), (10, 1.0)):
            val = abs(sf.a_ell_y(mellin, ell, y, tol=1e-8))
            assert val < 1e-6 * math.sqrt(y)

    def test_validation(self, mellin):
        with pytest.raises(ValueError):
            sf.a_ell_y(mellin, 0, 0.5)
        with pytest.raises(ValueError):
            sf.a_ell_y(mellin, 1, 0.0)


class TestWWeight:
    def test_prefactor_exactly_one_at_zero_shift(self):
        for n in (1, 7, 1000):
            for k in (12, 100):
                assert sf.support_prefactor(n, 0, k) == 1.0

    def test_nonnegative_and_support(self):
        assert sf.w_weight(8, 1, 10.0, 100) >= 0.0
        # far outside support: Y(k-1)/(4 pi (n + l/2)) >> 2
        assert sf.w_weight(1, 0, 50.0, 500) == 0.0

    def test_two_resolutions_pinned(self):
        lo = sf.w_weight(8, 1, 10.0, 100, nodes=512)
        hi = sf.w_weight(8, 1, 10.0, 100, nodes=2048)
        assert lo == pytest.approx(3.212302580321752e-36, rel=1e-9)
        assert lo == pytest.approx(hi, rel=1e-8)
        peak_lo = sf.w_weight(53, 1, 10.0, 100, nodes=512)
        peak_hi = sf.w_weight(53, 1, 10.0, 100, nodes=2048)
        assert peak_lo == pytest.approx(0.8943782739653776, rel=1e-9)
        assert peak_lo == pytest.approx(peak_hi, rel=1e-8)

    def test_zero_shift_two_resolutions(self):
        # pure Laplace transform at l=0, stable across node counts
        lo = sf.w_weight(40, 0, 10.0, 50, nodes=512)
        hi = sf.w_weight(40, 0, 10.0, 50, nodes=2048)
        assert lo > 0 and lo == pytest.approx(hi, rel=1e-8)

    def test_contour_equivalence_small_weight(self, mellin):
        for (n, ell, y_par, k) in ((5, 1, 10.0, 12), (9, 2, 12.0, 16)):
            laplace = sf.w_weight(n, ell, y_par, k, bump=mellin.bump)
            contour = sf.w_weight_contour(n, ell, y_par, k, mellin=mellin)
            assert laplace == pytest.approx(contour, rel=1e-10)

    def test_main_term_peak_value(self):
        k, y_par = 200, 4.0
        # peak where Y(k-1)/(4 pi n) = 3/2
        n = round(y_par * (k - 1) / (4 * math.pi * 1.5))
        main, _ = sf.w_main_term(n, 0, y_par, k)
        rho = y_par * (k - 1) / (4 * math.pi * n)
        assert main == pytest.approx(sf.DEFAULT_BUMP(rho), rel=1e-14)

    def test_main_term_error_envelope(self):
        worst = 0.0
        for k in (50, 100, 500):
            for y_par in (1.0, 10.0):
                scale = y_par * (k - 1) / (4 * math.pi)
                n_lo = max(1, int(scale / 2 - 0.5) - 2)
                n_hi = int(scale - 0.5) + 3
                for n in range(n_lo, n_hi + 1):
                    w_val = sf.w_weight(n, 1, y_par, k)
                    main, env = sf.w_main_term(n, 1, y_par, k)
                    worst = max(worst, abs(w_val - main) / env)
        assert worst <= 5.0

    def test_validation(self):
        with pytest.raises(ValueError):
            sf.w_weight(0, 1, 10.0, 100)
        with pytest.raises(ValueError):
            sf.w_weight(5, 1, 0.5, 100)
        with pytest.raises(ValueError):
            sf.w_weight(5, 1, 10.0, 10)


class TestGammaRatio:
    def test_exact_zero_at_integers(self):
        for k in (12, 100, 10_000):
            assert sf.gamma_ratio_check(k, 0).error == 0.0
            assert sf.gamma_ratio_check(k, 1).error == 0.0

    def test_documented_grid_envelope(self):
        worst = 0.0
        for k in (100, 1000, 10_000):
            for s in (0.5, 1.0, complex(1, 1), 2.0, complex(1.1, 10)):
                chk = sf.gamma_ratio_check(k, s)
                worst = max(worst, chk.normalized)
        assert worst <= 3.0

    def test_k_1e4_complex_point(self):
        chk = sf.gamma_ratio_check(10_000, complex(1, 1))
        assert chk.normalized < 3.0
        assert chk.error == pytest.approx(7.071e-5, rel=1e-2)

    def test_error_shrinks_with_k(self):
        errs = [sf.gamma_ratio_check(k, complex(1, 1)).error for k in (100, 1000, 10_000)]
        assert errs[0] > errs[1] > errs[2]
