import math

import numpy as np
import pytest

from smoothlab import saddle, smooth


class TestSolveAlpha:
    def test_exact_solution_at_one(self):
        # log 2 / (2^alpha - 1) = log 2 forces 2^alpha = 2
        sp = saddle.solve_alpha(2, 2)
        assert sp.alpha == pytest.approx(1.0, abs=1e-9)
        assert abs(sp.residual) < 1e-8

    def test_closed_form_x4_y2(self):
        # 2^alpha - 1 = 1/2, so alpha = log2(3/2)
        sp = saddle.solve_alpha(4, 2, tol=1e-12)
        assert sp.alpha == pytest.approx(math.log2(1.5), abs=1e-10)

    def test_decreasing_in_x(self):
        assert saddle.solve_alpha(10**6, 100).alpha < saddle.solve_alpha(10**4, 100).alpha

    def test_increasing_in_y(self):
        assert saddle.solve_alpha(10**6, 1000).alpha > saddle.solve_alpha(10**6, 100).alpha

    def test_residual_within_tolerance(self):
        for x, y in ((100, 10), (10**5, 50), (10**6, 997)):
            sp = saddle.solve_alpha(x, y, tol=1e-10)
            assert abs(sp.residual) < 1e-6

    def test_alpha_beyond_one_for_tiny_x(self):
        # sum_p log p / (p^2 - 1) < log 2, so the bracket holds for any
        # x >= 2 and tiny x legitimately lands above 1
        sp = saddle.solve_alpha(2, 10**6)
        assert 1.0 < sp.alpha <= 2.0

    def test_input_validation(self):
        with pytest.raises(ValueError):
            saddle.solve_alpha(1, 10)


class TestAlphaEmpirical:
    def test_full_set_gives_one(self):
        s = smooth.smooth_set(smooth.build_sieve(500), 500)
        assert saddle.alpha_empirical(s) == pytest.approx(1.0)

    def test_psi_100_5(self, sieve10k):
        s = smooth.smooth_set(sieve10k, 5)
        restricted = smooth.SmoothSet(100, 5, s.members[s.members <= 100])
        assert saddle.alpha_empirical(restricted) == pytest.approx(
            math.log(34) / math.log(100), abs=1e-12
        )

    def test_small_N_rejected(self):
        bad = smooth.SmoothSet(1, 2, np.array([1], dtype=np.int64))
        with pytest.raises(ValueError):
            saddle.alpha_empirical(bad)

    def test_gap_to_saddle_value(self, sieve10k):
        # the two alpha notions measurably split at desk scale; the gap at
        # N=1e4, y=100 sits near 0.17 (it widens to 0.21 by N=1e6)
        s = smooth.smooth_set(sieve10k, 100)
        emp = saddle.alpha_empirical(s)
        sad = saddle.solve_alpha(10**4, 100).alpha
        assert 0.5 < sad < emp < 1.0
        assert abs(emp - sad) < 0.25


class TestGq:
    def test_empty_product(self):
        assert saddle.g_q(1, 0.5) == 1.0

    def test_q12_s1(self):
        assert saddle.g_q(12, 1.0) == pytest.approx(1 / 3, rel=1e-12)

    def test_multiplicative_on_coprime_pairs(self):
        for q1 in range(1, 201):
            for q2 in range(1, 200 // q1 + 1):
                if math.gcd(q1, q2) == 1:
                    assert saddle.g_q(q1 * q2, 0.7) == pytest.approx(
                        saddle.g_q(q1, 0.7) * saddle.g_q(q2, 0.7), rel=1e-12
                    )

    def test_validation(self):
        with pytest.raises(ValueError):
            saddle.g_q(0, 0.5)
        with pytest.raises(ValueError):
            saddle.g_q(4, 0.0)


class TestBtRatio:
    def test_q_one_exact(self, sieve10k):
        s = smooth.smooth_set(sieve10k, 100)
        assert saddle.bt_ratio(s, 1, 0.7) == 1.0

    def test_non_smooth_q_rejected(self, sieve10k):
        s = smooth.smooth_set(sieve10k, 5)
        with pytest.raises(ValueError, match="smooth"):
            saddle.bt_ratio(s, 7, 0.7)

    def test_band_at_desk_scale(self, sieve10k):
        s = smooth.smooth_set(sieve10k, 100)
        alpha = saddle.solve_alpha(10**4, 100).alpha
        for q in range(1, 31):
            assert 0.5 <= saddle.bt_ratio(s, q, alpha) <= 2.0


class TestCwConstant:
    def test_empty_product(self):
        assert saddle.c_w_constant(1, 0.5) == 1.0

    def test_w2_half(self):
        assert saddle.c_w_constant(2, 0.5) == pytest.approx(0.5 / (1 - 2**-0.5), rel=1e-12)

    def test_exceeds_one_below_alpha_one(self):
        # every factor (1 - 1/p)/(1 - p^-alpha) > 1 for alpha < 1
        for W in (2, 6, 30, 210):
            for alpha in (0.1, 0.3, 0.5, 0.7, 0.9):
                assert saddle.c_w_constant(W, alpha) > 1.0

    def test_growth_scale_value(self):
        expected = math.exp(2**0.5 / math.log(2)) / math.log(2)
        assert saddle.c_w_growth_scale(2, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_growth_scale_needs_primes(self):
        with pytest.raises(ValueError):
            saddle.c_w_growth_scale(1, 0.5)


class TestGammaRq:
    def test_trivial_frame(self):
        assert saddle.gamma_rq(0, 1, 1, 1, 0.5) == pytest.approx(1.0)

    def test_w_smooth_q_telescopes(self):
        # every prime of q divides W, so d = 1 and the two products cancel
        for r in range(12):
            assert saddle.gamma_rq(r, 12, 6, 1, 0.4) == pytest.approx(1.0, rel=1e-12)
        for r in range(8):
            assert saddle.gamma_rq(r, 8, 2, 1, 0.7) == pytest.approx(1.0, rel=1e-12)

    def test_vector_matches_scalar(self):
        for q in (1, 2, 9, 30, 97):
            vec = saddle.gamma_vector(q, 6, 5, 0.45)
            for r in range(q):
                assert vec[r] == pytest.approx(saddle.gamma_rq(r, q, 6, 5, 0.45), rel=1e-12)

    def test_bounded_by_q(self):
        for W, b2 in ((2, 1), (6, 5), (30, 7)):
            for q in range(1, 101):
                vec = saddle.gamma_vector(q, W, b2, 0.3)
                assert np.all(vec <= q + 1e-12)
