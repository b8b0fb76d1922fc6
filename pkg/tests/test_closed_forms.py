"""Closed-form layer: frozen values, finite-difference oracles, and the
equality of the a=2 special forms with the general-a ones."""

import math

import numpy as np
import pytest

from conftest import central_diff, central_diff2
from gdwell import ConvergenceDomainError, PotentialParams
from gdwell.closed_forms import (
    eval_ghat,
    eval_potential,
    eval_S0,
    eval_S0_mirror,
    eval_S0_prime,
    eval_S1,
    eval_S1_prime,
    eval_S1_prime_quotient,
    eval_u,
    eval_w,
)

P12 = PotentialParams(1.0, 2.0)


# a=2 special forms, written out independently of the package code paths
def s0_a2(x):
    return 0.25 * x * (x * x - 1.0) * np.sqrt(x * x + 2.0) - 1.5 * np.log(
        x + np.sqrt(x * x + 2.0)
    )


def s1_a2(x):
    r3 = np.sqrt(3.0 * (x * x + 2.0))
    return (
        np.log(x + 1.0)
        + 0.25 * np.log(x * x + 2.0)
        + 0.5 * np.log((2.0 + x + r3) / (2.0 - x + r3))
    )


def u_a2(x):
    x2 = x * x
    num = 25.0 * x2**4 + 150.0 * x2**3 + 393.0 * x2**2 + 408.0 * x2 + 144.0
    A = 5.0 * x2**3 + 10.0 * x2**2 + 21.0 * x2 + 12.0
    B = 8.0 * math.sqrt(3.0) * x * (x2 + 1.0) * np.sqrt(x2 + 2.0)
    return 0.375 * num / ((x2 + 2.0) ** 2 * (A + B))


class TestParams:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            PotentialParams(0.0, 2.0)
        with pytest.raises(ValueError):
            PotentialParams(1.0, -1.0)

    def test_derived_constants(self):
        assert P12.E0 == math.sqrt(3.0)
        assert P12.E0**2 - 1.0 == pytest.approx(P12.a, abs=1e-15)
        assert P12.a_g == pytest.approx((1.0 + math.sqrt(5.0)) / 2.0, abs=1e-15)

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.7, 10.0])
    def test_e0_squared_is_one_plus_a(self, a):
        p = PotentialParams(1.3, a)
        assert p.E0**2 - 1.0 == pytest.approx(a, abs=4e-15 * (1 + a))

    def test_gamma_sign_threshold(self):
        # Gamma > 0 iff g > sqrt(1+a)/a
        thr = math.sqrt(3.0) / 2.0
        assert PotentialParams(thr * 1.01, 2.0).Gamma > 0.0
        assert PotentialParams(thr * 0.99, 2.0).Gamma < 0.0


class TestPotential:
    def test_roots_and_origin(self):
        assert eval_potential(P12, 1.0) == 0.0
        assert eval_potential(P12, -1.0) == 0.0
        assert eval_potential(P12, 0.0) == 1.0

    def test_expansion_a2(self):
        # expanded product: (x^6 - 3x^2 + 2)/2; spot value at x=2 is 27
        x = np.linspace(-3.0, 3.0, 601)
        np.testing.assert_allclose(
            eval_potential(P12, x), (x**6 - 3.0 * x**2 + 2.0) / 2.0, rtol=1e-13,
            atol=1e-12,
        )
        assert eval_potential(P12, 2.0) == pytest.approx(27.0, abs=1e-12)

    def test_even(self):
        x = np.linspace(0.0, 4.0, 97)
        np.testing.assert_array_equal(eval_potential(P12, x), eval_potential(P12, -x))


class TestS0:
    def test_frozen_values_a2(self):
        assert eval_S0(P12, 1.0) == pytest.approx(-1.5 * math.log(1.0 + math.sqrt(3.0)), abs=1e-14)
        assert eval_S0(P12, 0.0) == pytest.approx(-0.75 * math.log(2.0), abs=1e-14)

    def test_matches_a2_closed_form(self):
        x = np.linspace(0.0, 4.0, 1000)
        np.testing.assert_allclose(eval_S0(P12, x), s0_a2(x), rtol=1e-12, atol=1e-14)

    def test_derivative_fd_oracle(self):
        x = np.linspace(0.0, 4.0, 1000)[1:]
        h = 1e-5
        fd = central_diff(lambda t: eval_S0(P12, t), x, h)
        exact = eval_S0_prime(P12, x)
        scale = np.maximum(np.abs(exact), 1e-3)
        assert float(np.max(np.abs(fd - exact) / scale)) <= 1e-6

    def test_mirror_sum_rule(self):
        # the two branches sum to a constant because the log arguments
        # multiply to a
        x = np.linspace(0.0, 4.0, 200)
        s = eval_S0(P12, x) + eval_S0_mirror(P12, x)
        np.testing.assert_allclose(s, 2.0 * eval_S0(P12, 0.0), rtol=0, atol=1e-12)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            eval_S0(P12, -0.5)


class TestS1:
    def test_value_at_origin_a2(self):
        assert eval_S1(P12, 0.0) == pytest.approx(0.25 * math.log(2.0), abs=1e-14)

    def test_matches_a2_closed_form(self):
        x = np.linspace(0.0, 4.0, 800)
        np.testing.assert_allclose(eval_S1(P12, x), s1_a2(x), rtol=1e-12, atol=1e-14)

    def test_derivative_fd_oracle(self):
        x = np.linspace(0.0, 4.0, 1000)
        x = x[np.abs(x - 1.0) >= 0.01][1:]
        fd = central_diff(lambda t: eval_S1(P12, t), x, 1e-5)
        exact = eval_S1_prime(P12, x)
        assert float(np.max(np.abs(fd - exact) / np.abs(exact))) <= 1e-6

    def test_conjugate_equals_quotient(self):
        x = np.linspace(0.05, 4.0, 777)
        x = x[np.abs(x - 1.0) > 1e-3]
        np.testing.assert_allclose(
            eval_S1_prime(P12, x), eval_S1_prime_quotient(P12, x), rtol=1e-12
        )

    def test_removable_point(self):
        # limit from both sides matches the closed value (a+3)/(2(a+1))
        for a in (0.7, 2.0, 5.0):
            p = PotentialParams(2.0, a)
            lim = 0.5 * (
                eval_S1_prime_quotient(p, 1.0 - 1e-6) + eval_S1_prime_quotient(p, 1.0 + 1e-6)
            )
            val = float(eval_S1_prime(p, 1.0))
            assert val == pytest.approx((a + 3.0) / (2.0 * (a + 1.0)), rel=1e-12)
            assert val == pytest.approx(lim, rel=1e-9)

    def test_quotient_refuses_the_singular_point(self):
        with pytest.raises(ValueError):
            eval_S1_prime_quotient(P12, 1.0)


class TestU:
    def test_frozen_value_at_origin(self):
        assert eval_u(P12, 0.0) == pytest.approx(9.0 / 8.0, abs=1e-14)

    def test_matches_a2_closed_form(self):
        x = np.linspace(0.0, 4.0, 1500)
        np.testing.assert_allclose(eval_u(P12, x), u_a2(x), rtol=1e-12)

    def test_defining_combination_fd_oracle(self):
        # u must equal (S1'^2 - S1'')/2 with S1'' from finite differences
        x = np.linspace(0.05, 4.0, 400)
        x = x[np.abs(x - 1.0) > 0.05]
        h = 1e-4
        s1p = eval_S1_prime(P12, x)
        s1pp = central_diff2(lambda t: eval_S1(P12, t), x, h)
        u_fd = 0.5 * (s1p**2 - s1pp)
        exact = eval_u(P12, x)
        assert float(np.max(np.abs(u_fd - exact) / np.abs(exact))) <= 1e-5

    @pytest.mark.parametrize("a", [0.1, 0.664, 1.0, 2.0, 3.0, 10.0])
    def test_positive_everywhere(self, a):
        p = PotentialParams(1.0, a)
        x = np.linspace(0.0, 6.0, 4000)
        assert float(eval_u(p, x).min()) > 0.0

    def test_decays_at_infinity(self):
        assert float(eval_u(P12, 1e3)) < 1e-5


class TestGhatAndW:
    def test_value_at_origin(self):
        expect = P12.g * P12.E0 * 2.0 * P12.Gamma / (1.0 + P12.Gamma)
        got = float(eval_ghat(P12, 0.0))
        assert got == pytest.approx(expect, rel=1e-14)
        assert got == pytest.approx(0.23204, abs=2e-5)

    def test_zero_beyond_the_well(self):
        assert float(eval_ghat(P12, 1.5)) == 0.0

    def test_monotone_decreasing_inside(self):
        x = np.linspace(0.0, 1.0, 500)
        gh = eval_ghat(P12, x)
        assert float(np.diff(gh).max()) < 0.0

    def test_requires_positive_mixing(self):
        bad = PotentialParams(0.5, 2.0)
        with pytest.raises(ConvergenceDomainError):
            eval_ghat(bad, 0.5)

    def test_w_reduces_to_u_outside(self):
        assert float(eval_w(P12, 2.0)) == float(eval_u(P12, 2.0))

    def test_w_at_origin(self):
        expect = 9.0 / 8.0 + P12.g * P12.E0 * 2.0 * P12.Gamma / (1.0 + P12.Gamma)
        assert float(eval_w(P12, 0.0)) == pytest.approx(expect, rel=1e-14)
        assert float(eval_w(P12, 0.0)) == pytest.approx(1.35704, abs=2e-5)

    def test_w_decreasing_above_critical_shape(self):
        p = PotentialParams(1.0, 1.8)
        for seg in (np.linspace(0.0, 1.0, 2000), np.linspace(1.0 + 1e-9, 6.0, 2000)):
            assert float(np.diff(eval_w(p, seg)).max()) < 0.0
