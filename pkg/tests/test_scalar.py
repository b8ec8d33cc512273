"""Scalar kernel tests.

Expected values were computed with the independent oracles in this file
(Richardson-extrapolated central differences and Taylor expansion in
50-digit mpmath arithmetic) and frozen as literals; the oracles rerun
here so drift in either side is caught.
"""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf, exp as mpexp, binomial as mpbinom

from silunets.errors import CapacityError, DegenerateShiftError, DomainError
from silunets.scalar import (
    DerivPolyTable,
    leading_coeff_monomial,
    leading_coeff_square,
    residual_coeff_monomial,
    residual_coeff_square,
    sigmoid,
    sigmoid_deriv,
    silu,
    silu_shift_coeff,
    verify_cauchy_bound,
)

mp.dps = 50


def mp_sigmoid(x):
    return 1 / (1 + mpexp(-x))


def fd_sigmoid_deriv(n, a, h=mpf("1e-4")):
    """Richardson-extrapolated central difference for sigma^(n)(a)."""

    def central(step):
        s = mpf(0)
        for i in range(n + 1):
            s += (-1) ** i * mpbinom(n, i) * mp_sigmoid(mpf(a) + (mpf(n) / 2 - i) * step)
        return s / step**n

    d1, d2 = central(h), central(h / 2)
    return float((4 * d2 - d1) / 3)


class TestSigmoidSilu:
    def test_values(self):
        assert sigmoid(0.0) == 0.5
        assert sigmoid(-3.0) == pytest.approx(0.04742587317756678, abs=1e-16)
        assert silu(0.0) == 0.0

    def test_extreme_arguments_do_not_overflow(self):
        assert sigmoid(-800.0) == 0.0
        assert sigmoid(800.0) == 1.0
        assert silu(-800.0) == 0.0
        assert silu(800.0) == 800.0

    @given(st.floats(min_value=-30, max_value=30, allow_nan=False))
    def test_silu_difference_identity(self, x):
        # silu(x) - silu(-x) = x(sigma(x) + sigma(-x)) = x
        assert silu(x) - silu(-x) == pytest.approx(x, abs=1e-13, rel=1e-13)

    @given(st.floats(min_value=-50, max_value=50, allow_nan=False))
    def test_sigmoid_bounds_and_symmetry(self, x):
        s = sigmoid(x)
        assert 0.0 <= s <= 1.0
        assert s + sigmoid(-x) == pytest.approx(1.0, abs=1e-15)


class TestDerivPolyTable:
    def test_base_cases(self):
        t = DerivPolyTable(4)
        assert t.coefficients(0) == (0, 1)
        assert t.coefficients(1) == (0, 1, -1)

    def test_degree_and_coefficient_sum(self):
        t = DerivPolyTable(20)
        for n in range(21):
            coeffs = t.coefficients(n)
            assert len(coeffs) == n + 2  # degree n + 1
            if n >= 1:
                assert sum(coeffs) == 0  # p_n(1) = 0

    def test_order_cap(self):
        t = DerivPolyTable(6)
        with pytest.raises(CapacityError):
            t.coefficients(7)

    def test_against_fd_oracle(self):
        # relative agreement with the Richardson oracle for n <= 6
        for n in range(7):
            for a in (-2.0, -0.5, 0.0, 1.0, 3.0):
                want = fd_sigmoid_deriv(n, a)
                got = sigmoid_deriv(n, a)
                assert got == pytest.approx(want, rel=1e-6, abs=1e-12)

    def test_frozen_values(self):
        assert sigmoid_deriv(3, 0.0) == pytest.approx(-0.125, abs=1e-15)
        assert sigmoid_deriv(5, 0.0) == pytest.approx(0.25, abs=1e-15)
        # Horner at s = sigma(1) cancels at the 1e-13 level for n = 6
        assert sigmoid_deriv(4, 1.0) == pytest.approx(0.12350686136639322, rel=1e-11)
        assert sigmoid_deriv(6, 1.0) == pytest.approx(-0.2834339085296221, rel=1e-11)


class TestShiftCoefficients:
    def test_low_orders(self):
        assert silu_shift_coeff(0, 0.0) == 0.0
        assert silu_shift_coeff(1, 0.0) == pytest.approx(0.5, abs=1e-15)
        assert silu_shift_coeff(2, 0.0) == pytest.approx(0.25, abs=1e-15)

    def test_frozen_shift_value(self):
        # oracle: x^3 Taylor coefficient of silu(x + 1), 50-digit arithmetic
        assert silu_shift_coeff(3, 1.0) == pytest.approx(
            -0.051316470589180145, abs=1e-15
        )

    def test_taylor_partial_sum_tracks_function(self):
        # partial sums of silu(x + a) around 0 reproduce the function
        for a in (0.0, 1.0, -1.5):
            xs = np.linspace(-0.3, 0.3, 61)
            acc = np.zeros_like(xs)
            for n in range(14):
                acc += silu_shift_coeff(n, a) * xs**n
            want = np.array([silu(x + a) for x in xs])
            np.testing.assert_allclose(acc, want, atol=1e-10)

    def test_rejects_negative_order(self):
        with pytest.raises(DomainError):
            silu_shift_coeff(-1, 0.0)


class TestLeadingCoefficients:
    def test_square_at_zero(self):
        assert leading_coeff_square(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_square_frozen_at_one(self):
        assert leading_coeff_square(1.0) == pytest.approx(
            0.3023661188100153, abs=1e-15
        )

    def test_monomial_consistency_with_square(self):
        for a in (-1.0, 0.0, 0.7, 2.0):
            assert leading_coeff_monomial(2, a) == pytest.approx(
                leading_coeff_square(a), abs=1e-15
            )

    def test_odd_degree_vanishes_at_zero_shift(self):
        for m in (3, 5, 7):
            assert leading_coeff_monomial(m, 0.0) == 0.0

    def test_frozen_values(self):
        assert leading_coeff_monomial(3, 1.0) == pytest.approx(
            -0.30789882353508086, abs=1e-14
        )
        assert leading_coeff_monomial(4, 1.0) == pytest.approx(
            -0.01779546069854937, abs=1e-14
        )

    def test_square_root_location_by_bisection(self):
        # the square leading coefficient changes sign once on [2, 2.5]
        lo, hi = 2.0, 2.5
        assert leading_coeff_square(lo) > 0 > leading_coeff_square(hi)
        for _ in range(80):
            mid = (lo + hi) / 2
            if leading_coeff_square(lo) * leading_coeff_square(mid) <= 0:
                hi = mid
            else:
                lo = mid
        root = (lo + hi) / 2
        assert root == pytest.approx(2.3993572805154675, abs=1e-9)
        assert abs(leading_coeff_square(root)) < 1e-12


class TestResidualCoefficients:
    def test_square_first_residual_is_minus_one_twelfth(self):
        # oracle: Taylor x^4 coefficient of silu(x)+silu(-x), normalized
        assert residual_coeff_square(2, 0.0) == pytest.approx(-1.0 / 12, abs=1e-15)

    def test_square_second_residual(self):
        assert residual_coeff_square(3, 0.0) == pytest.approx(1.0 / 120, abs=1e-15)

    def test_monomial_matches_square_at_degree_two(self):
        for a in (0.0, 1.0, -0.8):
            assert residual_coeff_monomial(2, 4, a) == pytest.approx(
                residual_coeff_square(2, a), rel=1e-13
            )
            assert residual_coeff_monomial(2, 6, a) == pytest.approx(
                residual_coeff_square(3, a), rel=1e-13
            )

    def test_parity_cancellation(self):
        # node symmetry kills every residual with n - m odd
        assert residual_coeff_monomial(4, 5, 1.0) == 0.0
        assert residual_coeff_monomial(3, 6, 1.0) == 0.0
        assert residual_coeff_monomial(5, 8, 1.0) == 0.0

    def test_frozen_surviving_residuals(self):
        assert residual_coeff_monomial(3, 5, 1.0) == pytest.approx(
            -0.2299831500666927, rel=1e-12
        )
        assert residual_coeff_monomial(4, 6, 0.0) == pytest.approx(-0.5, rel=1e-12)

    def test_degenerate_shift_rejected(self):
        with pytest.raises(DegenerateShiftError):
            residual_coeff_monomial(3, 5, 0.0)
        with pytest.raises(DegenerateShiftError):
            residual_coeff_square(2, 2.3993572805154675)

    def test_index_guards(self):
        with pytest.raises(DomainError):
            residual_coeff_square(1, 0.0)
        with pytest.raises(DomainError):
            residual_coeff_monomial(3, 3, 1.0)


class TestCauchyBound:
    def test_zero_shift_base_case(self):
        cert = verify_cauchy_bound(0.0, 0)
        assert cert.fitted_constant == pytest.approx(0.5, abs=1e-15)
        assert cert.holds()

    def test_fitted_constant_at_one(self):
        cert = verify_cauchy_bound(1.0, 8)
        assert cert.fitted_constant == pytest.approx(0.7310585786300049, rel=1e-12)
        assert cert.holds()
        assert cert.ratios[0] == max(cert.ratios)

    def test_bound_is_tight_nowhere_above(self):
        for a in (-2.0, 0.0, 0.5, 3.0):
            cert = verify_cauchy_bound(a, 12)
            for n in range(cert.n_max + 1):
                bound = math.factorial(n) * (2 / math.pi) ** n * cert.fitted_constant
                assert abs(sigmoid_deriv(n, a)) <= bound * (1 + 1e-12)

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            verify_cauchy_bound(0.0, 21)
