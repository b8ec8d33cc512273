"""Finite-difference identities that the alternating-sum weights rely on."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from silunets.errors import CapacityError
from silunets.findiff import (
    binomial,
    check_diff_bound,
    diff_centered_node_power,
    falling_factorial_value,
    forward_diff,
)


def pascal_row(m):
    """Oracle: binomial row built by Pascal's recurrence alone."""
    row = [1]
    for _ in range(m):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row


class TestBinomial:
    def test_matches_pascal_oracle_up_to_cap(self):
        for m in range(63):
            row = pascal_row(m)
            for j in range(m + 1):
                assert binomial(m, j) == row[j]

    def test_range_guards(self):
        with pytest.raises(CapacityError):
            binomial(63, 0)
        with pytest.raises(CapacityError):
            binomial(5, 6)
        with pytest.raises(CapacityError):
            binomial(5, -1)

    @given(st.integers(min_value=1, max_value=62), st.integers(min_value=0, max_value=62))
    def test_symmetry(self, m, j):
        if j <= m:
            assert binomial(m, j) == binomial(m, m - j)


class TestForwardDiff:
    def test_annihilates_low_degree(self):
        # diff^m kills polynomials of degree < m
        for m in range(1, 9):
            for deg in range(m):
                val = forward_diff(lambda t, d=deg: float(t) ** d, m)
                assert val == pytest.approx(0.0, abs=1e-9)

    def test_falling_factorial_top_degree_exactly_factorial(self):
        # diff^m of x(x-1)...(x-m+1) at 0 is m!, exactly in floats for m <= 12
        for m in range(13):
            val = forward_diff(lambda t, k=m: falling_factorial_value(float(t), k), m)
            assert val == float(math.factorial(m))

    def test_step_identity_on_falling_factorials(self):
        # (Delta ff_k)(x) = k * ff_{k-1}(x) at 200 random points
        rng = np.random.default_rng(42)
        xs = rng.uniform(-8, 8, size=200)
        for k in (1, 2, 3, 5, 8):
            lhs = np.array(
                [falling_factorial_value(x + 1, k) - falling_factorial_value(x, k)
                 for x in xs]
            )
            rhs = k * np.array([falling_factorial_value(x, k - 1) for x in xs])
            np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-9)

    def test_order_cap(self):
        with pytest.raises(CapacityError):
            forward_diff(lambda t: float(t), 63)


class TestCenteredNodePower:
    def test_degree_m_gives_factorial(self):
        for m in range(1, 11):
            assert diff_centered_node_power(m, m) == pytest.approx(
                float(math.factorial(m)), rel=1e-12
            )

    def test_below_degree_vanishes(self):
        for m in range(1, 9):
            for n in range(m):
                assert diff_centered_node_power(m, n) == pytest.approx(0.0, abs=1e-8)

    def test_parity_vanishing_above_degree(self):
        # symmetric nodes: n - m odd -> exact zero
        for m in range(1, 8):
            for n in range(m + 1, m + 7, 2):
                assert diff_centered_node_power(m, n) == pytest.approx(0.0, abs=1e-7)

    def test_known_value(self):
        # m=2: (t-1)^4 at t=0,1,2 with weights 1,-2,1 -> 1 - 0 + 1 = 2
        assert diff_centered_node_power(2, 4) == pytest.approx(2.0, rel=1e-14)

    def test_bound_holds(self):
        for m in range(1, 11):
            for n in range(m, m + 7):
                value, bound, ok = check_diff_bound(m, n)
                assert ok, (m, n, value, bound)
                assert value <= bound * (1 + 1e-12)
