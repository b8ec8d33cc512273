"""Scalar kernels: stable sigmoid/SiLU and their exact derivative algebra.

Every sigmoid derivative is a polynomial in the sigmoid itself:

    sigma'   = s - s^2
    p_{n+1}  = p_n' * (s - s^2)      with p_0(s) = s,

with exact integer coefficients.  All shifted-SiLU Taylor coefficients,
leading/residual coefficients of the closed-form constructions, and
derivative-growth certificates are derived from that table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapacityError, DegenerateShiftError, DomainError
from .findiff import diff_centered_node_power

DEGENERACY_FLOOR = 1e-10


def sigmoid(x: float) -> float:
    """Logistic function, overflow-safe on the whole float range."""
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def silu(x: float) -> float:
    """x * sigmoid(x).  silu(x) - silu(-x) == x identically."""
    return x * sigmoid(x)


class DerivPolyTable:
    """Integer-coefficient polynomials p_n with sigma^(n)(x) = p_n(sigma(x)).

    Coefficients are exact Python integers; p_n has degree n + 1 and its
    coefficients sum to 0 for n >= 1 (all derivatives vanish at s = 1).
    """

    def __init__(self, max_order: int = 20):
        if max_order < 0:
            raise CapacityError("max_order must be >= 0")
        self.max_order = max_order
        polys: list[tuple[int, ...]] = [(0, 1)]  # p_0(s) = s
        for _ in range(max_order):
            p = polys[-1]
            dp = [i * c for i, c in enumerate(p)][1:]
            q = [0] * (len(dp) + 2)
            for i, c in enumerate(dp):
                q[i + 1] += c  # * s
                q[i + 2] -= c  # * -s^2
            polys.append(tuple(q))
        self._polys = tuple(polys)

    def coefficients(self, n: int) -> tuple[int, ...]:
        if n < 0 or n > self.max_order:
            raise CapacityError(
                f"derivative order {n} outside table range [0, {self.max_order}]"
            )
        return self._polys[n]

    def evaluate(self, n: int, s: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients(n)):
            acc = acc * s + c
        return acc


_DEFAULT_TABLE = DerivPolyTable(20)


def sigmoid_deriv(n: int, a: float, table: DerivPolyTable | None = None) -> float:
    """n-th derivative of the sigmoid at a, via the polynomial table."""
    t = table if table is not None else _DEFAULT_TABLE
    return t.evaluate(n, sigmoid(a))


def silu_shift_coeff(n: int, a: float, table: DerivPolyTable | None = None) -> float:
    """Taylor coefficient of x^n in silu(x + a) around x = 0.

    For n >= 1 this is [a sigma^(n)(a) + n sigma^(n-1)(a)] / n!; the
    constant term is a * sigma(a).
    """
    if n < 0:
        raise DomainError("Taylor order must be >= 0")
    if n == 0:
        return a * sigmoid(a)
    bracket = a * sigmoid_deriv(n, a, table) + n * sigmoid_deriv(n - 1, a, table)
    return bracket / math.factorial(n)


def leading_coeff_square(a: float) -> float:
    """Coefficient of x^2 in silu(x+a) + silu(-x+a) - 2 silu(a):
    2 sigma'(a) + a sigma''(a)."""
    return 2.0 * sigmoid_deriv(1, a) + a * sigmoid_deriv(2, a)


def leading_coeff_monomial(m: int, a: float) -> float:
    """Coefficient of x^m in the alternating-binomial SiLU combination:
    a sigma^(m)(a) + m sigma^(m-1)(a).

    Vanishes identically at a = 0 for odd m >= 3 (sigma's even
    derivatives are odd functions), which is why those shifts are
    rejected downstream.
    """
    if m < 1:
        raise DomainError("degree must be >= 1")
    return a * sigmoid_deriv(m, a) + m * sigmoid_deriv(m - 1, a)


def _require_nondegenerate(value: float, what: str) -> float:
    if abs(value) < DEGENERACY_FLOOR:
        raise DegenerateShiftError(
            f"{what} is {value:.3e}, below the {DEGENERACY_FLOOR} floor; "
            f"pick a shift where the normalizer does not vanish"
        )
    return value


def residual_coeff_square(j: int, a: float) -> float:
    """Coefficient of x^(2j), j >= 2, in the normalized even combination
    [silu(x+a) + silu(-x+a) - 2 silu(a)] / leading_coeff_square(a)."""
    if j < 2:
        raise DomainError("residual index starts at j = 2")
    k = _require_nondegenerate(leading_coeff_square(a), "square leading coefficient")
    return 2.0 * silu_shift_coeff(2 * j, a) / k


def residual_coeff_monomial(m: int, n: int, a: float) -> float:
    """Coefficient of x^n, n > m, in the normalized alternating combination
    of silu((j - m/2) x + a) over j = 0..m.

    Equals diff^m (t-m/2)^n at 0 times the shifted-SiLU Taylor coefficient,
    normalized by the degree-m leading coefficient.  Zero whenever n - m is
    odd (node symmetry), so the first surviving residual sits at n = m + 2.
    """
    if n <= m:
        raise DomainError("residual order must exceed the degree")
    k = _require_nondegenerate(
        leading_coeff_monomial(m, a), f"degree-{m} leading coefficient"
    )
    return diff_centered_node_power(m, n) * silu_shift_coeff(n, a) / k


@dataclass(frozen=True)
class DerivBoundCert:
    """Certificate that |sigma^(n)(a)| <= n! (2/pi)^n * fitted_constant
    holds for all n <= n_max, with the fitted constant being the max of
    the observed ratios (computed in the log domain)."""

    a: float
    n_max: int
    fitted_constant: float
    ratios: tuple[float, ...]

    def holds(self) -> bool:
        return all(r <= self.fitted_constant * (1 + 1e-12) for r in self.ratios)


def verify_cauchy_bound(a: float, n_max: int,
                        table: DerivPolyTable | None = None) -> DerivBoundCert:
    """Fit the smallest constant C with |sigma^(n)(a)| <= n! (2/pi)^n C
    over n = 0..n_max."""
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    t = table if table is not None else _DEFAULT_TABLE
    if n_max > t.max_order:
        raise CapacityError(f"n_max {n_max} exceeds table order {t.max_order}")
    log_rate = math.log(2.0 / math.pi)
    ratios = []
    for n in range(n_max + 1):
        d = sigmoid_deriv(n, a, t)
        if d == 0.0:
            ratios.append(0.0)
            continue
        log_ratio = math.log(abs(d)) - math.lgamma(n + 1) - n * log_rate
        ratios.append(math.exp(log_ratio))
    return DerivBoundCert(a=a, n_max=n_max, fitted_constant=max(ratios),
                          ratios=tuple(ratios))
