"""Forward finite differences with exact integer binomials.

The m-th forward difference at 0 with unit step,

    diff^m f(0) = sum_{j=0}^{m} (-1)^(m-j) C(m,j) f(j),

annihilates polynomials of degree < m and maps the degree-m falling
factorial to m! exactly.  These identities calibrate everything the
alternating-sum network weights rely on.
"""
from __future__ import annotations

import math
from typing import Callable

from .errors import CapacityError

MAX_ORDER = 62  # C(62, 31) still fits in 64-bit; larger orders are refused


def binomial(m: int, j: int) -> int:
    """Exact C(m, j) for 0 <= j <= m <= 62."""
    if not isinstance(m, int) or not isinstance(j, int):
        raise CapacityError("binomial arguments must be integers")
    if m < 0 or m > MAX_ORDER:
        raise CapacityError(f"binomial order {m} outside [0, {MAX_ORDER}]")
    if j < 0 or j > m:
        raise CapacityError(f"binomial index {j} outside [0, {m}]")
    return math.comb(m, j)


def forward_diff(f: Callable[[int], float], m: int) -> float:
    """m-th forward difference of f at 0 with unit step.

    Terms are combined with compensated summation; the alternating
    binomial weights cancel up to 2^m of headroom otherwise.
    """
    if m < 0 or m > MAX_ORDER:
        raise CapacityError(f"difference order {m} outside [0, {MAX_ORDER}]")
    terms = []
    for j in range(m + 1):
        sign = -1.0 if (m - j) % 2 else 1.0
        terms.append(sign * binomial(m, j) * f(j))
    return math.fsum(terms)


def falling_factorial_value(x: float, k: int) -> float:
    """x(x-1)...(x-k+1); k = 0 gives 1."""
    if k < 0:
        raise CapacityError("falling factorial order must be >= 0")
    acc = 1.0
    for i in range(k):
        acc *= x - i
    return acc


def centered_node_power(m: int, n: int) -> Callable[[int], float]:
    """The polynomial t -> (t - m/2)^n sampled at integer nodes.

    Its m-th forward difference at 0 is the alternating node sum that
    appears in every x^n coefficient of the symmetric SiLU combination.
    """
    half = m / 2.0
    return lambda t: (t - half) ** n


def diff_centered_node_power(m: int, n: int) -> float:
    """diff^m (t - m/2)^n at 0.

    Vanishes for n < m (degree) and, by node symmetry, for every n with
    n - m odd; equals m! at n = m.
    """
    return forward_diff(centered_node_power(m, n), m)


def check_diff_bound(m: int, n: int) -> tuple[float, float, bool]:
    """Return (|diff^m (t-m/2)^n at 0|, 2^m (m/2)^n, value <= bound)."""
    value = abs(diff_centered_node_power(m, n))
    bound = (2.0**m) * (m / 2.0) ** n
    return value, bound, value <= bound * (1 + 1e-12)
