"""Closed-form SiLU net builders for squares, products, monomials, polynomials.

Every builder writes its weights analytically from (shift a, scale beta,
depth index k); nothing is trained.  The squaring block is the seed:

    square(x) = [silu(b^k x + a) + silu(-b^k x + a) - 2 silu(a)] / (K(a) b^2k)

with K(a) the second-order coefficient of the shifted-SiLU expansion.
Products come from the polarization identity 4xy = (x+y)^2 - (x-y)^2,
monomials from repeated products (deep) or from an (m+1)-node centered
finite-difference layer (shallow), and polynomials from affine
combinations of monomial nets.

Rates are always measured, never assumed: ``calibrate_rate`` fits
ln err(k) = ln C - (r ln w) k over the monotone range of a k-sweep and
``choose_k`` inverts the fitted model for a target accuracy.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import network as nw
from .errors import (
    CapacityError,
    DegenerateShiftError,
    DomainError,
    InfeasibleError,
    OverflowGuardError,
)
from .findiff import binomial
from .network import FeedForwardNet
from .scalar import (
    DEGENERACY_FLOOR,
    leading_coeff_monomial,
    leading_coeff_square,
    residual_coeff_monomial,
    residual_coeff_square,
    silu,
)

DEFAULT_BETA = 0.27
SCALE_EXPONENT_LIMIT = 600.0  # cap on k*ln(1/beta); keeps beta^(-2k) finite
MAX_POLY_DEGREE = 12


def _validate_scale(beta: float, k: int) -> None:
    if not (isinstance(k, (int, np.integer)) and not isinstance(k, bool)):
        raise DomainError("k must be an integer")
    if k < 0:
        raise DomainError("k must be >= 0")
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    if k * math.log(1.0 / beta) > SCALE_EXPONENT_LIMIT:
        raise InfeasibleError(
            f"k={k} at beta={beta} drives the output scale past the "
            f"exp({SCALE_EXPONENT_LIMIT:.0f}) guard"
        )


def default_shift_for(m: int) -> float:
    """Shift 0 works except for odd powers >= 3, whose K_m(0) vanishes."""
    return 1.0 if (m % 2 == 1 and m >= 3) else 0.0


def _square_coeff_checked(a: float) -> float:
    kk = leading_coeff_square(a)
    if abs(kk) < DEGENERACY_FLOOR:
        raise DegenerateShiftError(
            f"second-order shift coefficient K({a}) = {kk:.3e} is degenerate"
        )
    return kk


@dataclass(frozen=True)
class SquareParams:
    a: float = 0.0
    beta: float = DEFAULT_BETA
    k: int = 0
    B: float = 1.0

    def __post_init__(self):
        _validate_scale(self.beta, self.k)
        if not self.B > 0:
            raise DomainError("B must be positive")
        _square_coeff_checked(self.a)


@dataclass(frozen=True)
class MonomialParams:
    m: int
    a: float = 0.0
    beta: float = DEFAULT_BETA
    k: int = 0
    B: float = 1.0
    input_bound: float | None = None

    def __post_init__(self):
        if not (isinstance(self.m, (int, np.integer)) and self.m >= 1):
            raise DomainError("m must be an integer >= 1")
        _validate_scale(self.beta, self.k)
        if not self.B > 0:
            raise DomainError("B must be positive")


# ---------------------------------------------------------------------------
# square and product


def build_square(p: SquareParams) -> FeedForwardNet:
    """Depth-2, width-3 net approximating x^2 on [-B, B].

    The third neuron has weight zero; it contributes the constant
    -2 silu(a) that makes the output vanish exactly at x = 0.
    """
    kk = _square_coeff_checked(p.a)
    s = p.beta**p.k
    w = np.array([[s], [-s], [0.0]])
    b = np.array([p.a, p.a, p.a])
    gamma = (p.beta ** (-2 * p.k) / kk) * np.array([[1.0, 1.0, -2.0]])
    return FeedForwardNet(
        1,
        (
            nw.DenseLayer(w, b, nw.SILU),
            nw.DenseLayer(gamma, np.zeros(1), nw.IDENTITY),
        ),
    )


def square_residual_bound(p: SquareParams, series_terms: int = 10) -> float:
    """Sum of |residual coefficient| * B^2j * beta^(2k(j-1)) over j >= 2."""
    total = 0.0
    for j in range(2, series_terms + 1):
        c = abs(residual_coeff_square(j, p.a))
        total += c * p.B ** (2 * j) * p.beta ** (2 * p.k * (j - 1))
    return total


def build_product(a: float, beta: float, k: int) -> FeedForwardNet:
    """2-input, width-4 net approximating xy via 4xy = (x+y)^2 - (x-y)^2."""
    _validate_scale(beta, k)
    kk = _square_coeff_checked(a)
    s = beta**k
    w = s * np.array([[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]])
    b = np.full(4, float(a))
    gamma = (beta ** (-2 * k) / (4.0 * kk)) * np.array([[1.0, 1.0, -1.0, -1.0]])
    return FeedForwardNet(
        2,
        (
            nw.DenseLayer(w, b, nw.SILU),
            nw.DenseLayer(gamma, np.zeros(1), nw.IDENTITY),
        ),
    )


def product_residual_bound(a: float, beta: float, k: int, radius: float) -> float:
    """Bound on |product net - xy| for |x|,|y| <= radius."""
    p = SquareParams(a=a, beta=beta, k=k, B=max(2.0 * radius, 1e-300))
    return 0.5 * square_residual_bound(p)


# ---------------------------------------------------------------------------
# monomials


def build_monomial_deep(p: MonomialParams) -> FeedForwardNet:
    """x^m by repeated products: degree 1 is the identity, degree 2 the
    squaring block, and each further degree wraps a product net around
    the previous stage with the raw input carried alongside."""
    if p.m == 1:
        return nw.identity_net(1)
    net = build_square(SquareParams(a=p.a, beta=p.beta, k=p.k, B=p.B))
    prod = build_product(p.a, p.beta, p.k)
    for _ in range(3, p.m + 1):
        net = nw.compose(prod, net, wiring=[0, 1])
    return net


def deep_input_bounds(p: MonomialParams) -> list[float]:
    """Per-stage bound on |stage output| + B, the range each nested
    product actually sees (stage i approximates x^i on [-B, B])."""
    bounds = []
    err = 0.0
    for i in range(1, p.m + 1):
        if i >= 2:
            radius = max(p.B, p.B ** (i - 1) + err)
            err = product_residual_bound(p.a, p.beta, p.k, radius) + p.B * err
        bounds.append(p.B + p.B**i + err)
    return bounds


def monomial_deep_residual_bound(p: MonomialParams) -> float:
    """Error recursion: err(m+1) <= product error at the stage radius
    plus B times err(m)."""
    err = 0.0
    for i in range(2, p.m + 1):
        radius = max(p.B, p.B ** (i - 1) + err)
        err = product_residual_bound(p.a, p.beta, p.k, radius) + p.B * err
    return err


def run_rnn_monomials(m: int, a: float, beta: float, k: int, x) -> list:
    """Recurrent view of the product chain: one shared cell applied m
    times, state y_i tracking x^i from y_0 = 1.

    x may be a scalar or an ndarray; each y_i has x's shape.
    """
    if not (isinstance(m, (int, np.integer)) and m >= 0):
        raise DomainError("m must be an integer >= 0")
    _validate_scale(beta, k)
    kk = _square_coeff_checked(a)
    s = beta**k
    w_h = s * np.array([1.0, -1.0, 1.0, -1.0])
    u_h = s * np.array([1.0, -1.0, -1.0, 1.0])
    w_y = (beta ** (-2 * k) / (4.0 * kk)) * np.array([1.0, 1.0, -1.0, -1.0])
    xa = np.asarray(x, dtype=float)
    y = np.ones_like(xa)
    out = [y]
    for i in range(1, m + 1):
        z = np.multiply.outer(xa, w_h) + np.multiply.outer(y, u_h) + a
        y = nw.silu_array(z) @ w_y
        peak = float(np.max(np.abs(y))) if y.size else 0.0
        if not np.all(np.isfinite(y)) or peak > nw.OVERFLOW_GUARD:
            raise OverflowGuardError(i, peak)
        out.append(y)
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return [float(v) for v in out]
    return out


def build_monomial_shallow(p: MonomialParams) -> FeedForwardNet:
    """x^m with one hidden layer of m+1 neurons at centered nodes j - m/2.

    Alternating binomial readout cancels every expansion order below m;
    rejected when the order-m coefficient K_m(a) degenerates (odd m >= 3
    at a = 0).
    """
    m = int(p.m)
    if p.m * p.k * math.log(1.0 / p.beta) > SCALE_EXPONENT_LIMIT:
        raise InfeasibleError(
            f"beta^(-mk) overflows the scale guard at m={m}, k={p.k}, beta={p.beta}"
        )
    km = leading_coeff_monomial(m, p.a)
    if abs(km) < DEGENERACY_FLOOR:
        raise DegenerateShiftError(
            f"order-{m} shift coefficient K_{m}({p.a}) = {km:.3e} is "
            f"degenerate; odd powers need a nonzero shift such as a = 1"
        )
    s = p.beta**p.k
    w = np.array([[s * (j - m / 2.0)] for j in range(m + 1)])
    b = np.full(m + 1, float(p.a))
    scale = p.beta ** (-m * p.k) / km
    gamma = np.array(
        [[scale * ((-1) ** (m - j)) * binomial(m, j) for j in range(m + 1)]]
    )
    # the alternating sum annihilates the constant term, so no output bias
    return FeedForwardNet(
        1,
        (
            nw.DenseLayer(w, b, nw.SILU),
            nw.DenseLayer(gamma, np.zeros(1), nw.IDENTITY),
        ),
    )


def monomial_shallow_residual_bound(p: MonomialParams, series_orders: int = 20) -> float:
    m = int(p.m)
    total = 0.0
    for n in range(m + 1, series_orders + 1):
        c = abs(residual_coeff_monomial(m, n, p.a))
        total += c * p.B**n * p.beta ** (p.k * (n - m))
    return total


# ---------------------------------------------------------------------------
# polynomials


def build_polynomial(
    coeffs: Sequence[float],
    a: float = 0.0,
    beta: float = DEFAULT_BETA,
    k: int = 3,
    variant: str = "deep",
) -> FeedForwardNet:
    """sum_m coeffs[m] x^m as an affine combination of monomial nets.

    coeffs are ascending (constant first).  Degree is capped at 12 so
    beta^(-mk) cannot overflow silently.
    """
    if variant not in ("deep", "shallow"):
        raise DomainError(f"variant must be 'deep' or 'shallow', got {variant!r}")
    c = np.asarray(list(coeffs), dtype=float)
    if c.size == 0:
        raise DomainError("coeffs must be non-empty")
    if not np.all(np.isfinite(c)):
        raise DomainError("coeffs must be finite")
    degree = c.size - 1
    if degree > MAX_POLY_DEGREE:
        raise CapacityError(
            f"degree {degree} exceeds the cap of {MAX_POLY_DEGREE}"
        )
    terms = [(m, c[m]) for m in range(1, c.size) if c[m] != 0.0]
    if not terms:
        return nw.constant_net(float(c[0]), input_dim=1)
    nets = []
    for m, _ in terms:
        p = MonomialParams(m=m, a=a, beta=beta, k=k)
        nets.append(
            build_monomial_deep(p) if variant == "deep" else build_monomial_shallow(p)
        )
    return nw.affine_combination(
        nets, [cm for _, cm in terms], constant=float(c[0])
    )


# ---------------------------------------------------------------------------
# rate calibration


@dataclass(frozen=True)
class RateFit:
    c_est: float
    omega_est: float
    rate_exponent: int
    residual: float
    truncated: bool
    n_used: int
    ks: tuple[int, ...]
    errors: tuple[float, ...]


def monotone_prefix(errors: Sequence[float]) -> int:
    """Length of the strictly decreasing, positive, finite prefix."""
    n = 0
    prev = math.inf
    for e in errors:
        if not (math.isfinite(e) and 0.0 < e < prev):
            break
        prev = e
        n += 1
    return n


def compare_rate_exponents(
    ks: Sequence[int], errors: Sequence[float], omega: float
) -> dict[int, float]:
    """RMS log-residual of the pinned-slope model ln err = ln C - r ln(omega) k
    for r in {1, 2}.  Lower is better."""
    if omega <= 1.0:
        raise DomainError("omega must exceed 1")
    ks = np.asarray(ks, dtype=float)
    ln_e = np.log(np.asarray(errors, dtype=float))
    out = {}
    for r in (1, 2):
        slope = -r * math.log(omega)
        intercept = float(np.mean(ln_e - slope * ks))
        resid = ln_e - (intercept + slope * ks)
        out[r] = float(np.sqrt(np.mean(resid**2)))
    return out


def calibrate_rate(
    builder: Callable[[int], FeedForwardNet],
    target: Callable[[np.ndarray], np.ndarray],
    domain,
    k_range: Sequence[int],
    rate_exponent: int | None = None,
    omega_hint: float | None = None,
    grid_per_dim: int | None = None,
    excluded_bands=(),
) -> RateFit:
    """Fit ln err(k) = ln C - (r ln w) k over the monotone range of a sweep.

    builder maps k to a net; errors come from sup_error against target on
    domain.  When rate_exponent is not given, the exponent (1 or 2) whose
    pinned-slope model at omega_hint fits better is selected.  Fitting
    stops at the first non-decreasing error (floating-point floor) and
    the truncation is flagged.
    """
    ks = [int(k) for k in k_range]
    if len(ks) < 3:
        raise DomainError("k_range needs at least 3 values")
    errors = []
    for k in ks:
        net = builder(k)
        rep = nw.sup_error(
            net, target, domain,
            grid_per_dim=grid_per_dim, excluded_bands=excluded_bands,
        )
        errors.append(rep.sup_error)

    n_used = monotone_prefix(errors)
    truncated = n_used < len(errors)
    if n_used < 2:
        # no measurable decay; report a degenerate fit and flag it
        r = rate_exponent if rate_exponent is not None else 1
        c0 = errors[0] if errors and math.isfinite(errors[0]) else math.nan
        return RateFit(
            c_est=float(c0), omega_est=1.0, rate_exponent=int(r),
            residual=math.inf, truncated=True, n_used=n_used,
            ks=tuple(ks), errors=tuple(float(e) for e in errors),
        )

    ks_fit = np.asarray(ks[:n_used], dtype=float)
    ln_e = np.log(np.asarray(errors[:n_used], dtype=float))
    if rate_exponent is None:
        if omega_hint is None:
            raise DomainError(
                "choosing the rate exponent needs omega_hint (typically 1/beta)"
            )
        rms = compare_rate_exponents(ks[:n_used], errors[:n_used], omega_hint)
        rate_exponent = min(rms, key=lambda r: rms[r])
    rate_exponent = int(rate_exponent)
    if rate_exponent not in (1, 2):
        raise DomainError("rate_exponent must be 1 or 2")

    slope, intercept = np.polyfit(ks_fit, ln_e, 1)
    resid = ln_e - (intercept + slope * ks_fit)
    omega_est = math.exp(-slope / rate_exponent)
    return RateFit(
        c_est=float(math.exp(intercept)),
        omega_est=float(omega_est),
        rate_exponent=rate_exponent,
        residual=float(np.sqrt(np.mean(resid**2))),
        truncated=truncated,
        n_used=n_used,
        ks=tuple(ks),
        errors=tuple(float(e) for e in errors),
    )


def choose_k(eps: float, fit: RateFit) -> int:
    """Smallest k with C omega^(-rk) <= eps under the fitted model."""
    if not (math.isfinite(eps) and eps > 0):
        raise DomainError("eps must be a positive finite number")
    if not (math.isfinite(fit.c_est) and fit.c_est > 0):
        raise InfeasibleError("fit has no usable error constant")
    if eps >= fit.c_est:
        return 0
    if fit.omega_est <= 1.0:
        raise InfeasibleError(
            "fitted omega does not exceed 1; no decay to extrapolate"
        )
    k = math.ceil(
        (math.log(fit.c_est) - math.log(eps))
        / (fit.rate_exponent * math.log(fit.omega_est))
    )
    if k * math.log(fit.omega_est) > SCALE_EXPONENT_LIMIT:
        raise InfeasibleError(
            f"reaching eps={eps} needs k={k}, past the overflow guard"
        )
    return int(k)


# ---------------------------------------------------------------------------
# least-squares coefficients in a net basis


def fit_poly_coeffs(xs, ys, basis: Sequence[FeedForwardNet]) -> np.ndarray:
    """Least-squares coefficients c minimizing ||ys - P c||_2 where
    P[j, i] = basis[i](xs[j]).  Rank deficiency warns and falls back to
    the minimum-norm solution."""
    xs = np.asarray(xs, dtype=float).reshape(-1)
    ys = np.asarray(ys, dtype=float).reshape(-1)
    if xs.shape != ys.shape:
        raise DomainError("xs and ys must have the same length")
    if not basis:
        raise DomainError("basis must be non-empty")
    if xs.size < len(basis):
        raise DomainError(
            f"{xs.size} samples cannot determine {len(basis)} coefficients"
        )
    cols = []
    for net in basis:
        vals = nw.evaluate(net, xs.reshape(-1, 1))
        cols.append(np.asarray(vals).reshape(-1))
    design = np.column_stack(cols)
    coeffs, _, rank, _ = np.linalg.lstsq(design, ys, rcond=None)
    if rank < len(basis):
        warnings.warn(
            "rank-deficient design matrix; returning the minimum-norm solution",
            RuntimeWarning,
            stacklevel=2,
        )
    return coeffs
