"""Smoothed indicator machinery and the two continuous-function routes.

A half-step is the double-SiLU ramp

    r(x) = silu(kappa - 2 silu(kappa (alpha - x) / tau)) / kappa,

which is ~0 left of alpha, ~1 right of it, with the rise confined to a
width-tau/2 window.  Differencing two half-steps gives a bump, scaled
bumps sum to staircase approximants, and staircases at midpoint samples
approximate any function with a known modulus of continuity.  The
alternative route interpolates a Chebyshev polynomial and feeds its
coefficients to the monomial-combination builder.

Every indicator-type comparison here is banded: a continuous net cannot
track a jump uniformly, so sup norms exclude transition bands around the
breakpoints.  With the (kappa, tau) schedule below, bands of half-width
tau around each breakpoint already contain the entire measurable
deviation; plateau error outside them is at most ~exp(-kappa).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.chebyshev import Chebyshev

from . import builders as bl
from . import network as nw
from .errors import DomainError, InfeasibleError
from .network import FeedForwardNet

STEP_CELL_LIMIT = 1_000_000
WEIERSTRASS_DEGREE_CAP = 64


def as_grid_fn(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """Adapt a scalar function of one variable to the (N, 1) -> (N,)
    convention used by the measurement grid."""

    def wrapped(pts: np.ndarray) -> np.ndarray:
        xs = np.asarray(pts)[:, 0]
        try:
            vals = np.asarray(f(xs), dtype=float)
            if vals.shape == xs.shape:
                return vals
        except (TypeError, ValueError):
            pass
        return np.array([float(f(float(x))) for x in xs])

    return wrapped


# ---------------------------------------------------------------------------
# half-steps and bumps


def build_half_step(alpha: float, tau: float, kappa: float) -> FeedForwardNet:
    """Width-1, two-hidden-layer ramp from 0 to 1 around alpha.

    The rise lives in [alpha - tau/2, alpha]; on the plateaus the value
    overshoots by at most 2/(e*kappa) right next to the edge and decays
    like exp(-kappa) a full tau away.
    """
    if not (tau > 0 and kappa > 0):
        raise DomainError("tau and kappa must be positive")
    layers = (
        nw.DenseLayer(np.array([[-kappa / tau]]), [kappa * alpha / tau], nw.SILU),
        nw.DenseLayer(np.array([[-2.0]]), [kappa], nw.SILU),
        nw.DenseLayer(np.array([[1.0 / kappa]]), [0.0], nw.IDENTITY),
    )
    return FeedForwardNet(1, layers)


@dataclass(frozen=True)
class BumpParams:
    lo: float
    hi: float
    tau: float
    kappa: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bump needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.tau > 0:
            raise DomainError("tau must be positive")
        if not self.kappa >= 1:
            raise DomainError("kappa must be at least 1")
        if self.tau > (self.hi - self.lo) / 4:
            raise DomainError(
                f"tau={self.tau} too wide for interval length {self.hi - self.lo}"
            )


def build_bump(p: BumpParams) -> FeedForwardNet:
    """Indicator of [lo, hi] as a width-2 net: rising edge minus falling
    edge, sharing the two hidden stages."""
    kt = p.kappa / p.tau
    layers = (
        nw.DenseLayer(
            np.array([[-kt], [-kt]]),
            [kt * p.lo, kt * p.hi],
            nw.SILU,
        ),
        nw.DenseLayer(
            np.array([[-2.0, 0.0], [0.0, -2.0]]),
            [p.kappa, p.kappa],
            nw.SILU,
        ),
        nw.DenseLayer(
            np.array([[1.0 / p.kappa, -1.0 / p.kappa]]), [0.0], nw.IDENTITY
        ),
    )
    return FeedForwardNet(1, layers)


def choose_kappa_tau(delta: float, min_len: float) -> tuple[float, float]:
    """Schedule guaranteeing plateau error <= delta outside the bands.

    kappa = max(10, 4/(e delta)) makes the worst near-edge overshoot
    2/(e kappa) <= delta/2, and tau = min_len/8 keeps each transition
    inside a quarter of the narrowest interval.
    """
    if not 0 < delta < 0.5:
        raise DomainError(f"delta must lie in (0, 1/2), got {delta}")
    if not min_len > 0:
        raise DomainError("min_len must be positive")
    kappa = max(10.0, 4.0 / (math.e * delta))
    tau = min_len / 8.0
    return kappa, tau


def transition_bands(
    breakpoints: Sequence[float], tau: float
) -> tuple[tuple[float, float], ...]:
    """Half-width-tau exclusion bands around every breakpoint.

    The half-step's rise occupies [b - tau/2, b] and its tails decay like
    exp(-kappa) beyond one tau, so +/- tau already covers everything a
    banded sup norm must skip, including the closing edge at a domain
    endpoint.
    """
    return tuple((float(b) - tau, float(b) + tau) for b in breakpoints)


# ---------------------------------------------------------------------------
# staircases


@dataclass(frozen=True)
class StepSpec:
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(bps) < 2:
            raise DomainError("need at least two breakpoints")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if len(vals) != len(bps) - 1:
            raise DomainError(
                f"{len(bps)} breakpoints define {len(bps) - 1} intervals, "
                f"got {len(vals)} values"
            )
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("values must be finite")
        if all(v == 0.0 for v in vals):
            raise DomainError("a staircase with all-zero values is rejected")

    @property
    def n_intervals(self) -> int:
        return len(self.values)

    def min_length(self) -> float:
        return min(b2 - b1 for b1, b2 in zip(self.breakpoints, self.breakpoints[1:]))

    def oracle(self, pts: np.ndarray) -> np.ndarray:
        """Piecewise-constant target; cells are half-open [b_i, b_{i+1})
        and the final breakpoint belongs to the last cell."""
        xs = np.asarray(pts)[:, 0] if np.asarray(pts).ndim == 2 else np.asarray(pts)
        idx = np.searchsorted(np.asarray(self.breakpoints), xs, side="right") - 1
        idx = np.clip(idx, 0, self.n_intervals - 1)
        return np.asarray(self.values, dtype=float)[idx]


def structural_step_param_count(n_bumps: int) -> int:
    """The 10N + 1 bookkeeping count: each bump carries 2+2 first-stage
    entries, 2+2 second-stage entries and 2 readout weights; the +1 is
    the shared output bias slot.  The serialized net stores block
    matrices, so summary(net).nonzero_param_count equals 10N while
    param_count also counts the structural zeros."""
    return 10 * n_bumps + 1


@dataclass(frozen=True)
class StepBuildInfo:
    kappa: float
    tau: float
    n_bumps: int
    per_bump_delta: float
    bands: tuple[tuple[float, float], ...]
    structural_param_count: int


def step_build_info(spec: StepSpec, delta: float) -> StepBuildInfo:
    if not 0 < delta:
        raise DomainError("delta must be positive")
    m = spec.n_intervals
    peak = max(abs(v) for v in spec.values)
    per = min(delta / (m * peak), 0.49)
    kappa, tau = choose_kappa_tau(per, spec.min_length())
    return StepBuildInfo(
        kappa=kappa,
        tau=tau,
        n_bumps=m,
        per_bump_delta=per,
        bands=transition_bands(spec.breakpoints, tau),
        structural_param_count=structural_step_param_count(m),
    )


def build_step_approx(spec: StepSpec, delta: float) -> FeedForwardNet:
    """Sum of value-scaled bumps, one per interval, sharing one
    (kappa, tau) pair sized for a total banded error below delta."""
    info = step_build_info(spec, delta)
    bumps = [
        build_bump(BumpParams(lo, hi, info.tau, info.kappa))
        for lo, hi in zip(spec.breakpoints, spec.breakpoints[1:])
    ]
    return nw.affine_combination(bumps, list(spec.values), constant=0.0)


# ---------------------------------------------------------------------------
# modulus of continuity


class ModulusSpec:
    """Modulus of continuity with an inverse: largest t with omega(t) <= eps.

    Kinds: lipschitz(L), hoelder(C, exponent), sampled(xs, fs).  The
    sampled kind measures max |f(x) - f(y)| over |x - y| <= t on the
    given samples and doubles it as a safety factor against the gaps
    between sample points.
    """

    def __init__(self, kind: str, **fields):
        self.kind = kind
        self._fields = fields

    @classmethod
    def lipschitz(cls, L: float) -> "ModulusSpec":
        if L < 0 or not math.isfinite(L):
            raise DomainError("Lipschitz constant must be finite and >= 0")
        return cls("lipschitz", L=float(L))

    @classmethod
    def hoelder(cls, C: float, exponent: float) -> "ModulusSpec":
        if not (C > 0 and 0 < exponent <= 1):
            raise DomainError("need C > 0 and exponent in (0, 1]")
        return cls("hoelder", C=float(C), exponent=float(exponent))

    @classmethod
    def sampled(cls, xs, fs) -> "ModulusSpec":
        xs = np.asarray(xs, dtype=float)
        fs = np.asarray(fs, dtype=float)
        if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 2:
            raise DomainError("need matching 1-D arrays with >= 2 samples")
        if np.any(np.diff(xs) <= 0):
            raise DomainError("sample points must be strictly increasing")
        if xs.size > 4001:
            raise DomainError("sampled modulus is limited to 4001 points")
        # spacing must be uniform enough for lag-based gap estimates
        steps = np.diff(xs)
        if steps.max() > 2.0 * steps.min():
            raise DomainError("sampled modulus needs near-uniform spacing")
        n = xs.size
        lag_gap = np.empty(n - 1)
        for lag in range(1, n):
            lag_gap[lag - 1] = np.max(np.abs(fs[lag:] - fs[:-lag]))
        omega_emp = np.maximum.accumulate(lag_gap)
        return cls(
            "sampled",
            lags_x=xs[1:] - xs[0],
            omega=omega_emp,
            safety=2.0,
        )

    def omega(self, t: float) -> float:
        if t <= 0:
            return 0.0
        if self.kind == "lipschitz":
            return self._fields["L"] * t
        if self.kind == "hoelder":
            return self._fields["C"] * t ** self._fields["exponent"]
        lags = self._fields["lags_x"]
        om = self._fields["omega"]
        i = int(np.searchsorted(lags, t, side="right"))
        if i == 0:
            base = om[0]  # below the sample resolution; be conservative
        else:
            base = om[min(i, om.size - 1)] if i < om.size else om[-1]
        return self._fields["safety"] * float(base)

    def inverse(self, eps: float) -> float:
        """Largest t with omega(t) <= eps (inf when omega never reaches eps)."""
        if not eps > 0:
            raise DomainError("eps must be positive")
        if self.kind == "lipschitz":
            L = self._fields["L"]
            return math.inf if L == 0 else eps / L
        if self.kind == "hoelder":
            return (eps / self._fields["C"]) ** (1.0 / self._fields["exponent"])
        lags = self._fields["lags_x"]
        scaled = self._fields["safety"] * self._fields["omega"]
        ok = scaled <= eps
        if not ok.any():
            # even one sample step moves f by more than eps
            return float(lags[0]) / 2.0
        if ok.all():
            return math.inf
        last = int(np.nonzero(ok)[0][-1])
        return float(lags[last])


# ---------------------------------------------------------------------------
# continuous route via staircases


@dataclass(frozen=True)
class ContinuousBuildInfo:
    n_cells: int
    cell_width: float
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    kappa: float
    tau: float
    bands: tuple[tuple[float, float], ...]


def continuous_build_info(
    f: Callable, interval, modulus: ModulusSpec, eps: float
) -> ContinuousBuildInfo:
    lo, hi = (float(interval[0]), float(interval[1]))
    if not lo < hi:
        raise DomainError("interval must have positive length")
    if not eps > 0:
        raise DomainError("eps must be positive")
    length = hi - lo
    width_cap = modulus.inverse(eps / 2.0)
    width = min(width_cap, length)
    n = max(1, math.ceil(length / width)) if width > 0 else STEP_CELL_LIMIT + 1
    if n > STEP_CELL_LIMIT:
        raise InfeasibleError(
            f"eps={eps} needs {n} cells, past the {STEP_CELL_LIMIT} guard"
        )
    bps = tuple(lo + length * i / n for i in range(n + 1))
    mids = [0.5 * (b1 + b2) for b1, b2 in zip(bps, bps[1:])]
    values = tuple(float(f(m)) for m in mids)
    peak = max(abs(v) for v in values)
    if peak == 0.0:
        return ContinuousBuildInfo(
            n_cells=n, cell_width=length / n, breakpoints=bps, values=values,
            kappa=math.nan, tau=math.nan, bands=(),
        )
    info = step_build_info(StepSpec(bps, values), eps / 2.0)
    return ContinuousBuildInfo(
        n_cells=n,
        cell_width=length / n,
        breakpoints=bps,
        values=values,
        kappa=info.kappa,
        tau=info.tau,
        bands=info.bands,
    )


def build_continuous_approx(
    f: Callable, interval, modulus: ModulusSpec, eps: float
) -> FeedForwardNet:
    """Midpoint-sampled staircase at budget eps/2 over cells no wider
    than the modulus inverse at eps/2; banded sup error <= eps."""
    info = continuous_build_info(f, interval, modulus, eps)
    if all(v == 0.0 for v in info.values):
        # the sampled function vanishes; the zero net is exact
        return nw.constant_net(0.0, input_dim=1)
    return build_step_approx(
        StepSpec(info.breakpoints, info.values), eps / 2.0
    )


# ---------------------------------------------------------------------------
# polynomial route


def weierstrass_poly(f: Callable, B: float, delta: float) -> list[float]:
    """Monomial coefficients of a polynomial within delta of f on [-B, B].

    Chebyshev interpolation with degree doubling (4, 8, ..., 64); the
    residual is checked on a grid 10x finer than the node count, and the
    Chebyshev form is converted exactly to monomial coefficients.
    """
    if not B > 0:
        raise DomainError("B must be positive")
    if not delta > 0:
        raise DomainError("delta must be positive")
    fn = as_grid_fn(f)
    best = math.inf
    deg = 4
    while deg <= WEIERSTRASS_DEGREE_CAP:
        cheb = Chebyshev.interpolate(
            lambda x: fn(np.asarray(x).reshape(-1, 1)), deg, domain=[-B, B]
        )
        xs = np.linspace(-B, B, 10 * deg + 1)
        resid = float(np.max(np.abs(cheb(xs) - fn(xs.reshape(-1, 1)))))
        best = min(best, resid)
        if resid < delta:
            mono = cheb.convert(kind=Polynomial, domain=[-B, B], window=[-B, B])
            coef = mono.coef
            scale = np.max(np.abs(coef))
            coef = np.where(np.abs(coef) < 1e-12 * scale, 0.0, coef)
            while coef.size > 1 and coef[-1] == 0.0:
                coef = coef[:-1]
            return [float(c) for c in coef]
        deg *= 2
    raise InfeasibleError(
        f"no polynomial under degree {WEIERSTRASS_DEGREE_CAP} reaches "
        f"residual {delta} (best achieved {best:.3e})"
    )


def build_continuous_via_poly(
    f: Callable,
    B: float,
    eps: float,
    a: float = 0.0,
    beta: float = bl.DEFAULT_BETA,
) -> FeedForwardNet:
    """Interpolating polynomial at eps/2 realized by monomial nets tuned
    (rate calibration plus depth selection) to the other eps/2."""
    coeffs = weierstrass_poly(f, B, eps / 2.0)
    degree = len(coeffs) - 1
    if degree > bl.MAX_POLY_DEGREE:
        raise InfeasibleError(
            f"interpolant needs degree {degree}, above the degree-"
            f"{bl.MAX_POLY_DEGREE} net budget; eps={eps} is unreachable here"
        )
    if degree == 0:
        return nw.constant_net(coeffs[0], input_dim=1)

    def poly_target(pts: np.ndarray) -> np.ndarray:
        return Polynomial(coeffs)(np.asarray(pts)[:, 0])

    def poly_builder(k: int) -> FeedForwardNet:
        return bl.build_polynomial(coeffs, a=a, beta=beta, k=k)

    # For wide domains the error sequence is erratic until beta^k shrinks
    # the composed ranges, so slide the calibration window right until the
    # fit sees clean decay.
    fit = None
    k = None
    for start in (1, 4, 7):
        candidate = bl.calibrate_rate(
            poly_builder,
            poly_target,
            (-B, B),
            range(start, start + 6),
            rate_exponent=2,
            grid_per_dim=2001,
        )
        try:
            k = bl.choose_k(eps / 2.0, candidate)
        except (InfeasibleError, DomainError):
            continue
        if candidate.n_used >= 3:
            fit = candidate
            break
    if fit is None or k is None:
        raise InfeasibleError(
            f"no decaying error regime found for the degree-{degree} "
            f"interpolant on [-{B}, {B}]"
        )
    for _ in range(3):
        net = poly_builder(k)
        err = nw.sup_error(net, poly_target, (-B, B), grid_per_dim=2001).sup_error
        if err <= eps / 2.0:
            return net
        k += 1
    raise InfeasibleError(
        f"polynomial net stalls at error {err:.3e} > eps/2 = {eps / 2.0:.3e} "
        f"(degree {degree}, coefficient peak {max(abs(c) for c in coeffs):.3e})"
    )
