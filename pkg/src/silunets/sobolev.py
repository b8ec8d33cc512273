"""Piecewise-Taylor nets for functions with bounded derivatives.

The domain [-B, B]^d splits into M^d half-open cubes.  On each cube the
function is represented by its Taylor polynomial at the cube center, and
the net realizes

    sum over cubes j, multi-indices alpha:
        C[j, alpha] * bump_1(x_1) * ... * bump_d(x_d) * (x - c_j)^alpha

where each bump is a smoothed indicator of the cube's extent along one
axis and every multiplication is an approximate product net.  A chain of
p factors uses p - 1 products, nested right to left with the bump
factors outermost; bumps are bounded by 1 and the recentered linear
factors by 2B <= 2, which drives the closed-form error recursion below.

Grid resolution M comes from the Taylor remainder, the per-product
accuracy eta from the chain recursion, so the two halves of the error
budget are balanced by construction.
"""
from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import builders as bl
from . import network as nw
from . import stepfun as sf
from .errors import DomainError, InfeasibleError
from .network import FeedForwardNet

CUBE_LIMIT = 1_000_000


# ---------------------------------------------------------------------------
# budgets


def choose_M(eps: float, d: int, n: int, B: float = 1.0) -> int:
    """Cubes per axis so the local Taylor remainder stays below eps/2."""
    _check_shape_args(d, n, B)
    if not eps > 0:
        raise DomainError("eps must be positive")
    M = max(1, math.ceil(B * (2.0 ** (d + 1) / (math.factorial(n) * eps)) ** (1.0 / n)))
    if M**d > CUBE_LIMIT:
        raise InfeasibleError(
            f"eps={eps} needs {M}^{d} cubes, past the {CUBE_LIMIT} guard"
        )
    return M


def choose_eta(eps: float, d: int, n: int) -> float:
    """Per-product accuracy that keeps the summed chain errors below eps/2."""
    _check_shape_args(d, n, 1.0)
    if not eps > 0:
        raise DomainError("eps must be positive")
    return eps / (2.0 ** (d + 1) * float(d) ** n * (2.0 ** (n - 2) - 1.0 + d))


def local_error_bound(n: int, d: int, h: float) -> float:
    """Taylor remainder cap on one cube of side h for a unit-ball function."""
    if not h > 0:
        raise DomainError("h must be positive")
    _check_shape_args(d, n, 1.0)
    return 2.0**d * h**n / (math.factorial(n) * 2.0**n)


def _check_shape_args(d: int, n: int, B: float) -> None:
    if not (isinstance(d, int) and not isinstance(d, bool) and d >= 1):
        raise DomainError("dimension d must be an integer >= 1")
    if not (isinstance(n, int) and not isinstance(n, bool) and n >= 1):
        raise DomainError("smoothness order n must be an integer >= 1")
    if not 0 < B:
        raise DomainError("B must be positive")


# ---------------------------------------------------------------------------
# cube grid


@dataclass(frozen=True)
class CubeGrid:
    d: int
    M: int
    B: float = 1.0

    def __post_init__(self):
        _check_shape_args(self.d, 1, self.B)
        if not (isinstance(self.M, int) and not isinstance(self.M, bool) and self.M >= 1):
            raise DomainError("M must be an integer >= 1")
        if self.B > 1.0:
            raise DomainError(
                f"B={self.B} > 1 is not supported; rescale the coordinates "
                "so the domain fits in [-1, 1]^d"
            )
        if self.M**self.d > CUBE_LIMIT:
            raise InfeasibleError(f"{self.M}^{self.d} cubes exceed the guard")

    @property
    def h(self) -> float:
        return 2.0 * self.B / self.M

    @property
    def cube_count(self) -> int:
        return self.M**self.d

    def cube_indices(self):
        """Row-major enumeration: the last axis varies fastest."""
        return [tuple(j) for j in np.ndindex(*(self.M,) * self.d)]

    def center(self, j: tuple[int, ...]) -> np.ndarray:
        self._check_index(j)
        return np.array([-self.B + (ji + 0.5) * self.h for ji in j])

    def cube_bounds(self, j: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
        self._check_index(j)
        lo = np.array(
            [-self.B if ji == 0 else -self.B + ji * self.h for ji in j]
        )
        hi = np.array(
            [self.B if ji == self.M - 1 else -self.B + (ji + 1) * self.h for ji in j]
        )
        return lo, hi

    def locate(self, x) -> tuple[int, ...]:
        """Index of the half-open cube holding x; the closing face x_i = B
        belongs to the last cube along that axis."""
        pt = np.atleast_1d(np.asarray(x, dtype=float))
        if pt.shape != (self.d,):
            raise DomainError(f"point must have {self.d} coordinates")
        if np.any(pt < -self.B) or np.any(pt > self.B):
            raise DomainError(f"point {pt.tolist()} outside [-B, B]^d")
        idx = np.floor((pt + self.B) / self.h).astype(int)
        idx = np.minimum(idx, self.M - 1)
        return tuple(int(i) for i in idx)

    def _check_index(self, j) -> None:
        if len(j) != self.d or any(not (0 <= ji < self.M) for ji in j):
            raise DomainError(f"cube index {j} out of range for M={self.M}, d={self.d}")


def oracle_cube_indicator(grid: CubeGrid, j: tuple[int, ...], pts: np.ndarray) -> np.ndarray:
    """Exact 0/1 membership of each point in cube j.

    Uses the same index arithmetic as locate so the half-open partition
    is consistent down to float rounding: every in-domain point belongs
    to exactly one cube, with the closing faces at +B folding into the
    last cube along each axis."""
    grid._check_index(j)
    pts = np.asarray(pts, dtype=float)
    in_domain = np.all((pts >= -grid.B) & (pts <= grid.B), axis=1)
    idx = np.minimum(
        np.floor((pts + grid.B) / grid.h).astype(int), grid.M - 1
    )
    inside = in_domain & np.all(idx == np.asarray(j), axis=1)
    return inside.astype(float)


# ---------------------------------------------------------------------------
# multi-indices and Taylor data


def multi_indices(d: int, max_order: int) -> list[tuple[int, ...]]:
    """All multi-indices with |alpha| <= max_order, graded lexicographic."""
    _check_shape_args(d, max(max_order, 0) + 1, 1.0)
    out = []
    for total in range(max_order + 1):
        level = [
            a
            for a in itertools.product(range(total + 1), repeat=d)
            if sum(a) == total
        ]
        out.extend(sorted(level))
    return out


def multi_factorial(alpha: tuple[int, ...]) -> int:
    return math.prod(math.factorial(a) for a in alpha)


@dataclass(frozen=True)
class TaylorData:
    """Scaled derivatives C[j, alpha] = D^alpha f(c_j) / alpha! for every
    cube center, to total order n - 1."""

    grid: CubeGrid
    n: int
    coeffs: dict
    one_sided: frozenset = frozenset()

    def __post_init__(self):
        _check_shape_args(self.grid.d, self.n, 1.0)
        alphas = set(multi_indices(self.grid.d, self.n - 1))
        peak = 0.0
        for j, per_cube in self.coeffs.items():
            self.grid._check_index(j)
            for alpha, value in per_cube.items():
                if alpha not in alphas:
                    raise DomainError(
                        f"coefficient order {alpha} exceeds the n-1 = {self.n - 1} cap"
                    )
                if not math.isfinite(value):
                    raise DomainError(f"coefficient at {j}, {alpha} is not finite")
                peak = max(peak, abs(value))
        if peak > 1.0 + 1e-9:
            warnings.warn(
                f"Taylor coefficient magnitude {peak:.3g} exceeds 1; the "
                "function appears to lie outside the unit smoothness ball",
                RuntimeWarning,
            )

    def coeff(self, j: tuple[int, ...], alpha: tuple[int, ...]) -> float:
        return float(self.coeffs.get(tuple(j), {}).get(tuple(alpha), 0.0))

    def to_json(self) -> str:
        cubes = []
        for j in self.grid.cube_indices():
            per = self.coeffs.get(j, {})
            entry = {
                "center": [float(c) for c in self.grid.center(j)],
                "coeffs": [
                    {"alpha": list(alpha), "value": float(per[alpha])}
                    for alpha in sorted(per, key=lambda a: (sum(a), a))
                ],
            }
            if j in self.one_sided:
                entry["one_sided"] = True
            cubes.append(entry)
        doc = {
            "d": self.grid.d,
            "n": self.n,
            "M": self.grid.M,
            "B": self.grid.B,
            "cubes": cubes,
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TaylorData":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise DomainError(f"invalid Taylor data JSON: {e.msg}") from e
        try:
            grid = CubeGrid(int(doc["d"]), int(doc["M"]), float(doc["B"]))
            n = int(doc["n"])
            coeffs: dict = {}
            flagged = set()
            for entry in doc["cubes"]:
                j = grid.locate(np.asarray(entry["center"], dtype=float))
                coeffs[j] = {
                    tuple(int(a) for a in item["alpha"]): float(item["value"])
                    for item in entry["coeffs"]
                }
                if entry.get("one_sided"):
                    flagged.add(j)
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"malformed Taylor data document: {e}") from e
        return cls(grid, n, coeffs, frozenset(flagged))


def taylor_eval(td: TaylorData, j: tuple[int, ...], pts: np.ndarray) -> np.ndarray:
    """Evaluate cube j's Taylor polynomial at (N, d) points."""
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    rel = pts - td.grid.center(j)
    out = np.zeros(pts.shape[0])
    for alpha, value in td.coeffs.get(tuple(j), {}).items():
        term = np.full(pts.shape[0], value)
        for ax, power in enumerate(alpha):
            if power:
                term = term * rel[:, ax] ** power
        out += term
    return out


def piecewise_taylor_oracle(td: TaylorData, pts: np.ndarray) -> np.ndarray:
    """The ideal piecewise-Taylor target: each point is scored by the
    polynomial of the cube that owns it."""
    pts = np.asarray(pts, dtype=float)
    out = np.zeros(pts.shape[0])
    for j in td.grid.cube_indices():
        mask = oracle_cube_indicator(td.grid, j, pts).astype(bool)
        if mask.any():
            out[mask] = taylor_eval(td, j, pts[mask])
    return out


def derivative_data_from_callback(
    f: Callable,
    grid: CubeGrid,
    n: int,
    derivs: Callable | None = None,
    fd_step: float = 1e-3,
) -> TaylorData:
    """Populate Taylor data from a function of d scalar arguments.

    With `derivs(alpha, point) -> float` the derivatives are taken as
    given; otherwise nested second-order central differences with the
    given step are used, falling back to one-sided stencils (and
    flagging the cube) whenever a stencil point would leave the domain.
    """
    _check_shape_args(grid.d, n, 1.0)
    if not 0 < fd_step < grid.B:
        raise DomainError("fd_step must sit in (0, B)")
    alphas = multi_indices(grid.d, n - 1)
    flagged = set()

    def d_alpha(alpha: tuple[int, ...], pt: np.ndarray, j) -> float:
        if derivs is not None:
            return float(derivs(alpha, tuple(float(c) for c in pt)))
        ax = next((i for i, a in enumerate(alpha) if a > 0), None)
        if ax is None:
            return float(f(*pt))
        rest = tuple(a - (1 if i == ax else 0) for i, a in enumerate(alpha))
        hi = pt.copy(); hi[ax] += fd_step
        lo = pt.copy(); lo[ax] -= fd_step
        if hi[ax] > grid.B:
            flagged.add(j)
            return (d_alpha(rest, pt, j) - d_alpha(rest, lo, j)) / fd_step
        if lo[ax] < -grid.B:
            flagged.add(j)
            return (d_alpha(rest, hi, j) - d_alpha(rest, pt, j)) / fd_step
        return (d_alpha(rest, hi, j) - d_alpha(rest, lo, j)) / (2.0 * fd_step)

    coeffs = {}
    for j in grid.cube_indices():
        c = grid.center(j)
        coeffs[j] = {
            alpha: d_alpha(alpha, c.copy(), j) / multi_factorial(alpha)
            for alpha in alphas
        }
    return TaylorData(grid, n, coeffs, frozenset(flagged))


# ---------------------------------------------------------------------------
# chain error recursion


def error_propagation_bound(num_unit_factors: int, num_wide_factors: int, eta: float) -> float:
    """Worst-case drift of a right-nested approximate-product chain.

    Factors bounded by 1 (bumps) sit outermost, factors bounded by 2
    (recentered coordinates on a domain of radius <= 1) innermost.  Each
    product contributes eta and scales the accumulated error by the
    outer factor's bound, which telescopes to

        eta * (2^(w-1) - 1 + u)    for w >= 1 wide factors,
        eta * max(u - 1, 0)        for none.
    """
    u, w = num_unit_factors, num_wide_factors
    if u < 0 or w < 0:
        raise DomainError("factor counts must be nonnegative")
    if not eta >= 0:
        raise DomainError("eta must be nonnegative")
    if w >= 1:
        return eta * (2.0 ** (w - 1) - 1.0 + u)
    return eta * max(u - 1, 0)


def unrolled_propagation_bound(num_unit_factors: int, num_wide_factors: int, eta: float) -> float:
    """Literal recursion for cross-checking the closed form: innermost
    factor exact, then gamma <- eta + bound * gamma per product."""
    bounds = [1.0] * num_unit_factors + [2.0] * num_wide_factors
    gamma = 0.0
    for outer_bound in reversed(bounds[:-1]):
        gamma = eta + outer_bound * gamma
    return gamma


# ---------------------------------------------------------------------------
# term nets and assembly


def sobolev_bands(grid: CubeGrid, tau: float) -> tuple[tuple[int, float, float], ...]:
    """Per-axis exclusion bands of half-width tau around every cube face."""
    faces = [-grid.B + i * grid.h for i in range(grid.M + 1)]
    return tuple(
        (ax, f - tau, f + tau) for ax in range(grid.d) for f in faces
    )


def build_term_net(
    grid: CubeGrid,
    j: tuple[int, ...],
    alpha: tuple[int, ...],
    kappa: float,
    tau: float,
    product_net: FeedForwardNet,
) -> FeedForwardNet:
    """One summand: smoothed cube indicator times (x - c_j)^alpha.

    The factor chain holds one bump per axis, then alpha_i recentered
    coordinate factors in ascending axis order, multiplied right to left
    so the unit-bounded bumps are applied outermost.
    """
    grid._check_index(j)
    if len(alpha) != grid.d or any(a < 0 for a in alpha):
        raise DomainError(f"bad multi-index {alpha} for d={grid.d}")
    lo, hi = grid.cube_bounds(j)
    center = grid.center(j)
    factors = []
    for ax in range(grid.d):
        bump = sf.build_bump(sf.BumpParams(float(lo[ax]), float(hi[ax]), tau, kappa))
        select = np.zeros((1, grid.d)); select[0, ax] = 1.0
        factors.append(nw.compose(bump, nw.affine_net(select, [0.0])))
    for ax in range(grid.d):
        row = np.zeros((1, grid.d)); row[0, ax] = 1.0
        for _ in range(alpha[ax]):
            factors.append(nw.affine_net(row, [-float(center[ax])]))
    chain = factors[-1]
    for factor in reversed(factors[:-1]):
        paired = nw.stack_parallel([factor, chain])
        chain = nw.compose(product_net, paired, wiring=[0, 1])
    return chain


@dataclass(frozen=True)
class SobolevBuildReport:
    M: int
    cube_count: int
    k: int
    eta: float
    net_size: int
    net_depth: int
    predicted_local_bound: float
    measured_error: float | None = None


def calibrate_product_k(eta: float, box: float, beta: float = bl.DEFAULT_BETA) -> int:
    """Scale steps needed for the pairwise product to hit accuracy eta on
    [-box, box]^2, found by rate calibration."""

    def xy(pts: np.ndarray) -> np.ndarray:
        return pts[:, 0] * pts[:, 1]

    fit = bl.calibrate_rate(
        lambda k: bl.build_product(0.0, beta, k),
        xy,
        ((-box, box), (-box, box)),
        range(1, 7),
        rate_exponent=2,
        grid_per_dim=101,
    )
    return bl.choose_k(eta, fit)


def build_sobolev_net(
    td: TaylorData, eps: float, beta: float = bl.DEFAULT_BETA
) -> tuple[FeedForwardNet, SobolevBuildReport]:
    """Assemble the piecewise-Taylor net for the tolerance that sized the
    grid; returns the net and a build report."""
    grid, n = td.grid, td.n
    d, B = grid.d, grid.B
    expected = choose_M(eps, d, n, B)
    if grid.M != expected:
        raise DomainError(
            f"Taylor data uses M={grid.M} but eps={eps} requires M={expected}; "
            "regenerate the data on the matching grid"
        )
    eta = choose_eta(eps, d, n)
    kappa, tau = sf.choose_kappa_tau(min(eta, 0.49), grid.h)
    box = max(2.0, (2.0 * B) ** max(n - 1, 1)) * 1.25
    k = calibrate_product_k(eta, box, beta)
    product_net = bl.build_product(0.0, beta, k)

    terms, weights = [], []
    for j in grid.cube_indices():
        for alpha in multi_indices(d, n - 1):
            value = td.coeff(j, alpha)
            if value != 0.0:
                terms.append(build_term_net(grid, j, alpha, kappa, tau, product_net))
                weights.append(value)
    if not terms:
        net = nw.constant_net(0.0, input_dim=d)
    else:
        net = nw.affine_combination(terms, weights, constant=0.0)
    s = nw.summary(net)
    report = SobolevBuildReport(
        M=grid.M,
        cube_count=grid.cube_count,
        k=k,
        eta=eta,
        net_size=s.nonzero_param_count,
        net_depth=s.depth,
        predicted_local_bound=local_error_bound(n, d, grid.h),
        measured_error=None,
    )
    return net, report
