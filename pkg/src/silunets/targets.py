"""Named reference functions for verification and the command line.

Every target carries two callables over the same function: `batch` maps
an (N, d) array of points to an (N,) array of values, which is what the
measurement grid wants, and `point` takes d scalar arguments, which is
what the Taylor-data builder wants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError


@dataclass(frozen=True)
class Target:
    name: str
    input_dim: int
    batch: Callable
    point: Callable


def _one_dim(name: str, vec: Callable) -> Target:
    return Target(
        name=name,
        input_dim=1,
        batch=lambda pts: vec(np.asarray(pts, dtype=float)[:, 0]),
        point=lambda x: float(vec(np.asarray([x], dtype=float))[0]),
    )


def monomial_target(m: int) -> Target:
    if not (isinstance(m, int) and m >= 0):
        raise DomainError("monomial power must be a nonnegative integer")
    return _one_dim(f"x^{m}", lambda x: x**m)


def poly_target(coeffs) -> Target:
    coeffs = [float(c) for c in coeffs]
    if not coeffs or not all(math.isfinite(c) for c in coeffs):
        raise DomainError("polynomial coefficients must be a nonempty finite list")
    p = Polynomial(coeffs)
    name = "poly:" + ",".join(f"{c:g}" for c in coeffs)
    return _one_dim(name, p)


def indicator_target(lo: float, hi: float) -> Target:
    if not lo < hi:
        raise DomainError("indicator needs lo < hi")
    return _one_dim(
        f"indicator:{lo:g},{hi:g}", lambda x: ((x >= lo) & (x < hi)).astype(float)
    )


def sampled_target(xs, ys, name: str = "sampled") -> Target:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise DomainError("sampled target needs matching 1-D arrays, >= 2 points")
    if np.any(np.diff(xs) <= 0):
        raise DomainError("sample points must be strictly increasing")
    return _one_dim(name, lambda x: np.interp(x, xs, ys))


def sampled_target_from_file(path: str) -> Target:
    try:
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except OSError as e:
        raise DomainError(f"cannot read sample file: {e}") from e
    except ValueError as e:
        raise DomainError(f"sample file is not two-column CSV: {e}") from e
    if data.shape[1] != 2:
        raise DomainError("sample file must have two columns: x, value")
    return sampled_target(data[:, 0], data[:, 1], name=f"sampled:{path}")


def _logcos_vec(x: np.ndarray) -> np.ndarray:
    return np.log(7.0 + x) * np.cos(x**3)


def product_target() -> Target:
    return Target(
        name="xy",
        input_dim=2,
        batch=lambda pts: np.asarray(pts)[:, 0] * np.asarray(pts)[:, 1],
        point=lambda x, y: float(x) * float(y),
    )


def sincos2d_target() -> Target:
    """The two-variable demo surface sin(pi x) cos(pi x) / (2 pi)."""

    def vec(x):
        return np.sin(math.pi * x) * np.cos(math.pi * x) / (2.0 * math.pi)

    return Target(
        name="sincos2d",
        input_dim=2,
        batch=lambda pts: vec(np.asarray(pts, dtype=float)[:, 0]),
        point=lambda x, y: float(vec(np.asarray(x))),
    )


_FIXED = {
    "sin": lambda: _one_dim("sin", np.sin),
    "cos": lambda: _one_dim("cos", np.cos),
    "sigmoid": lambda: _one_dim(
        "sigmoid", lambda x: np.where(x >= 0, 1.0 / (1.0 + np.exp(-np.abs(x))),
                                      np.exp(-np.abs(x)) / (1.0 + np.exp(-np.abs(x))))
    ),
    "logcos": lambda: _one_dim("logcos", _logcos_vec),
    "xy": product_target,
    "sincos2d": sincos2d_target,
}


def parse_target(spec: str) -> Target:
    """Resolve a target spec string.

    Accepted forms: a fixed name (sin, cos, sigmoid, logcos, xy,
    sincos2d), x^m, poly:c0,c1,..., indicator:lo,hi, sampled:path.
    """
    spec = spec.strip()
    if spec in _FIXED:
        return _FIXED[spec]()
    if spec.startswith("x^"):
        try:
            return monomial_target(int(spec[2:]))
        except ValueError as e:
            raise DomainError(f"bad monomial target {spec!r}") from e
    if spec.startswith("poly:"):
        try:
            coeffs = [float(c) for c in spec[5:].split(",")]
        except ValueError as e:
            raise DomainError(f"bad polynomial target {spec!r}") from e
        return poly_target(coeffs)
    if spec.startswith("indicator:"):
        parts = spec[len("indicator:"):].split(",")
        if len(parts) != 2:
            raise DomainError("indicator target wants indicator:lo,hi")
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError as e:
            raise DomainError(f"bad indicator target {spec!r}") from e
        return indicator_target(lo, hi)
    if spec.startswith("sampled:"):
        return sampled_target_from_file(spec[len("sampled:"):])
    raise DomainError(
        f"unknown target {spec!r}; use sin, cos, sigmoid, logcos, xy, "
        "sincos2d, x^m, poly:c0,c1,..., indicator:lo,hi, or sampled:path"
    )
