"""Typed errors shared across the package.

Every guard in the library raises one of these so callers (and the CLI)
can distinguish bad input from capacity limits from numerical dead ends.
"""
from __future__ import annotations


class SiluNetError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SiluNetError):
    """An argument is outside the range the operation is defined on."""


class CapacityError(SiluNetError):
    """A size/order limit was exceeded (table order, degree, matrix size)."""


class DegenerateShiftError(SiluNetError):
    """The normalizing coefficient at the requested shift is numerically zero.

    Raised when |leading coefficient| < 1e-10, e.g. for the shallow monomial
    construction with odd degree >= 3 at shift a = 0, where the leading
    coefficient vanishes identically and the weights cannot be normalized.
    """


class OverflowGuardError(SiluNetError):
    """A forward pass produced an intermediate beyond the 1e300 guard."""

    def __init__(self, layer_index: int, magnitude: float):
        self.layer_index = layer_index
        self.magnitude = magnitude
        super().__init__(
            f"layer {layer_index}: intermediate magnitude {magnitude:.3e} "
            f"exceeds the 1e300 overflow guard"
        )


class InfeasibleError(SiluNetError):
    """The requested accuracy/size cannot be met within the guards."""


class WiringError(SiluNetError):
    """Composition wiring is inconsistent with the nets' dimensions."""


class ParseError(SiluNetError):
    """Serialized input could not be parsed; carries position context."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
