"""Exception hierarchy shared by every chebdyn module."""

from __future__ import annotations

from typing import Any, Optional


class ChebdynError(RuntimeError):
    """Base class for failures raised by map construction and analysis."""


class ZeroPolynomial(ChebdynError):
    """Raised when an operation needs a polynomial that is not identically zero."""


class ZeroDenominator(ChebdynError):
    """Raised when a rational map would have an identically zero denominator."""


class NonConvergence(ChebdynError):
    """Raised when the root finder misses its residual target.

    The best approximation reached before the iteration cap is kept on
    ``best_effort`` so callers can still inspect it.
    """

    def __init__(self, message: str, best_effort: Optional[Any] = None):
        super().__init__(message)
        self.best_effort = best_effort


class Indeterminate(ChebdynError):
    """Raised when numerator and denominator vanish together (0/0)."""


class DegenerateInput(ChebdynError):
    """Raised when f = p·e^q is constant or a map has no isolated fixed points."""


class NotParabolicAtInfinity(ChebdynError):
    """Raised when ∞ is not a fixed point of multiplier 1."""


class NotAFixedPoint(ChebdynError):
    """Raised when a multiplier is requested at a point that is not fixed."""


class EvenN(ChebdynError):
    """Raised for even n where only odd n has real extraneous fixed points."""


class NotCentered(ChebdynError):
    """Raised when a symmetry check needs a grid centred on the symmetry axis."""


class PoleOutsideViewport(ChebdynError):
    """Raised when a pole handed to the boundary check lies off the grid."""
