"""Chebyshev and Newton iteration maps of f = p·e^q as exact rational maps.

Build maps with :mod:`chebdyn.maps`, analyse fixed and critical points with
:mod:`chebdyn.fixed`, iterate and render basins with :mod:`chebdyn.dynamics`
and run the numeric claim checks in :mod:`chebdyn.verify`.
"""

from .errors import ChebdynError, DegenerateInput
from .maps import build_chebyshev, build_cn, build_newton, cn_function
from .types import ComplexPoly, ExpPolyFunction, RationalMap

__all__ = [
    "ChebdynError",
    "DegenerateInput",
    "ComplexPoly",
    "ExpPolyFunction",
    "RationalMap",
    "build_chebyshev",
    "build_cn",
    "build_newton",
    "cn_function",
]
