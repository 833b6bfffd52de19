"""Shared data structures for map construction, analysis and rendering."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Literal, Optional, Tuple

import numpy as np

from .errors import ZeroDenominator, ZeroPolynomial

# Marker returned wherever a value is the point at infinity.
INFINITY = complex(math.inf, 0.0)

FixedPointKind = Literal["root-of-p", "extraneous", "infinity"]
Classification = Literal[
    "superattracting", "attracting", "parabolic", "repelling", "neutral-irrational"
]
CriticalCategory = Literal["zero-of-p", "pole", "free"]
CubeRootTag = Literal["r", "c", "c-bar"]
OrbitLimit = Literal["basin-zero", "basin-infinity", "unresolved"]
Verdict = Literal["pass", "fail", "informational"]

FIXED_POINT_KINDS = ("root-of-p", "extraneous", "infinity")
CLASSIFICATIONS = ("superattracting", "attracting", "parabolic", "repelling", "neutral-irrational")
CRITICAL_CATEGORIES = ("zero-of-p", "pole", "free")
CUBE_ROOT_TAGS = ("r", "c", "c-bar")
ORBIT_LIMITS = ("basin-zero", "basin-infinity", "unresolved")
VERDICTS = ("pass", "fail", "informational")

# Per-pixel codes stored in BasinGrid.codes
UNRESOLVED = 0
BASIN_ZERO = 1
BASIN_INFINITY = 2


def is_infinite(z: complex) -> bool:
    return cmath.isinf(z)


@dataclass(frozen=True)
class ComplexPoly:
    """Dense polynomial with ascending coefficients (``coeffs[k]`` multiplies z^k).

    Trailing zero coefficients are dropped on construction, so the zero
    polynomial is the empty tuple and ``degree`` is -1 for it.
    """

    coeffs: Tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        values = tuple(complex(c) for c in self.coeffs)
        if not all(cmath.isfinite(c) for c in values):
            raise ValueError(f"ComplexPoly coefficients must be finite, got {values}")
        end = len(values)
        while end and values[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", values[:end])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> complex:
        if self.is_zero:
            raise ZeroPolynomial("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "ComplexPoly":
        return cls((0,) * k + (c,))


ZERO_POLY = ComplexPoly(())
ONE_POLY = ComplexPoly((1,))
Z_POLY = ComplexPoly((0, 1))


@dataclass(frozen=True)
class RationalMap:
    """num/den pair. Reduced form is established by ``poly.rational_reduce``."""

    num: ComplexPoly
    den: ComplexPoly

    def __post_init__(self) -> None:
        if self.den.is_zero:
            raise ZeroDenominator("RationalMap denominator is identically zero")

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0


@dataclass(frozen=True)
class RootSet:
    """Distinct roots with multiplicities.

    Attributes
    ----------
    roots:
        Distinct roots (cluster centroids for merged clusters).
    multiplicities:
        Multiplicity of each root; they sum to the input degree.
    residual:
        Largest backward-relative residual over the returned roots.
    tol:
        Residual tolerance the finder was asked to reach.
    """

    roots: Tuple[complex, ...]
    multiplicities: Tuple[int, ...]
    residual: float
    tol: float

    def __post_init__(self) -> None:
        if len(self.roots) != len(self.multiplicities):
            raise ValueError("RootSet roots and multiplicities differ in length")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("RootSet multiplicities must be >= 1")

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> list[complex]:
        """Roots repeated by multiplicity."""

        out: list[complex] = []
        for r, m in zip(self.roots, self.multiplicities):
            out.extend([r] * m)
        return out


@dataclass(frozen=True)
class ExpPolyFunction:
    """f = p·e^q. ``q`` is stored with q(0) = 0 because the built maps ignore it."""

    p: ComplexPoly
    q: ComplexPoly = ZERO_POLY

    def __post_init__(self) -> None:
        if self.p.is_zero:
            raise ZeroPolynomial("p must not be identically zero")
        if not self.q.is_zero and self.q.coeffs[0] != 0:
            object.__setattr__(self, "q", ComplexPoly((0,) + self.q.coeffs[1:]))


@dataclass(frozen=True)
class InfinitySeries:
    """Coefficients a_1..a_m of g(w) = 1/R(1/w) at w = 0.

    ``multiplicity`` is the first k >= 2 with |a_k| above the series
    tolerance, or None when every computed coefficient past a_1 vanishes.
    """

    coefficients: Tuple[complex, ...]
    multiplicity: Optional[int]

    def coefficient(self, k: int) -> complex:
        return self.coefficients[k - 1]

    @property
    def petals(self) -> Optional[int]:
        return None if self.multiplicity is None else self.multiplicity - 1


@dataclass(frozen=True)
class FixedPointRecord:
    location: complex
    multiplier: complex
    multiplicity: int
    kind: FixedPointKind
    classification: Classification

    def __post_init__(self) -> None:
        if self.kind not in FIXED_POINT_KINDS:
            raise ValueError(f"unknown fixed point kind '{self.kind}'")
        if self.classification not in CLASSIFICATIONS:
            raise ValueError(f"unknown classification '{self.classification}'")
        if self.multiplicity < 1:
            raise ValueError("fixed point multiplicity must be >= 1")
        if (self.kind == "infinity") != is_infinite(self.location):
            raise ValueError("kind 'infinity' must go with the infinity marker")


@dataclass(frozen=True)
class CriticalPointRecord:
    location: complex
    multiplicity: int
    category: CriticalCategory
    tag: Optional[CubeRootTag] = None

    def __post_init__(self) -> None:
        if self.category not in CRITICAL_CATEGORIES:
            raise ValueError(f"unknown critical point category '{self.category}'")
        if self.tag is not None and self.tag not in CUBE_ROOT_TAGS:
            raise ValueError(f"unknown cube-root tag '{self.tag}'")
        if self.multiplicity < 1:
            raise ValueError("critical point multiplicity must be >= 1")


@dataclass(frozen=True)
class AffineMap:
    """T(z) = scale·z + shift."""

    scale: complex
    shift: complex = 0j

    def __post_init__(self) -> None:
        if self.scale == 0:
            raise ValueError("AffineMap scale must be nonzero")

    def __call__(self, z: Any) -> Any:
        return self.scale * z + self.shift

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.scale, -self.shift / self.scale)

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(1.0, 0j)


@dataclass(frozen=True)
class OrbitResult:
    limit: OrbitLimit
    iterations: int
    final: complex

    def __post_init__(self) -> None:
        if self.limit not in ORBIT_LIMITS:
            raise ValueError(f"unknown orbit limit '{self.limit}'")


@dataclass(frozen=True)
class Viewport:
    """Rectangular window of the complex plane sampled at pixel centres.

    ``half_width`` is horizontal; the vertical half-extent follows from the
    pixel aspect ratio, so pixels are square.
    """

    center: complex
    half_width: float
    width: int
    height: int

    def __post_init__(self) -> None:
        if not self.half_width > 0:
            raise ValueError(f"Viewport half_width must be > 0, got {self.half_width}")
        if self.width < 1 or self.height < 1:
            raise ValueError(f"Viewport size must be positive, got {self.width}x{self.height}")

    @property
    def pixel_size(self) -> float:
        return 2.0 * self.half_width / self.width

    @property
    def half_height(self) -> float:
        return self.half_width * self.height / self.width

    def pixel_centers(self, rows: Optional[slice] = None) -> np.ndarray:
        """Complex pixel centres, row 0 at the top (largest imaginary part)."""

        row_idx = np.arange(self.height)[rows if rows is not None else slice(None)]
        col_idx = np.arange(self.width)
        x = self.center.real - self.half_width + (col_idx + 0.5) * self.pixel_size
        y = self.center.imag + self.half_height - (row_idx + 0.5) * self.pixel_size
        return x[np.newaxis, :] + 1j * y[:, np.newaxis]

    def pixel_index(self, z: Any) -> Tuple[Any, Any]:
        """(row, col) of the pixel containing z; may fall outside the grid."""

        col = np.floor((np.real(z) - (self.center.real - self.half_width)) / self.pixel_size)
        row = np.floor(((self.center.imag + self.half_height) - np.imag(z)) / self.pixel_size)
        return row.astype(int), col.astype(int)

    def contains(self, z: complex) -> bool:
        row, col = self.pixel_index(np.asarray(z))
        return bool(0 <= row < self.height and 0 <= col < self.width)


@dataclass(frozen=True, eq=False)
class BasinGrid:
    """Per-pixel orbit codes (UNRESOLVED / BASIN_ZERO / BASIN_INFINITY) and iteration counts."""

    viewport: Viewport
    codes: np.ndarray
    iterations: np.ndarray

    def __post_init__(self) -> None:
        shape = (self.viewport.height, self.viewport.width)
        if self.codes.shape != shape or self.iterations.shape != shape:
            raise ValueError(
                f"BasinGrid arrays must have shape {shape}, got "
                f"{self.codes.shape} and {self.iterations.shape}"
            )

    def fraction(self, code: int) -> float:
        return float(np.mean(self.codes == code))


@dataclass(frozen=True)
class ClaimReport:
    """Machine-checkable verdict for one quantitative claim."""

    claim_id: str
    parameters: Dict[str, Any]
    verdict: Verdict
    witnesses: Dict[str, Any]
    tolerance: float
    notes: str = ""

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict '{self.verdict}'")


@dataclass(frozen=True)
class GnProfile:
    """G_n(y) = 4n³y³ + 9n²y² + (7n − n²)y + 2 around its critical point c_n.

    Attributes
    ----------
    n:
        Even exponent.
    c_n:
        (−9 + √(12n − 3))/(12n); positive only for n >= 8.
    g_closed:
        G_n(c_n) from the closed critical-value formula.
    g_direct:
        G_n(c_n) by direct polynomial evaluation.
    positive:
        Whether G_n > 0 on (0, ∞).
    """

    n: int
    c_n: float
    g_closed: float
    g_direct: float
    positive: bool


@dataclass(frozen=True)
class IntervalSign:
    """Sign of C_n(x) − x and C_n′(x) on one open interval of the real line (0 = mixed)."""

    left: str
    right: str
    displacement_sign: int
    derivative_sign: int


@dataclass(frozen=True)
class RealLineProfile:
    n: int
    breakpoints: Tuple[Tuple[str, float], ...]
    intervals: Tuple[IntervalSign, ...]
    ordered: bool
    even_displacement_ok: Optional[bool] = None
    notes: Dict[str, Any] = field(default_factory=dict)
