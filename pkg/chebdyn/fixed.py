"""Fixed points, critical points and multipliers of the built maps.

General maps go through root finding on num − z·den (fixed points) and
num′·den − num·den′ (critical points). The C_n family additionally has
closed forms: extraneous fixed points are n-th roots of the two negative
roots w of 3n²w² + n(n+5)w + 2, and free critical points are n-th roots of
the three roots of the cubic F(w) below.
"""

from __future__ import annotations

import cmath
import math
import sys
from typing import List, Optional, Tuple

from . import config
from .errors import DegenerateInput, EvenN, NotAFixedPoint
from .maps import build_cn, series_at_infinity
from .poly import (
    backward_residual,
    poly_derivative,
    poly_mul,
    poly_roots,
    poly_shift,
    poly_sub,
    rational_derivative_eval,
    rational_eval,
)
from .types import (
    INFINITY,
    Classification,
    ComplexPoly,
    CriticalPointRecord,
    FixedPointRecord,
    RationalMap,
    is_infinite,
)


def _warn(message: str) -> None:
    print(f"[WARN] {message}", file=sys.stderr)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def is_root_of_unity(value: complex, tol: float = config.CLASS_TOL) -> bool:
    """Within tol of exp(2πi·k/q) for some q <= PARABOLIC_MAX_ORDER."""

    if abs(abs(value) - 1.0) > tol:
        return False
    turn = cmath.phase(value) / (2 * math.pi)
    for q in range(1, config.PARABOLIC_MAX_ORDER + 1):
        k = round(turn * q)
        if abs(value - cmath.exp(2j * math.pi * k / q)) <= tol:
            return True
    return False


def classify_multiplier(value: complex) -> Classification:
    modulus = abs(value)
    if modulus < config.CLASS_TOL:
        return "superattracting"
    if is_root_of_unity(value):
        return "parabolic"
    if modulus < 1.0 - config.CLASS_TOL:
        return "attracting"
    if modulus > 1.0 + config.CLASS_TOL:
        return "repelling"
    return "neutral-irrational"


# ---------------------------------------------------------------------------
# General maps
# ---------------------------------------------------------------------------

def infinity_fixed_point(R: RationalMap) -> Optional[Tuple[complex, int]]:
    """(multiplier, multiplicity) of ∞, or None when ∞ is not fixed.

    Multiplicity 1 unless ∞ is parabolic, where it is read from the series.
    """

    dn, dd = R.num.degree, R.den.degree
    if R.num.is_zero or dn <= dd:
        return None
    if dn > dd + 1:
        return 0j, 1
    value = complex(R.den.leading / R.num.leading)
    if abs(value - 1.0) > config.SERIES_TOL:
        return value, 1
    series = series_at_infinity(R)
    if series.multiplicity is None:
        raise DegenerateInput("infinity is not an isolated fixed point")
    return 1.0 + 0j, series.multiplicity


def fixed_points(R: RationalMap, p: Optional[ComplexPoly] = None) -> List[FixedPointRecord]:
    """All deg(R) + 1 fixed points, counted with multiplicity.

    Finite points are roots of num − z·den; when ``p`` is given, those that
    are roots of p are tagged ``root-of-p``.
    """

    if R.is_constant:
        raise DegenerateInput("constant maps are excluded from fixed-point analysis")
    F = poly_sub(R.num, poly_shift(R.den, 1))
    if F.is_zero:
        raise DegenerateInput("the identity map has no isolated fixed points")

    at_infinity = infinity_fixed_point(R)
    if at_infinity is not None and at_infinity[1] > 1:
        # leading coefficients of num − z·den cancel to the order of ∞
        F = ComplexPoly(F.coeffs[: R.degree + 2 - at_infinity[1]])

    records: List[FixedPointRecord] = []
    if F.degree >= 1:
        found = poly_roots(F)
        for root, mult in zip(found.roots, found.multiplicities):
            value = rational_derivative_eval(R, root)
            kind = "extraneous"
            if p is not None and backward_residual(p, root) <= config.FIX_TOL:
                kind = "root-of-p"
            records.append(FixedPointRecord(root, value, mult, kind, classify_multiplier(value)))

    if at_infinity is not None:
        value, mult = at_infinity
        records.append(FixedPointRecord(INFINITY, value, mult, "infinity", classify_multiplier(value)))

    total = sum(r.multiplicity for r in records)
    if total != R.degree + 1:
        _warn(f"fixed-point census {total} differs from deg + 1 = {R.degree + 1}")
    return records


def multiplier(R: RationalMap, z: complex) -> complex:
    """R′(z) at a fixed point z; at ∞ the derivative of 1/R(1/w) at 0."""

    if is_infinite(z):
        at_infinity = infinity_fixed_point(R)
        if at_infinity is None:
            raise NotAFixedPoint("infinity is not fixed by this map")
        return at_infinity[0]

    image = rational_eval(R, z)
    if is_infinite(image) or abs(image - z) > config.FIX_TOL * (1 + abs(z)):
        raise NotAFixedPoint(f"R({z}) = {image} is not {z}")
    return rational_derivative_eval(R, z)


def critical_points(R: RationalMap, p: Optional[ComplexPoly] = None) -> List[CriticalPointRecord]:
    """Finite critical points: roots of num′·den − num·den′.

    A pole of order m shows up with multiplicity m − 1.
    """

    W = poly_sub(
        poly_mul(poly_derivative(R.num), R.den),
        poly_mul(R.num, poly_derivative(R.den)),
    )
    if W.degree < 1:
        return []

    records: List[CriticalPointRecord] = []
    found = poly_roots(W)
    for root, mult in zip(found.roots, found.multiplicities):
        if backward_residual(R.den, root) <= config.GCD_TOL:
            category = "pole"
        elif p is not None and backward_residual(p, root) <= config.FIX_TOL:
            category = "zero-of-p"
        else:
            category = "free"
        records.append(CriticalPointRecord(root, mult, category))
    return records


# ---------------------------------------------------------------------------
# Closed forms for C_n
# ---------------------------------------------------------------------------

def nth_roots(value: complex, n: int) -> List[complex]:
    """All n-th roots, principal branch first.

    A real value with a real n-th root gets that root exactly (−|w|^{1/n}
    for negative w and odd n).
    """

    value = complex(value)
    modulus = abs(value) ** (1.0 / n)
    base = cmath.phase(value)
    roots = [cmath.rect(modulus, (base + 2 * math.pi * k) / n) for k in range(n)]
    if value.imag == 0:
        if value.real >= 0:
            roots[0] = complex(modulus, 0)
        elif n % 2:
            roots[(n - 1) // 2] = complex(-modulus, 0)
    return roots


def extraneous_w(n: int) -> Tuple[float, float]:
    """Roots (w₁, w₂), w₂ < w₁ < 0, of 3n²w² + n(n+5)w + 2 = 0."""

    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    disc = math.sqrt(n * n + 10 * n + 1)
    return (-(n + 5) + disc) / (6 * n), (-(n + 5) - disc) / (6 * n)


def extraneous_multiplier_cn(n: int, w: float) -> float:
    """1 + ½·n²w[n(n−1)w − (n+1)] / (nw + 1)⁴ at any e₀ with e₀ⁿ = w."""

    return 1.0 + 0.5 * n * n * w * (n * (n - 1) * w - (n + 1)) / (n * w + 1) ** 4


def extraneous_cn(n: int) -> List[FixedPointRecord]:
    """The 2n extraneous fixed points of C_n from the closed form.

    Each point is checked against build_cn(n) and each closed-form
    multiplier against the numeric derivative.
    """

    R = build_cn(n)
    records: List[FixedPointRecord] = []
    for w in extraneous_w(n):
        closed = extraneous_multiplier_cn(n, w)
        for z in nth_roots(w, n):
            image = rational_eval(R, z)
            if is_infinite(image) or abs(image - z) > config.FIX_TOL * (1 + abs(z)):
                raise NotAFixedPoint(f"closed-form extraneous point {z} is not fixed by C_{n}")
            numeric = rational_derivative_eval(R, z)
            if abs(numeric - closed) > 1e-7 * max(1.0, abs(closed)):
                _warn(f"C_{n} multiplier at {z}: closed {closed:.12g}, numeric {numeric:.12g}")
            records.append(
                FixedPointRecord(z, complex(closed), 1, "extraneous", classify_multiplier(closed))
            )
    return records


def real_extraneous_cn(n: int) -> Tuple[float, float]:
    """(e₁, e₂), e₁ > e₂ > 0, with −e₁ and −e₂ the real extraneous points of odd C_n."""

    if n % 2 == 0:
        raise EvenN(f"C_{n} has no real extraneous fixed point for even n")
    w1, w2 = extraneous_w(n)
    return abs(w2) ** (1.0 / n), abs(w1) ** (1.0 / n)


def critical_cubic(n: int) -> ComplexPoly:
    """F(w) = 2n³w³ + n²(3n+5)w² + n(2n²+3n+4)w − (n² − 1)."""

    return ComplexPoly((
        -(n * n - 1),
        n * (2 * n * n + 3 * n + 4),
        n * n * (3 * n + 5),
        2 * n**3,
    ))


def critical_values_w(n: int) -> Tuple[float, complex]:
    """(r, c): the real root r ∈ (0, 1) of F and the root c with Im c > 0."""

    roots = poly_roots(critical_cubic(n)).roots
    real_root = min(roots, key=lambda w: abs(w.imag))
    c = max(roots, key=lambda w: w.imag)
    return real_root.real, c


def positive_critical_point(n: int) -> float:
    """c_r, the positive real n-th root of r."""

    r, _ = critical_values_w(n)
    return r ** (1.0 / n)


def critical_points_cn(n: int) -> List[CriticalPointRecord]:
    """0 (multiplicity n), the n poles (multiplicity 2) and 3n free points tagged r / c / c-bar."""

    if n < 2:
        raise ValueError("C_1 is handled by critical_points_c1")
    r, c = critical_values_w(n)
    records = [CriticalPointRecord(0j, n, "zero-of-p")]
    records.extend(CriticalPointRecord(z, 2, "pole") for z in nth_roots(-1.0 / n, n))
    for tag, value in (("r", complex(r, 0)), ("c", c), ("c-bar", c.conjugate())):
        records.extend(CriticalPointRecord(z, 1, "free", tag) for z in nth_roots(value, n))
    return records


def critical_points_c1() -> List[CriticalPointRecord]:
    """0 (multiplicity 2), the pole −1 (multiplicity 2) and the free points −2 ± (√2/2)i."""

    R = build_cn(1)
    free = [complex(-2, math.sqrt(2) / 2), complex(-2, -math.sqrt(2) / 2)]
    for z in free:
        if abs(rational_derivative_eval(R, z)) > 1e-10:
            _warn(f"C_1'({z}) is not zero")
    return [
        CriticalPointRecord(0j, 2, "zero-of-p"),
        CriticalPointRecord(-1 + 0j, 2, "pole"),
        *(CriticalPointRecord(z, 1, "free") for z in free),
    ]


def real_zeros_cn(n: int) -> List[float]:
    """Real zeros of C_n in increasing order.

    Nonzero zeros satisfy zⁿ = (−3 ± √(8n + 1))/(4n).
    """

    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return [-1.5, 0.0]
    root = math.sqrt(8 * n + 1)
    y_plus, y_minus = (-3 + root) / (4 * n), (-3 - root) / (4 * n)
    z_plus = y_plus ** (1.0 / n)
    if n % 2 == 0:
        return [-z_plus, 0.0, z_plus]
    return [-abs(y_minus) ** (1.0 / n), 0.0, z_plus]
