"""Dense complex polynomial and rational-function arithmetic.

Polynomials are ``ComplexPoly`` values with ascending coefficients; every
function here is pure and returns new values. Root finding is
Aberth–Ehrlich simultaneous iteration with exact handling of roots at the
origin and cluster merging for multiple roots.
"""

from __future__ import annotations

import math
from typing import Any, List, Sequence, Tuple

import numpy as np

from . import config
from .errors import Indeterminate, NonConvergence, ZeroDenominator, ZeroPolynomial
from .types import INFINITY, ONE_POLY, ZERO_POLY, ComplexPoly, RationalMap, RootSet, is_infinite


# ---------------------------------------------------------------------------
# Polynomial arithmetic
# ---------------------------------------------------------------------------

def poly_eval(p: ComplexPoly, z: Any) -> Any:
    """Horner evaluation at a scalar or at every entry of a numpy array."""

    if isinstance(z, np.ndarray):
        if p.is_zero:
            return np.zeros(z.shape, dtype=complex)
        return np.polyval(p.as_array()[::-1], z)
    if p.is_zero:
        return 0j
    return complex(np.polyval(p.as_array()[::-1], z))


def poly_derivative(p: ComplexPoly) -> ComplexPoly:
    return ComplexPoly(tuple(k * c for k, c in enumerate(p.coeffs))[1:])


def poly_add(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    size = max(len(p.coeffs), len(q.coeffs))
    a = np.zeros(size, dtype=complex)
    a[: len(p.coeffs)] += p.as_array()
    a[: len(q.coeffs)] += q.as_array()
    return ComplexPoly(tuple(a))


def poly_scale(p: ComplexPoly, c: complex) -> ComplexPoly:
    return ComplexPoly(tuple(c * x for x in p.coeffs))


def poly_sub(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    return poly_add(p, poly_scale(q, -1))


def poly_mul(p: ComplexPoly, q: ComplexPoly) -> ComplexPoly:
    if p.is_zero or q.is_zero:
        return ZERO_POLY
    return ComplexPoly(tuple(np.convolve(p.as_array(), q.as_array())))


def poly_pow(p: ComplexPoly, k: int) -> ComplexPoly:
    if k < 0:
        raise ValueError(f"poly_pow needs k >= 0, got {k}")
    result = ONE_POLY
    for _ in range(k):
        result = poly_mul(result, p)
    return result


def poly_shift(p: ComplexPoly, k: int) -> ComplexPoly:
    """p·z^k."""

    if p.is_zero:
        return ZERO_POLY
    return ComplexPoly((0,) * k + p.coeffs)


def poly_compose_affine(p: ComplexPoly, a: complex, b: complex) -> ComplexPoly:
    """p(az + b), by Horner's scheme over polynomials."""

    inner = ComplexPoly((b, a))
    result = ZERO_POLY
    for c in reversed(p.coeffs):
        result = poly_add(poly_mul(result, inner), ComplexPoly((c,)))
    return result


def poly_deflate(p: ComplexPoly, r: complex) -> ComplexPoly:
    """Quotient of p by (z − r) via synthetic division; the remainder is dropped."""

    if p.degree < 1:
        raise ValueError("cannot deflate a constant polynomial")
    desc = p.coeffs[::-1]
    out = [desc[0]]
    for c in desc[1:-1]:
        out.append(c + r * out[-1])
    return ComplexPoly(tuple(reversed(out)))


def poly_reverse(p: ComplexPoly, d: int) -> ComplexPoly:
    """Coefficients of w^d·p(1/w); requires d >= deg p."""

    if p.degree > d:
        raise ValueError(f"reverse degree {d} is below deg p = {p.degree}")
    padded = p.coeffs + (0j,) * (d + 1 - len(p.coeffs))
    return ComplexPoly(padded[::-1])


def poly_from_roots(roots: Sequence[complex], leading: complex = 1.0) -> ComplexPoly:
    if not len(roots):
        return ComplexPoly((leading,))
    desc = np.poly(np.asarray(roots, dtype=complex))
    return ComplexPoly(tuple(leading * desc[::-1]))


def low_order_zeros(p: ComplexPoly) -> int:
    """Number of exactly-zero low-order coefficients (the multiplicity of 0)."""

    k = 0
    while k < len(p.coeffs) and p.coeffs[k] == 0:
        k += 1
    return k


def normalized(p: ComplexPoly) -> ComplexPoly:
    """p scaled to leading coefficient 1."""

    return poly_scale(p, 1 / p.leading)


def polys_close(p: ComplexPoly, q: ComplexPoly, tol: float = 1e-10) -> bool:
    """Equality up to a common scalar: compare after making both monic."""

    if p.is_zero or q.is_zero:
        return p.is_zero and q.is_zero
    if p.degree != q.degree:
        return False
    a, b = normalized(p).as_array(), normalized(q).as_array()
    return bool(np.max(np.abs(a - b)) <= tol * max(1.0, float(np.max(np.abs(a)))))


def backward_residual(p: ComplexPoly, z: complex) -> float:
    """|p(z)| / max(max|c_k|, Σ|c_k||z|^k)."""

    if p.is_zero:
        return 0.0
    mags = np.abs(p.as_array())
    bound = max(float(mags.max()), float(np.polyval(mags[::-1], abs(z))))
    return abs(poly_eval(p, z)) / bound


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

def _aberth(coeffs: np.ndarray, tol: float, max_iter: int) -> Tuple[np.ndarray, bool]:
    """Simultaneous Aberth–Ehrlich iteration on ascending ``coeffs`` (c[0], c[-1] != 0)."""

    d = len(coeffs) - 1
    if d == 1:
        return np.array([-coeffs[0] / coeffs[1]]), True

    desc = coeffs[::-1]
    ddesc = np.polyder(desc)
    radius = 1.0 + float(np.max(np.abs(coeffs[:-1] / coeffs[-1])))
    z = radius * np.exp(1j * (2 * np.pi * np.arange(d) / d + config.ROOT_START_ANGLE))

    for _ in range(max_iter):
        pz = np.polyval(desc, z)
        dpz = np.polyval(ddesc, z)
        diff = z[:, np.newaxis] - z[np.newaxis, :]
        np.fill_diagonal(diff, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / diff
        inv[~np.isfinite(inv)] = 0.0
        np.fill_diagonal(inv, 0.0)
        denom = dpz - pz * inv.sum(axis=1)
        safe = denom != 0
        step = np.zeros_like(z)
        step[safe] = pz[safe] / denom[safe]
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            return z, True
    return z, False


def _is_multiple_root(desc: np.ndarray, x: complex, m: int, tol: float) -> bool:
    """True when p and its first m−1 Taylor coefficients vanish at x."""

    if abs(np.polyval(desc, x)) > tol * float(np.polyval(np.abs(desc), abs(x))):
        return False
    deriv = desc
    for j in range(1, m):
        deriv = np.polyder(deriv) / j
        value = abs(np.polyval(deriv, x))
        bound = float(np.polyval(np.abs(deriv), abs(x)))
        if value > config.MULTIPLE_ROOT_TOL * bound:
            return False
    return True


def _components(centers: List[complex], radius: float) -> List[List[int]]:
    """Single-linkage groups of points closer than radius·(1 + |z|)."""

    n = len(centers)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = 1.0 + max(abs(centers[i]), abs(centers[j]))
            if abs(centers[i] - centers[j]) <= radius * scale:
                parent[find(i)] = find(j)

    groups: dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _merge_clusters(desc: np.ndarray, roots: np.ndarray, tol: float) -> List[Tuple[complex, int]]:
    clusters: List[Tuple[complex, int]] = [(complex(r), 1) for r in roots]

    # Tight clusters merge unconditionally; wider ones only when the
    # centroid is a verified multiple root.
    radii = (config.CLUSTER_TOL, 1e-5, 1e-4, 1e-3, 1e-2)
    for level, radius in enumerate(radii):
        merged: List[Tuple[complex, int]] = []
        for group in _components([c for c, _ in clusters], radius):
            if len(group) == 1:
                merged.append(clusters[group[0]])
                continue
            m = sum(clusters[i][1] for i in group)
            centroid = sum(clusters[i][0] * clusters[i][1] for i in group) / m
            if level == 0 or _is_multiple_root(desc, centroid, m, tol):
                merged.append((centroid, m))
            else:
                merged.extend(clusters[i] for i in group)
        clusters = merged
    return clusters


def poly_roots(
    p: ComplexPoly,
    tol: float = config.ROOT_TOL,
    max_iter: int = config.ROOT_MAX_ITER,
) -> RootSet:
    """All roots of p with multiplicities.

    Roots at the origin are read off exactly from zero low-order
    coefficients. Raises ``NonConvergence`` (with ``best_effort``) when the
    backward residual exceeds ``tol`` after ``max_iter`` sweeps.
    """

    if p.is_zero:
        raise ZeroPolynomial("cannot find the roots of the zero polynomial")

    k0 = low_order_zeros(p)
    core = p.as_array()[k0:]
    clusters: List[Tuple[complex, int]] = []
    converged = True
    if len(core) > 1:
        found, converged = _aberth(core, tol, max_iter)
        clusters = _merge_clusters(core[::-1], found, tol)
    if k0:
        clusters.append((0j, k0))

    clusters.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    residual = max((backward_residual(p, r) for r, _ in clusters), default=0.0)
    result = RootSet(
        roots=tuple(r for r, _ in clusters),
        multiplicities=tuple(m for _, m in clusters),
        residual=residual,
        tol=tol,
    )
    if residual > tol:
        raise NonConvergence(
            f"root residual {residual:.3e} above tolerance {tol:.1e} "
            f"(degree {p.degree}, converged={converged})",
            best_effort=result,
        )
    return result


# ---------------------------------------------------------------------------
# Rational maps
# ---------------------------------------------------------------------------

def root_set(p: ComplexPoly) -> RootSet:
    """poly_roots, keeping the best-effort set when the residual check fails."""

    if p.degree < 1:
        return RootSet((), (), 0.0, config.ROOT_TOL)
    try:
        return poly_roots(p)
    except NonConvergence as exc:
        if exc.best_effort is None:
            raise
        return exc.best_effort


def root_order(roots: RootSet, z: complex, tol: float = config.CLUSTER_TOL) -> int:
    """Total multiplicity of the roots within tol·(1 + |z|) of z."""

    radius = tol * (1.0 + abs(z))
    return sum(m for r, m in zip(roots.roots, roots.multiplicities) if abs(r - z) <= radius)


def rational_cancel(
    num: ComplexPoly, den: ComplexPoly, factors: Sequence[Tuple[complex, int]]
) -> RationalMap:
    """Divide (z − r)^c out of num and den for every (r, c) in ``factors``."""

    for root, count in factors:
        for _ in range(count):
            if num.degree < 1 or den.degree < 1:
                break
            num = poly_deflate(num, root)
            den = poly_deflate(den, root)
    return RationalMap(num, den)


def rational_reduce(num: ComplexPoly, den: ComplexPoly) -> RationalMap:
    """Divide out common roots of num and den.

    A root of den cancels as often as it also appears among the roots of
    num, matched within CLUSTER_TOL. Exact zeros at the origin are
    stripped first.
    """

    if den.is_zero:
        raise ZeroDenominator("cannot reduce a rational function with zero denominator")
    if num.is_zero:
        return RationalMap(ZERO_POLY, ONE_POLY)

    k = min(low_order_zeros(num), low_order_zeros(den))
    if k:
        num = ComplexPoly(num.coeffs[k:])
        den = ComplexPoly(den.coeffs[k:])
    if num.degree < 1 or den.degree < 1:
        return RationalMap(num, den)

    num_roots, den_roots = root_set(num), root_set(den)
    factors = [
        (root, min(mult, root_order(num_roots, root)))
        for root, mult in zip(den_roots.roots, den_roots.multiplicities)
    ]
    return rational_cancel(num, den, factors)


def _distinct_roots(p: ComplexPoly) -> Tuple[Tuple[complex, ...], Tuple[int, ...]]:
    if p.degree < 1:
        return (), ()
    found = poly_roots(p)
    return found.roots, found.multiplicities


def rational_eval_array(R: RationalMap, z: np.ndarray) -> np.ndarray:
    """Vectorised R(z); poles give the infinity marker, 0/0 gives nan.

    Points with |z| > 1 are evaluated through the reversed polynomials so
    that large orbits do not overflow before they are classified.
    """

    z = np.asarray(z, dtype=complex)
    if R.num.is_zero:
        return np.zeros(z.shape, dtype=complex)

    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) <= 1.0
    if small.any():
        zs = z[small]
        out[small] = _safe_divide(poly_eval(R.num, zs), poly_eval(R.den, zs))
    big = ~small
    if big.any():
        zb = z[big]
        w = 1.0 / zb
        # w^d·P(1/w) evaluates the ascending coefficients in descending order
        rev_num = np.polyval(R.num.as_array(), w)
        rev_den = np.polyval(R.den.as_array(), w)
        out[big] = _safe_divide(rev_num, rev_den, zb ** (R.num.degree - R.den.degree))
    return out


def _safe_divide(num: np.ndarray, den: np.ndarray, factor: Any = 1.0) -> np.ndarray:
    """factor·num/den with poles set to the infinity marker after scaling."""

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = factor * (num / den)
    pole = den == 0
    out[pole & (num != 0)] = INFINITY
    out[pole & (num == 0)] = complex(math.nan, math.nan)
    return out


def rational_eval(R: RationalMap, z: complex) -> complex:
    """R(z), the infinity marker at poles, and the limit at z = ∞."""

    if is_infinite(z):
        if R.num.is_zero:
            return 0j
        if R.num.degree > R.den.degree:
            return INFINITY
        if R.num.degree == R.den.degree:
            return R.num.leading / R.den.leading
        return 0j

    value = complex(rational_eval_array(R, np.array([z], dtype=complex))[0])
    if math.isnan(value.real):
        raise Indeterminate(f"numerator and denominator both vanish at {z}")
    return value


def rational_derivative(R: RationalMap) -> RationalMap:
    """R′ in reduced form.

    With den = c·Π(z − r_j)^{m_j} and S = Π(z − r_j), the quotient rule
    reduces to (num′·S − num·Σ m_j S/(z − r_j)) / (den·S), which has no
    common roots when R is reduced.
    """

    N, D = R.num, R.den
    if N.is_zero:
        return RationalMap(ZERO_POLY, ONE_POLY)
    if D.degree < 1:
        return RationalMap(poly_derivative(N), D)

    roots, mults = _distinct_roots(D)
    S = poly_from_roots(roots)
    T = ZERO_POLY
    for j, m in enumerate(mults):
        others = roots[:j] + roots[j + 1:]
        T = poly_add(T, poly_scale(poly_from_roots(others), m))
    num = poly_sub(poly_mul(poly_derivative(N), S), poly_mul(N, T))
    return RationalMap(num, poly_mul(D, S))


def rational_derivative_eval(R: RationalMap, z: complex) -> complex:
    """R′(z) from the quotient rule without building the derivative map."""

    n, d = poly_eval(R.num, z), poly_eval(R.den, z)
    if d == 0:
        return INFINITY
    dn, dd = poly_eval(poly_derivative(R.num), z), poly_eval(poly_derivative(R.den), z)
    return (dn * d - n * dd) / (d * d)
