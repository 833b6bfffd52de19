"""Chebyshev and Newton iteration maps for f = p·e^q as exact rational maps.

The general construction expands

    C_f = z − p·A / (2B³),   B = p′ + p·q′,
    A = 2p′² + 3p²q′² + 6p·p′·q′ + p·p″ + p²·q″,

and cancels the roots of B that the numerator shares, counted from the
roots of p and A. The family C_n = C_{z e^{z^n}} also has a closed form
that is built directly.
"""

from __future__ import annotations

import numpy as np

from . import config
from .errors import DegenerateInput, NotParabolicAtInfinity
from .poly import (
    poly_add,
    poly_compose_affine,
    poly_derivative,
    poly_mul,
    poly_pow,
    poly_reverse,
    poly_scale,
    poly_shift,
    poly_sub,
    rational_cancel,
    rational_reduce,
    root_order,
    root_set,
)
from .types import (
    ONE_POLY,
    AffineMap,
    ComplexPoly,
    ExpPolyFunction,
    InfinitySeries,
    RationalMap,
)


def _newton_denominator(f: ExpPolyFunction) -> ComplexPoly:
    """B = p′ + p·q′, so that f′ = B·e^q."""

    B = poly_add(poly_derivative(f.p), poly_mul(f.p, poly_derivative(f.q)))
    if B.is_zero:
        raise DegenerateInput("p' + p·q' vanishes identically: f is constant")
    return B


def build_chebyshev(f: ExpPolyFunction) -> RationalMap:
    p, q = f.p, f.q
    dp, dq = poly_derivative(p), poly_derivative(q)
    ddp, ddq = poly_derivative(dp), poly_derivative(dq)
    B = _newton_denominator(f)

    p2 = poly_mul(p, p)
    A = poly_scale(poly_mul(dp, dp), 2)
    A = poly_add(A, poly_scale(poly_mul(p2, poly_mul(dq, dq)), 3))
    A = poly_add(A, poly_scale(poly_mul(p, poly_mul(dp, dq)), 6))
    A = poly_add(A, poly_mul(p, ddp))
    A = poly_add(A, poly_mul(p2, ddq))

    B3 = poly_pow(B, 3)
    num = poly_sub(poly_scale(poly_shift(B3, 1), 2), poly_mul(p, A))
    den = poly_scale(B3, 2)
    if num.is_zero:
        return rational_reduce(num, den)

    # Only roots of B can be common; at such a root r of multiplicity μ the
    # numerator vanishes to order min(3μ, ord_r p + ord_r A).
    B_roots, p_roots = root_set(B), root_set(p)
    A_roots = None if A.is_zero else root_set(A)
    factors = []
    for r, mu in zip(B_roots.roots, B_roots.multiplicities):
        order = 3 * mu if A_roots is None else root_order(p_roots, r) + root_order(A_roots, r)
        factors.append((r, min(3 * mu, order)))
    return rational_cancel(num, den, factors)


def build_newton(f: ExpPolyFunction) -> RationalMap:
    """N_f = z − f/f′ = (zB − p)/B; a root of B cancels only where p also vanishes."""

    B = _newton_denominator(f)
    num = poly_sub(poly_shift(B, 1), f.p)
    if num.is_zero:
        return rational_reduce(num, B)
    B_roots, p_roots = root_set(B), root_set(f.p)
    factors = [(r, min(mu, root_order(p_roots, r))) for r, mu in zip(B_roots.roots, B_roots.multiplicities)]
    return rational_cancel(num, B, factors)


def cn_function(n: int) -> ExpPolyFunction:
    """f = z·e^{z^n}."""

    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return ExpPolyFunction(ComplexPoly((0, 1)), ComplexPoly.monomial(n))


def build_cn(n: int) -> RationalMap:
    """C_n(z) = n z^{n+1}(2n²z^{2n} + 3n z^n − n + 1) / (2(n z^n + 1)³), degree 3n + 1."""

    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    num = np.zeros(3 * n + 2, dtype=complex)
    num[n + 1] = n * (1 - n)
    num[2 * n + 1] = 3 * n**2
    num[3 * n + 1] = 2 * n**3
    den = np.zeros(3 * n + 1, dtype=complex)
    den[0] = 2
    den[n] = 6 * n
    den[2 * n] = 6 * n**2
    den[3 * n] = 2 * n**3
    return RationalMap(ComplexPoly(tuple(num)), ComplexPoly(tuple(den)))


def build_newton_cn(n: int) -> RationalMap:
    """N_{z e^{z^n}}(z) = n z^{n+1} / (n z^n + 1)."""

    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return RationalMap(ComplexPoly.monomial(n + 1, n), ComplexPoly((1,) + (0,) * (n - 1) + (n,)))


def root_multiplier(k: int) -> float:
    """Multiplier of C_f at a root of p of multiplicity k: 1 − (3 − 1/k)/(2k)."""

    if k < 1:
        raise ValueError(f"root multiplicity must be >= 1, got {k}")
    return 1.0 - (3.0 - 1.0 / k) / (2.0 * k)


def chebyshev_power_multiplier(d: int) -> float:
    """λ with C_{z^d}(z) = λz, namely (2d − 1)(d − 1)/(2d²)."""

    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return (2 * d - 1) * (d - 1) / (2 * d * d)


def chebyshev_pure_exp(n: int) -> RationalMap:
    """C_f for f = e^{z^n}: (2n²z^{2n} − 3n z^n − n + 1) / (2n² z^{2n−1})."""

    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    num = np.zeros(2 * n + 1, dtype=complex)
    num[0] = 1 - n
    num[n] = -3 * n
    num[2 * n] = 2 * n**2
    return RationalMap(ComplexPoly(tuple(num)), ComplexPoly.monomial(2 * n - 1, 2 * n**2))


def pure_exp_extraneous_multiplier(n: int) -> float:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return 1.0 + 9.0 * n / (2.0 * (n - 1))


def conjugate_by_inversion(R: RationalMap) -> RationalMap:
    """φ∘R∘φ⁻¹ with φ(z) = 1/z."""

    d = R.degree
    return rational_reduce(poly_reverse(R.den, d), poly_reverse(R.num, d))


def newton_polynomial_conjugate(n: int) -> RationalMap:
    """φ∘P∘φ⁻¹ for P(z) = z(zⁿ/n + 1); equals N_{z e^{z^n}}."""

    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    P = ComplexPoly((0, 1) + (0,) * (n - 1) + (1.0 / n,))
    return conjugate_by_inversion(RationalMap(P, ONE_POLY))


def series_at_infinity(R: RationalMap, order: int | None = None) -> InfinitySeries:
    """Expand g(w) = 1/R(1/w) at w = 0 by power-series division.

    With d = deg R, g = rev_d(den) / rev_d(num); ∞ must be fixed with
    multiplier 1 (deg num = deg den + 1 and a_1 = 1).
    """

    dn, dd = R.num.degree, R.den.degree
    if R.num.is_zero or dn != dd + 1:
        raise NotParabolicAtInfinity(
            f"infinity is not a multiplier-1 fixed point (deg num {dn}, deg den {dd})"
        )
    d = dn
    order = order if order is not None else d + 2
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")

    top = np.zeros(order + 1, dtype=complex)
    rev_den = poly_reverse(R.den, d).as_array()
    top[: min(len(rev_den), order + 1)] = rev_den[: order + 1]
    bottom = np.zeros(order + 1, dtype=complex)
    rev_num = poly_reverse(R.num, d).as_array()
    bottom[: min(len(rev_num), order + 1)] = rev_num[: order + 1]

    g = np.zeros(order + 1, dtype=complex)
    for k in range(order + 1):
        acc = top[k] - np.dot(bottom[1 : k + 1], g[k - 1 :: -1][:k]) if k else top[0]
        g[k] = acc / bottom[0]

    coefficients = tuple(complex(c) for c in g[1:])
    if abs(coefficients[0] - 1) > config.SERIES_TOL:
        raise NotParabolicAtInfinity(f"a_1 = {coefficients[0]} is not 1")

    multiplicity = next(
        (k for k in range(2, order + 1) if abs(coefficients[k - 1]) > config.SERIES_TOL),
        None,
    )
    return InfinitySeries(coefficients=coefficients, multiplicity=multiplicity)


def scale_function(f: ExpPolyFunction, a: complex, b: complex, lam: complex) -> ExpPolyFunction:
    """g(z) = λ·f(az + b) as a (p, q) pair."""

    if a == 0 or lam == 0:
        raise ValueError("a and λ must be nonzero")
    return ExpPolyFunction(
        poly_scale(poly_compose_affine(f.p, a, b), lam),
        poly_compose_affine(f.q, a, b),
    )


def scaling_conjugate_check(
    f: ExpPolyFunction,
    a: complex,
    b: complex,
    lam: complex,
    samples: int = 500,
    seed: int = 0,
) -> float:
    """Max relative deviation of C_f from T∘C_g∘T⁻¹ with g = λ·f∘T, T(z) = az + b."""

    from .dynamics import conjugacy_deviation

    g = scale_function(f, a, b, lam)
    return conjugacy_deviation(build_chebyshev(f), build_chebyshev(g), AffineMap(a, b), samples, seed)


def scaling_transport(p: ComplexPoly, lam: complex, n: int) -> AffineMap:
    """T with C_{p·e^{λpⁿ}} = T∘C_n∘T⁻¹ for linear p = az + b.

    T(z) = (αz − b)/a with α^n = 1/λ (principal branch).
    """

    if p.degree != 1:
        raise ValueError(f"p must be linear, got degree {p.degree}")
    if lam == 0:
        raise ValueError("λ must be nonzero")
    b, a = p.coeffs
    alpha = complex(lam) ** (-1.0 / n)
    return AffineMap(alpha / a, -b / a)


def transported_function(p: ComplexPoly, lam: complex, n: int) -> ExpPolyFunction:
    """f = p·e^{λpⁿ}."""

    return ExpPolyFunction(p, poly_scale(poly_pow(p, n), lam))
