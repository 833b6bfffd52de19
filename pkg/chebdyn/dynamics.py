"""Orbit iteration, basin grids and numeric symmetry / conjugacy checks.

Orbits are iterated in numpy batches. A point is resolved as

* basin-zero once it is within ``eps_zero`` of the target (0 by default),
* basin-infinity when it lands on a pole of a map fixing ∞, when its
  modulus exceeds ``r_esc`` and keeps growing for ``escape_confirm`` steps,
  or, for a parabolic ∞, when it stays ``escape_confirm`` steps in the
  attracting petal measured in the approximate Fatou coordinate
  u = −z^m/(m·a) (m petals, a the first nonzero series coefficient),
* unresolved when the budget runs out.

Orbits that land far out in a repelling direction of a parabolic ∞
(Re u < 0, |u| ≥ 2·petal_radius) are moved along u ↦ u + k back to
|u| ≈ petal_radius in a single step.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import NotCentered, PoleOutsideViewport
from .fixed import infinity_fixed_point, positive_critical_point, real_extraneous_cn, real_zeros_cn
from .maps import build_cn, series_at_infinity
from .poly import poly_roots, rational_derivative, rational_eval, rational_eval_array
from .types import (
    BASIN_INFINITY,
    BASIN_ZERO,
    INFINITY,
    UNRESOLVED,
    AffineMap,
    BasinGrid,
    IntervalSign,
    OrbitResult,
    RationalMap,
    RealLineProfile,
    Viewport,
)

CODE_LIMITS = {UNRESOLVED: "unresolved", BASIN_ZERO: "basin-zero", BASIN_INFINITY: "basin-infinity"}


class OrbitEngine:
    """Vectorised orbit classifier for one map; holds no state between runs."""

    def __init__(
        self,
        R: RationalMap,
        target: complex = 0j,
        eps_zero: float = config.EPS_ZERO,
        r_esc: float = config.R_ESC,
        escape_confirm: int = config.ESCAPE_CONFIRM,
        petal_radius: float = config.PETAL_RADIUS,
    ):
        self.R = R
        self.target = complex(target)
        self.eps_zero = eps_zero
        self.r_esc = r_esc
        self.escape_confirm = escape_confirm
        self.petal_radius = petal_radius
        self.fixes_infinity = infinity_fixed_point(R) is not None
        self.image_of_infinity = None if self.fixes_infinity else rational_eval(R, INFINITY)
        self.petal = self._petal_model(R)

    @staticmethod
    def _petal_model(R: RationalMap) -> Optional[Tuple[int, complex]]:
        at_infinity = infinity_fixed_point(R)
        if at_infinity is None or at_infinity[1] < 2:
            return None
        k = at_infinity[1]
        a = series_at_infinity(R, order=k).coefficient(k)
        return k - 1, a

    def fatou_coordinate(self, z: np.ndarray) -> np.ndarray:
        m, a = self.petal
        with np.errstate(over="ignore", invalid="ignore"):
            return -(z**m) / (m * a)

    def _in_petal(self, u: np.ndarray, u_prev: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            return (
                (np.abs(u) >= self.petal_radius)
                & (u.real >= -np.abs(u.imag))
                & (np.abs(u - u_prev - 1.0) < 0.5)
            )

    def _leave_repelling_petal(self, z: np.ndarray) -> np.ndarray:
        """Move orbits deep in a repelling direction of ∞ back to |u| ≈ petal_radius.

        Near ∞ the map acts as u ↦ u + 1, so from Re u < 0 an orbit needs
        about −Re u steps to come back. The jump keeps Im u and the branch
        of z; it counts as one iteration.
        """
        u = self.fatou_coordinate(z)
        with np.errstate(invalid="ignore"):
            deep = np.isfinite(u) & (np.abs(u) >= 2 * self.petal_radius) & (u.real < 0)
        if not deep.any():
            return z
        far = u[deep]
        landed = -np.sqrt(np.maximum(self.petal_radius**2 - far.imag**2, 0.0)) + 1j * far.imag
        out = z.copy()
        out[deep] = z[deep] * (landed / far) ** (1.0 / self.petal[0])
        return out

    def run(self, z0: np.ndarray, budget: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Classify every start point. Returns (codes, iterations, final values)."""

        if budget < 1:
            raise ValueError(f"budget must be >= 1, got {budget}")

        z = np.asarray(z0, dtype=complex).ravel().copy()
        codes = np.full(z.size, UNRESOLVED, dtype=np.int8)
        iterations = np.full(z.size, budget, dtype=np.int32)
        finals = z.copy()

        infinite = ~np.isfinite(z)
        if infinite.any():
            if self.fixes_infinity:
                codes[infinite] = BASIN_INFINITY
                iterations[infinite] = 0
            else:
                z[infinite] = self.image_of_infinity
        at_target = (codes == UNRESOLVED) & (np.abs(z - self.target) < self.eps_zero)
        codes[at_target] = BASIN_ZERO
        iterations[at_target] = 0

        active = np.flatnonzero(codes == UNRESOLVED)
        current = z[active]
        modulus_streak = np.zeros(active.size, dtype=np.int32)
        petal_streak = np.zeros(active.size, dtype=np.int32)
        u_prev = self.fatou_coordinate(current) if self.petal else None

        for step in range(1, budget + 1):
            if active.size == 0:
                break
            nxt = rational_eval_array(self.R, current)

            undefined = np.isnan(nxt.real) & np.isnan(nxt.imag)
            escaped = ~np.isfinite(nxt) & ~undefined
            if escaped.any() and not self.fixes_infinity:
                nxt[escaped] = self.image_of_infinity
                escaped[:] = False
            if self.petal:
                nxt = self._leave_repelling_petal(nxt)

            with np.errstate(invalid="ignore"):
                growing = (np.abs(nxt) > self.r_esc) & (np.abs(nxt) >= np.abs(current))
            modulus_streak = np.where(growing, modulus_streak + 1, 0)
            if self.petal:
                u = self.fatou_coordinate(nxt)
                petal_streak = np.where(self._in_petal(u, u_prev), petal_streak + 1, 0)
                u_prev = u

            to_infinity = escaped | (modulus_streak >= self.escape_confirm) | (
                petal_streak >= self.escape_confirm
            )
            with np.errstate(invalid="ignore"):
                to_zero = ~to_infinity & (np.abs(nxt - self.target) < self.eps_zero)

            for mask, code in ((to_infinity, BASIN_INFINITY), (to_zero, BASIN_ZERO)):
                if mask.any():
                    idx = active[mask]
                    codes[idx] = code
                    iterations[idx] = step
                    finals[idx] = nxt[mask]

            if undefined.any():
                finals[active[undefined]] = nxt[undefined]

            keep = ~(to_infinity | to_zero | undefined)
            active = active[keep]
            current = nxt[keep]
            modulus_streak = modulus_streak[keep]
            petal_streak = petal_streak[keep]
            if self.petal:
                u_prev = u_prev[keep]

        finals[active] = current
        return codes, iterations, finals


def iterate_orbit(
    R: RationalMap,
    z0: complex,
    budget: int = config.DEFAULT_BUDGET,
    target: complex = 0j,
) -> OrbitResult:
    codes, iterations, finals = OrbitEngine(R, target).run(np.array([z0], dtype=complex), budget)
    return OrbitResult(CODE_LIMITS[int(codes[0])], int(iterations[0]), complex(finals[0]))


def _row_slabs(height: int, workers: int) -> List[slice]:
    count = min(height, max(1, workers * 4))
    edges = np.linspace(0, height, count + 1).astype(int)
    return [slice(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def render_basins(
    R: RationalMap,
    viewport: Viewport,
    budget: int = config.DEFAULT_BUDGET,
    workers: int = 1,
    view: str = "plane",
    target: complex = 0j,
) -> BasinGrid:
    """Classify the orbit of every pixel centre.

    ``view="infinity"`` treats pixel coordinates as w and starts the orbit
    at z = 1/w. Rows are split into slabs run on a thread pool; each slab
    writes its own rows, so the grid does not depend on scheduling.
    """

    if view not in ("plane", "infinity"):
        raise ValueError(f"unknown view '{view}'")
    engine = OrbitEngine(R, target)
    codes = np.zeros((viewport.height, viewport.width), dtype=np.int8)
    iterations = np.zeros((viewport.height, viewport.width), dtype=np.int32)

    def work(rows: slice) -> Tuple[np.ndarray, np.ndarray]:
        points = viewport.pixel_centers(rows)
        if view == "infinity":
            with np.errstate(divide="ignore", invalid="ignore"):
                points = np.where(points == 0, INFINITY, 1.0 / np.where(points == 0, 1, points))
        c, it, _ = engine.run(points, budget)
        return c.reshape(points.shape), it.reshape(points.shape)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        future_to_rows = {executor.submit(work, rows): rows for rows in _row_slabs(viewport.height, workers)}
        for future in as_completed(future_to_rows):
            rows = future_to_rows[future]
            slab_codes, slab_iterations = future.result()
            codes[rows] = slab_codes
            iterations[rows] = slab_iterations

    return BasinGrid(viewport, codes, iterations)


# ---------------------------------------------------------------------------
# Symmetry checks on grids
# ---------------------------------------------------------------------------

def symmetry_mismatch(grid: BasinGrid, transform: Callable[[np.ndarray], np.ndarray]) -> float:
    """Fraction of resolved pixels whose code differs from the pixel containing transform(z)."""

    vp = grid.viewport
    rows, cols = vp.pixel_index(transform(vp.pixel_centers()))
    inside = (rows >= 0) & (rows < vp.height) & (cols >= 0) & (cols < vp.width)
    image = np.full(grid.codes.shape, UNRESOLVED, dtype=grid.codes.dtype)
    image[inside] = grid.codes[rows[inside], cols[inside]]
    valid = inside & (grid.codes != UNRESOLVED) & (image != UNRESOLVED)
    if not valid.any():
        return 0.0
    return float(np.mean(grid.codes[valid] != image[valid]))


def _require_centered(grid: BasinGrid) -> None:
    vp = grid.viewport
    if abs(vp.center) > vp.pixel_size / 2:
        raise NotCentered(f"grid centre {vp.center} is not the origin")


def rotation_symmetry_mismatch(grid: BasinGrid, n: int) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _require_centered(grid)
    turn = complex(math.cos(2 * math.pi / n), math.sin(2 * math.pi / n))
    return symmetry_mismatch(grid, lambda z: z * turn)


def reflection_mismatch(grid: BasinGrid) -> float:
    """z ↦ −z."""

    _require_centered(grid)
    return symmetry_mismatch(grid, lambda z: -z)


def conjugation_mismatch(grid: BasinGrid) -> float:
    """z ↦ z̄; needs a grid centred on the real axis."""

    vp = grid.viewport
    if abs(vp.center.imag) > vp.pixel_size / 2:
        raise NotCentered(f"grid centre {vp.center} is off the real axis")
    return symmetry_mismatch(grid, np.conj)


# ---------------------------------------------------------------------------
# Conjugacy and pole checks
# ---------------------------------------------------------------------------

def _poles(R: RationalMap) -> List[complex]:
    if R.den.degree < 1:
        return []
    return list(poly_roots(R.den).roots)


def conjugacy_deviation(
    A: RationalMap,
    B: RationalMap,
    T: AffineMap,
    samples: int = 1000,
    seed: int = 0,
    radius: float = 2.0,
) -> float:
    """Max over samples of |A(z) − T(B(T⁻¹(z)))| / max(1, |A(z)|).

    Samples are uniform in the disk |z| < radius, at least ``POLE_GUARD``
    away from every pole of either side.
    """

    rng = np.random.default_rng(seed)
    T_inv = T.inverse()
    poles = np.asarray(_poles(A) + [T(p) for p in _poles(B)], dtype=complex)

    kept: List[np.ndarray] = []
    total = 0
    while total < samples:
        r = radius * np.sqrt(rng.random(samples))
        theta = 2 * np.pi * rng.random(samples)
        z = r * np.exp(1j * theta)
        if poles.size:
            gap = np.min(np.abs(z[:, np.newaxis] - poles[np.newaxis, :]), axis=1)
            z = z[gap > config.POLE_GUARD]
        kept.append(z)
        total += z.size
    z = np.concatenate(kept)[:samples]

    a_val = rational_eval_array(A, z)
    b_val = T(rational_eval_array(B, T_inv(z)))
    deviation = np.abs(a_val - b_val) / np.maximum(1.0, np.abs(a_val))
    return float(np.max(deviation))


def pole_boundary_check(
    grid: BasinGrid,
    poles: Sequence[complex],
    radius_px: int = config.POLE_WINDOW_PX,
) -> List[bool]:
    """Per pole: does the square window of half-side radius_px hold both basins?"""

    vp = grid.viewport
    results: List[bool] = []
    for pole in poles:
        if not vp.contains(pole):
            raise PoleOutsideViewport(f"pole {pole} lies outside the viewport")
        row, col = vp.pixel_index(np.asarray(pole))
        row, col = int(row), int(col)
        window = grid.codes[
            max(0, row - radius_px): row + radius_px + 1,
            max(0, col - radius_px): col + radius_px + 1,
        ]
        results.append(bool((window == BASIN_ZERO).any() and (window == BASIN_INFINITY).any()))
    return results


# ---------------------------------------------------------------------------
# Real-line sign table
# ---------------------------------------------------------------------------

def _sign(values: np.ndarray) -> int:
    signs = np.sign(values)
    if np.all(signs > 0):
        return 1
    if np.all(signs < 0):
        return -1
    return 0


def _interval_samples(left: Optional[float], right: Optional[float], count: int = 64) -> np.ndarray:
    spread = np.geomspace(1e-3, 1e3, count)
    if left is None:
        return right - (1.0 + abs(right)) * spread
    if right is None:
        return left + (1.0 + abs(left)) * spread
    return np.linspace(left, right, count + 2)[1:-1]


def real_line_profile(n: int) -> RealLineProfile:
    """Signs of C_n(x) − x and C_n′(x) between the breakpoints of the real line.

    Odd n: −e₁ < z₋ < ξ < −e₂ < 0 < c_r < z₊ with ξ the real pole.
    Even n: −z₀ < −c_r < 0 < c_r < z₀, and C_n(x) > x exactly for x < 0.
    """

    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    R = build_cn(n)
    dR = rational_derivative(R)
    zeros = real_zeros_cn(n)

    if n % 2:
        e1, e2 = real_extraneous_cn(n)
        points = [("-e1", -e1), ("z-", zeros[0]), ("xi", -((1.0 / n) ** (1.0 / n))), ("-e2", -e2), ("0", 0.0)]
        if n >= 3:
            points += [("c_r", positive_critical_point(n)), ("z+", zeros[2])]
    else:
        c_r, z0 = positive_critical_point(n), zeros[2]
        points = [("-z0", -z0), ("-c_r", -c_r), ("0", 0.0), ("c_r", c_r), ("z0", z0)]

    values = [v for _, v in points]
    ordered = all(a < b for a, b in zip(values, values[1:]))
    chain = sorted(points, key=lambda lv: lv[1])

    bounds: List[Tuple[str, Optional[float], str, Optional[float]]] = [("-inf", None, chain[0][0], chain[0][1])]
    bounds += [(a[0], a[1], b[0], b[1]) for a, b in zip(chain, chain[1:])]
    bounds.append((chain[-1][0], chain[-1][1], "+inf", None))

    intervals: List[IntervalSign] = []
    for left_label, left, right_label, right in bounds:
        xs = _interval_samples(left, right).astype(complex)
        displacement = (rational_eval_array(R, xs) - xs).real
        slope = rational_eval_array(dR, xs).real
        intervals.append(IntervalSign(left_label, right_label, _sign(displacement), _sign(slope)))

    even_ok = None
    if n % 2 == 0:
        # no interval straddles 0, which is itself a breakpoint
        even_ok = all(
            iv.displacement_sign == (1 if right is not None and right <= 0 else -1)
            for iv, (_, _, _, right) in zip(intervals, bounds)
        )

    return RealLineProfile(
        n=n,
        breakpoints=tuple(points),
        intervals=tuple(intervals),
        ordered=ordered,
        even_displacement_ok=even_ok,
    )
