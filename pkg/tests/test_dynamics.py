"""Tests for orbit classification, basin grids and the grid symmetry checks.

Grids here are 128x128 rather than the 512x512 used for images, so the
rotation threshold for non-axis-aligned angles is relaxed accordingly.
"""

import math

import numpy as np
import pytest

from chebdyn.dynamics import (
    OrbitEngine,
    conjugacy_deviation,
    conjugation_mismatch,
    iterate_orbit,
    pole_boundary_check,
    real_line_profile,
    reflection_mismatch,
    render_basins,
    rotation_symmetry_mismatch,
    symmetry_mismatch,
)
from chebdyn.errors import NotCentered, PoleOutsideViewport
from chebdyn.fixed import critical_points_c1, nth_roots
from chebdyn.maps import build_cn, build_newton_cn
from chebdyn.types import BASIN_INFINITY, BASIN_ZERO, UNRESOLVED, AffineMap, BasinGrid, Viewport

GRID = 128
BUDGET = 2000


@pytest.fixture(scope="module")
def grids():
    viewport = Viewport(0j, 3.0, GRID, GRID)
    return {n: render_basins(build_cn(n), viewport, BUDGET, workers=4) for n in (1, 3, 4)}


class TestOrbits:
    def test_origin_resolves_immediately(self, cn_maps):
        result = iterate_orbit(cn_maps[1], 0j)
        assert result.limit == "basin-zero" and result.iterations == 0

    def test_positive_point_goes_to_zero(self, cn_maps):
        result = iterate_orbit(cn_maps[1], 0.5 + 0j)
        assert result.limit == "basin-zero"
        assert abs(result.final) < 1e-6

    def test_pole_escapes_in_one_step(self, cn_maps):
        result = iterate_orbit(cn_maps[1], -1 + 0j)
        assert result.limit == "basin-infinity" and result.iterations == 1

    def test_negative_axis_escapes_through_petal(self, cn_maps):
        result = iterate_orbit(cn_maps[1], -5 + 0j)
        assert result.limit == "basin-infinity"
        assert abs(result.final) < 1e6

    def test_free_critical_points_of_c1_escape(self, cn_maps):
        for record in critical_points_c1():
            if record.category == "free":
                assert iterate_orbit(cn_maps[1], record.location).limit == "basin-infinity"

    def test_budget_exhausted(self, cn_maps):
        result = iterate_orbit(cn_maps[1], 100 + 0j, budget=3)
        assert result.limit == "unresolved" and result.iterations == 3

    def test_invalid_budget(self, cn_maps):
        with pytest.raises(ValueError):
            iterate_orbit(cn_maps[1], 0.5 + 0j, budget=0)

    def test_positive_ray_converges(self, cn_maps):
        codes, _, _ = OrbitEngine(cn_maps[1]).run(np.geomspace(0.01, 100.0, 50).astype(complex), 5000)
        assert np.all(codes == BASIN_ZERO)

    def test_newton_map_uses_petal(self):
        engine = OrbitEngine(build_newton_cn(2))
        assert engine.petal is not None
        assert engine.petal[0] == 2

    @pytest.mark.parametrize("n,z0", [(1, 1e6), (3, 1e4)])
    def test_far_positive_point_comes_back_to_zero(self, cn_maps, n, z0):
        # deep in a repelling direction of ∞; the positive axis lies in the basin of 0
        result = iterate_orbit(cn_maps[n], complex(z0))
        assert result.limit == "basin-zero"
        assert result.iterations < 1000

    def test_far_point_off_the_repelling_strip_escapes(self, cn_maps):
        result = iterate_orbit(cn_maps[1], 1e6 + 1e6j)
        assert result.limit == "basin-infinity"


class TestRender:
    def test_shapes_and_codes(self, grids):
        grid = grids[3]
        assert grid.codes.shape == (GRID, GRID)
        assert grid.codes.dtype == np.int8
        assert set(np.unique(grid.codes)) <= {UNRESOLVED, BASIN_ZERO, BASIN_INFINITY}
        assert grid.fraction(BASIN_ZERO) > 0.05
        assert grid.fraction(BASIN_INFINITY) > 0.05
        assert grid.fraction(UNRESOLVED) < 0.01

    def test_worker_count_does_not_change_grid(self, cn_maps):
        viewport = Viewport(0.2 + 0.1j, 2.0, 48, 40)
        one = render_basins(cn_maps[2], viewport, 500, workers=1)
        many = render_basins(cn_maps[2], viewport, 500, workers=5)
        assert np.array_equal(one.codes, many.codes)
        assert np.array_equal(one.iterations, many.iterations)

    def test_origin_pixel_neighbourhood_is_basin_zero(self, grids):
        mid = GRID // 2
        assert np.all(grids[4].codes[mid - 1: mid + 1, mid - 1: mid + 1] == BASIN_ZERO)

    def test_infinity_view(self, cn_maps):
        viewport = Viewport(0j, 1.0, 96, 96)
        grid = render_basins(cn_maps[4], viewport, BUDGET, workers=2, view="infinity")
        assert grid.fraction(BASIN_INFINITY) > 0.1
        assert grid.fraction(BASIN_ZERO) > 0.0
        assert rotation_symmetry_mismatch(grid, 4) < 0.01

    def test_unknown_view(self, cn_maps):
        with pytest.raises(ValueError):
            render_basins(cn_maps[1], Viewport(0j, 1.0, 4, 4), 10, view="sphere")


class TestSymmetry:
    def test_identity_transform(self, grids):
        assert symmetry_mismatch(grids[3], lambda z: z) == 0.0

    def test_rotation_n3(self, grids):
        assert rotation_symmetry_mismatch(grids[3], 3) < 0.1

    def test_rotation_and_reflection_n4(self, grids):
        assert rotation_symmetry_mismatch(grids[4], 4) < 0.01
        assert reflection_mismatch(grids[4]) < 0.01

    @pytest.mark.parametrize("n", [1, 3, 4])
    def test_conjugation(self, grids, n):
        assert conjugation_mismatch(grids[n]) < 0.01

    def test_off_centre_grid(self):
        viewport = Viewport(1 + 0j, 1.0, 8, 8)
        grid = BasinGrid(viewport, np.ones((8, 8), dtype=np.int8), np.ones((8, 8), dtype=np.int32))
        with pytest.raises(NotCentered):
            rotation_symmetry_mismatch(grid, 3)
        assert conjugation_mismatch(grid) == 0.0
        shifted = BasinGrid(Viewport(1j, 1.0, 8, 8), grid.codes, grid.iterations)
        with pytest.raises(NotCentered):
            conjugation_mismatch(shifted)

    def test_nothing_compared(self):
        viewport = Viewport(0j, 1.0, 4, 4)
        grid = BasinGrid(viewport, np.zeros((4, 4), dtype=np.int8), np.zeros((4, 4), dtype=np.int32))
        assert reflection_mismatch(grid) == 0.0


class TestPoles:
    @staticmethod
    def window_px(pole, viewport):
        """Half-side reaching from the pole to the fixed point 0."""
        return math.ceil(abs(pole) / viewport.pixel_size) + 1

    def test_c1_pole(self, grids):
        radius = self.window_px(-1.0, grids[1].viewport)
        assert pole_boundary_check(grids[1], [-1 + 0j], radius_px=radius) == [True]

    @pytest.mark.parametrize("n", [3, 4])
    def test_cn_poles(self, grids, n):
        poles = nth_roots(-1.0 / n, n)
        radius = self.window_px(poles[0], grids[n].viewport)
        assert pole_boundary_check(grids[n], poles, radius_px=radius) == [True] * n

    def test_points_inside_a_basin_are_not_poles(self, grids):
        assert pole_boundary_check(grids[1], [0.1 + 0j]) == [False]
        assert pole_boundary_check(grids[3], [0j, 0.1 + 0.05j]) == [False, False]

    def test_window_needs_both_basins(self):
        codes = np.full((21, 21), BASIN_INFINITY, dtype=np.int8)
        codes[:, :10] = BASIN_ZERO
        grid = BasinGrid(Viewport(0j, 1.0, 21, 21), codes, np.ones((21, 21), dtype=np.int32))
        assert pole_boundary_check(grid, [0j, -0.8 + 0j, 0.8 + 0j]) == [True, False, False]
        assert pole_boundary_check(grid, [-0.8 + 0j], radius_px=10) == [True]

    def test_pole_outside(self, grids):
        with pytest.raises(PoleOutsideViewport):
            pole_boundary_check(grids[1], [10 + 0j])


class TestConjugacyDeviation:
    def test_self_conjugacy(self, cn_maps):
        assert conjugacy_deviation(cn_maps[3], cn_maps[3], AffineMap.identity()) == 0.0

    def test_rotation_conjugacy(self, cn_maps):
        # C_n(ωz) = ωC_n(z) for ωⁿ = 1
        omega = complex(math.cos(2 * math.pi / 5), math.sin(2 * math.pi / 5))
        assert conjugacy_deviation(cn_maps[5], cn_maps[5], AffineMap(omega)) < 1e-9

    def test_detects_wrong_conjugacy(self, cn_maps):
        assert conjugacy_deviation(cn_maps[2], cn_maps[3], AffineMap.identity()) > 1e-3


class TestRealLineProfile:
    @pytest.mark.parametrize("n", [1, 3, 5, 7])
    def test_odd_order(self, n):
        profile = real_line_profile(n)
        assert profile.ordered
        assert profile.even_displacement_ok is None
        assert len(profile.intervals) == len(profile.breakpoints) + 1

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_even_displacement(self, n):
        profile = real_line_profile(n)
        assert profile.ordered
        assert profile.even_displacement_ok

    def test_n1_has_no_positive_breakpoints(self):
        labels = [label for label, _ in real_line_profile(1).breakpoints]
        assert labels == ["-e1", "z-", "xi", "-e2", "0"]
