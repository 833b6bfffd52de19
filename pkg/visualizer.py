"""
Basin images for the chebdyn CLI.

Writes a BasinGrid as a binary PPM (P6, maxval 255):
- basin-zero pixels: warm ramp, light yellow (fast) to dark red (slow)
- basin-infinity pixels: cool ramp, pale cyan (fast) to navy (slow)
- unresolved pixels: black

Shading uses log(1 + iterations) scaled by the largest resolved count in
the grid, so the bytes depend only on the grid.
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional, Union

import numpy as np

from chebdyn.types import BASIN_INFINITY, BASIN_ZERO, BasinGrid

WARM_FAST = np.array([255, 236, 140], dtype=float)
WARM_SLOW = np.array([150, 20, 0], dtype=float)
COOL_FAST = np.array([180, 235, 255], dtype=float)
COOL_SLOW = np.array([10, 25, 110], dtype=float)


def ppm_header(width: int, height: int) -> bytes:
    return f"P6\n{width} {height}\n255\n".encode("ascii")


def basin_to_rgb(grid: BasinGrid) -> np.ndarray:
    """(H, W, 3) uint8 image of the grid."""
    codes, iterations = grid.codes, grid.iterations
    rgb = np.zeros(codes.shape + (3,), dtype=np.uint8)

    resolved = codes != 0
    if not resolved.any():
        return rgb
    depth = np.log1p(iterations.astype(float))
    top = depth[resolved].max()
    t = depth / top if top > 0 else np.zeros_like(depth)

    for code, fast, slow in ((BASIN_ZERO, WARM_FAST, WARM_SLOW), (BASIN_INFINITY, COOL_FAST, COOL_SLOW)):
        mask = codes == code
        if mask.any():
            shade = fast + t[mask][:, np.newaxis] * (slow - fast)
            rgb[mask] = np.rint(shade).astype(np.uint8)
    return rgb


def encode_ppm(grid: BasinGrid) -> bytes:
    vp = grid.viewport
    return ppm_header(vp.width, vp.height) + basin_to_rgb(grid).tobytes()


def create_visualization(grid: BasinGrid, output_path: Optional[Union[str, Path]] = None) -> Union[str, bytes]:
    """
    Render a basin grid.

    Args:
        grid: Grid produced by chebdyn.dynamics.render_basins
        output_path: Optional output file. If None, returns the PPM bytes.

    Returns:
        PPM bytes if output_path is None, else the resolved path written.

    Raises:
        OSError: if the file cannot be written
    """
    data = encode_ppm(grid)
    if output_path is None:
        return data
    p = Path(output_path)
    p.write_bytes(data)
    print(f"[OK] Wrote {vp_label(grid)} image to {p}", file=sys.stderr)
    return str(p.resolve())


def vp_label(grid: BasinGrid) -> str:
    vp = grid.viewport
    return f"{vp.width}x{vp.height}"
