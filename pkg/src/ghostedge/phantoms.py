"""Synthetic test objects on the unit intensity scale."""
from __future__ import annotations

import numpy as np

from .core import Image, ParameterError


def _grid(size: int) -> tuple[np.ndarray, np.ndarray]:
    # pixel centres in unit coordinates, (row, col)
    yy, xx = np.mgrid[0:size, 0:size] + 0.5
    return yy / size, xx / size


def _convex_polygon(size: int, vertices) -> np.ndarray:
    """Mask of a convex polygon with ``(x, y)`` vertices in ``[0, 1]``, either winding."""
    yy, xx = _grid(size)
    left = np.ones((size, size), dtype=bool)
    right = np.ones((size, size), dtype=bool)
    pts = np.asarray(vertices, dtype=np.float64)
    for (x0, y0), (x1, y1) in zip(pts, np.roll(pts, -1, axis=0)):
        cross = (x1 - x0) * (yy - y0) - (y1 - y0) * (xx - x0)
        left &= cross >= 0
        right &= cross <= 0
    return left | right


def _ellipse(size: int, cx, cy, rx, ry) -> np.ndarray:
    yy, xx = _grid(size)
    return ((xx - cx) / rx) ** 2 + ((yy - cy) / ry) ** 2 <= 1


def aircraft(size: int = 64) -> Image:
    """Dark aircraft silhouette (0) on a bright sky (1), nose pointing up."""
    if size < 8:
        raise ParameterError("aircraft phantom needs size >= 8")
    body = _ellipse(size, 0.5, 0.5, 0.07, 0.42)
    # swept wings and tailplane are not convex as a whole; build them from halves
    right = _convex_polygon(size, [(0.5, 0.38), (0.5, 0.52), (0.92, 0.64), (0.92, 0.58)])
    left = _convex_polygon(size, [(0.5, 0.38), (0.08, 0.58), (0.08, 0.64), (0.5, 0.52)])
    tail_r = _convex_polygon(size, [(0.5, 0.76), (0.5, 0.86), (0.7, 0.9), (0.7, 0.86)])
    tail_l = _convex_polygon(size, [(0.5, 0.76), (0.3, 0.86), (0.3, 0.9), (0.5, 0.86)])
    img = np.ones((size, size))
    img[body | right | left | tail_r | tail_l] = 0.0
    return Image(img)


def gray_blocks(size: int = 64) -> Image:
    """Simple gray-scale scene: a disc, a square and a bar at distinct levels."""
    if size < 8:
        raise ParameterError("gray_blocks phantom needs size >= 8")
    img = np.full((size, size), 0.2)
    img[_convex_polygon(size, [(0.12, 0.12), (0.12, 0.45), (0.45, 0.45), (0.45, 0.12)])] = 0.9
    img[_ellipse(size, 0.7, 0.32, 0.18, 0.18)] = 0.6
    img[_convex_polygon(size, [(0.15, 0.65), (0.15, 0.85), (0.85, 0.85), (0.85, 0.65)])] = 0.45
    return Image(img)


PHANTOMS = {"aircraft": aircraft, "gray_blocks": gray_blocks}


def make_phantom(name: str, size: int = 64) -> Image:
    try:
        return PHANTOMS[name](size)
    except KeyError:
        raise ParameterError(f"unknown phantom {name!r}; choose from {sorted(PHANTOMS)}") from None
