"""Gray-scale guided filter that also returns its edge-coefficient map.

Windows are ``(2r+1) x (2r+1)`` squares centred on each pixel and truncated
at the image border; every window statistic divides by the number of pixels
the truncated window actually covers. The per-pixel slope and intercept are
averages over all windows containing the pixel, computed with summed-area
tables so each pass is linear in the pixel count.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EdgeMap, Image, ParameterError, ShapeError, as_image

DEFAULT_RADIUS = 2
DEFAULT_EPSILON = 1e-3


@dataclass(frozen=True)
class GuidedFilterParams:
    radius: int = DEFAULT_RADIUS
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if int(self.radius) != self.radius or self.radius < 0:
            raise ParameterError(f"radius must be a non-negative integer, got {self.radius}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        object.__setattr__(self, "radius", int(self.radius))
        object.__setattr__(self, "epsilon", float(self.epsilon))


@dataclass(frozen=True)
class GuidedFilterOutput:
    """Filtered image ``q`` with its averaged slope ``a`` and intercept ``b``.

    ``q == a * guidance + b`` pixelwise.
    """

    q: Image
    a: EdgeMap
    b: Image


def _window_bounds(n: int, radius: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(n)
    return np.maximum(idx - radius, 0), np.minimum(idx + radius + 1, n)


def box_sum(arr: np.ndarray, radius: int) -> np.ndarray:
    """Sum over the truncated ``(2r+1)``-square window around every pixel."""
    h, w = arr.shape
    sat = np.zeros((h + 1, w + 1))
    np.cumsum(np.cumsum(arr, axis=0), axis=1, out=sat[1:, 1:])
    r0, r1 = _window_bounds(h, radius)
    c0, c1 = _window_bounds(w, radius)
    return (sat[np.ix_(r1, c1)] - sat[np.ix_(r0, c1)]
            - sat[np.ix_(r1, c0)] + sat[np.ix_(r0, c0)])


def window_counts(shape: tuple[int, int], radius: int) -> np.ndarray:
    """Pixel count of each truncated window."""
    r0, r1 = _window_bounds(shape[0], radius)
    c0, c1 = _window_bounds(shape[1], radius)
    return np.outer(r1 - r0, c1 - c0).astype(np.float64)


def box_mean(arr: np.ndarray, radius: int) -> np.ndarray:
    return box_sum(arr, radius) / window_counts(arr.shape, radius)


def _prepare(guidance, src) -> tuple[np.ndarray, np.ndarray]:
    guide = as_image(guidance).pixels
    x = as_image(src).pixels
    if guide.shape != x.shape:
        raise ShapeError(f"guidance is {guide.shape} but input is {x.shape}")
    return guide, x


def _local_coefficients(guide: np.ndarray, x: np.ndarray, radius: int, epsilon: float):
    # Second moments are taken about the global means to limit cancellation;
    # a constant raster then yields exactly zero variance.
    gc = guide - guide.mean()
    xc = x - x.mean()
    mean_g = box_mean(gc, radius)
    var_g = np.maximum(box_mean(gc * gc, radius) - mean_g * mean_g, 0.0)
    if guide is x or np.array_equal(guide, x):
        cov = var_g
    else:
        cov = box_mean(gc * xc, radius) - mean_g * box_mean(xc, radius)
    a = cov / (var_g + epsilon)
    b = box_mean(x, radius) - a * box_mean(guide, radius)
    return a, b


def local_coefficients(guidance, src, params: GuidedFilterParams = GuidedFilterParams()):
    """Ridge-regression slope and intercept of every window, before averaging.

    Returns two ``rows x cols`` arrays indexed by window centre.
    """
    guide, x = _prepare(guidance, src)
    return _local_coefficients(guide, x, params.radius, params.epsilon)


def guided_filter(guidance, src, params: GuidedFilterParams = GuidedFilterParams()) -> GuidedFilterOutput:
    """Filter ``src`` under the structure of ``guidance``.

    Parameters
    ----------
    guidance, src : Image or 2-D array
        Same shape.
    params : GuidedFilterParams

    Returns
    -------
    GuidedFilterOutput
        ``a`` is the per-pixel mean of window slopes; it approaches 1 where the
        guidance varies strongly relative to ``epsilon`` and 0 where it is flat.
    """
    guide, x = _prepare(guidance, src)
    a, b = _local_coefficients(guide, x, params.radius, params.epsilon)
    a_bar = box_mean(a, params.radius)
    b_bar = box_mean(b, params.radius)
    q = a_bar * guide + b_bar
    return GuidedFilterOutput(Image(q), EdgeMap(a_bar), Image(b_bar))


def edge_response_selfguided(src, params: GuidedFilterParams = GuidedFilterParams()) -> EdgeMap:
    """Edge map from filtering an image with itself as guidance.

    Each window slope reduces to ``var / (var + epsilon)``, so every value is
    in ``[0, 1)``.
    """
    img = as_image(src)
    return guided_filter(img, img, params).a
