"""Image and edge-map quality measures."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import Image, MaskError, ParameterError, ShapeError, UndefinedSNRError, as_image

EDGE, BACKGROUND, IGNORE = 1, 0, -1
DEFAULT_EDGE_THRESHOLD = 0.25


@dataclass(frozen=True, eq=False)
class RegionMask:
    """Per-pixel labels: ``EDGE``, ``BACKGROUND`` or ``IGNORE``."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int8)
        if labels.ndim != 2:
            raise ShapeError(f"mask must be 2-D, got shape {labels.shape}")
        if not np.isin(labels, (EDGE, BACKGROUND, IGNORE)).all():
            raise MaskError("mask labels must be EDGE, BACKGROUND or IGNORE")
        if not (labels == EDGE).any():
            raise MaskError("mask has no edge pixels")
        if not (labels == BACKGROUND).any():
            raise MaskError("mask has no background pixels")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_edge_image(cls, edge) -> RegionMask:
        """Nonzero pixels become edge, the rest background."""
        edge = as_image(edge).pixels
        return cls(np.where(edge > 0, EDGE, BACKGROUND))

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape

    @property
    def edge(self) -> np.ndarray:
        return self.labels == EDGE

    @property
    def background(self) -> np.ndarray:
        return self.labels == BACKGROUND


def snr(result, mask: RegionMask) -> float:
    """Edge-to-background contrast in units of background standard deviation.

    Uses the population variance of the background pixels.
    """
    q = as_image(result).pixels
    if q.shape != mask.shape:
        raise ShapeError(f"result is {q.shape} but mask is {mask.shape}")
    back = q[mask.background]
    var = back.var()
    if not var > 0:
        raise UndefinedSNRError("background variance is zero")
    return float((q[mask.edge].mean() - back.mean()) / math.sqrt(var))


def mse(reference, candidate) -> float:
    ref = as_image(reference).pixels
    cand = as_image(candidate).pixels
    if ref.shape != cand.shape:
        raise ShapeError(f"reference is {ref.shape} but candidate is {cand.shape}")
    return float(np.mean((ref - cand) ** 2))


def psnr(reference, candidate, max_val: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical inputs."""
    if not max_val > 0:
        raise ParameterError(f"max_val must be positive, got {max_val}")
    err = mse(reference, candidate)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(max_val**2 / err)


def sobel_magnitude(img) -> np.ndarray:
    """Gradient magnitude from the 3x3 Sobel pair, replicating border pixels."""
    px = as_image(img).pixels
    gy = ndimage.sobel(px, axis=0, mode="nearest")
    gx = ndimage.sobel(px, axis=1, mode="nearest")
    return np.hypot(gx, gy)


def ground_truth_edge(obj, threshold: float = DEFAULT_EDGE_THRESHOLD) -> tuple[RegionMask, Image]:
    """Reference edge set of a known object.

    The Sobel magnitude is min-max normalized and pixels strictly above
    ``threshold`` are labelled edge. Returns the mask and the matching binary
    edge image.
    """
    if not 0 < threshold < 1:
        raise ParameterError(f"threshold must lie in (0, 1), got {threshold}")
    mag = sobel_magnitude(obj)
    lo, hi = mag.min(), mag.max()
    if hi <= lo:
        raise MaskError("object has no gradient, so no edge pixels")
    edge = (mag - lo) / (hi - lo) > threshold
    return RegionMask(np.where(edge, EDGE, BACKGROUND)), Image(edge.astype(np.float64))
