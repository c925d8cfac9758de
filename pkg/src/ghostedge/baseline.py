"""Correlation ghost imaging, used as the comparison baseline."""
from __future__ import annotations

import numpy as np

from .core import Image, ParameterError, PatternStack, ShapeError, as_measurements, minmax_normalize


def correlation_image(patterns: PatternStack, y) -> np.ndarray:
    """Ensemble covariance ``<(B - <B>)(I(i,j) - <I(i,j)>)>`` per pixel, unnormalized."""
    y = as_measurements(y)
    if y.size != patterns.count:
        raise ShapeError(f"{y.size} measurements for {patterns.count} patterns")
    if patterns.count < 2:
        raise ParameterError("correlation imaging needs at least 2 patterns")
    a = patterns.flatten()
    a -= a.mean(axis=0)
    g = (y - y.mean()) @ a / patterns.count
    return g.reshape(patterns.shape)


def reconstruct_cgi(patterns: PatternStack, y) -> Image:
    """Correlation image min-max scaled onto ``[0, 1]``."""
    return Image(minmax_normalize(correlation_image(patterns, y)))
