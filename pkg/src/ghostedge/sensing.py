"""Speckle pattern generation and simulated bucket-detector measurements.

Random streams come from numpy's Philox counter-based generator seeded with
the caller's integer seed. Patterns are drawn as one ``(M, rows, cols)``
block of uniforms in C order, i.e. pattern-major and then row-major within
each pattern, and thresholded at the density. Because of that order the
first ``m`` patterns of a stack generated with ``M > m`` equal the stack
generated with ``M = m`` and the same seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Image,
    MeasurementVector,
    ParameterError,
    PatternStack,
    ShapeError,
    as_image,
)

DEFAULT_DENSITY = 0.5


def make_rng(seed: int) -> np.random.Generator:
    """Portable seeded generator used for patterns and detector noise."""
    if seed is None or int(seed) < 0:
        raise ParameterError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class NoiseModel:
    kind: str = "none"
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "additive-gaussian"):
            raise ParameterError(f"unknown noise kind {self.kind!r}")
        if not np.isfinite(self.sigma) or self.sigma < 0:
            raise ParameterError("noise sigma must be finite and non-negative")
        if self.kind == "none" and self.sigma != 0:
            raise ParameterError("noise kind 'none' requires sigma == 0")

    @classmethod
    def gaussian(cls, sigma: float) -> NoiseModel:
        return cls("none", 0.0) if sigma == 0 else cls("additive-gaussian", float(sigma))


NOISELESS = NoiseModel()


def generate_patterns(rows: int, cols: int, count: int, density: float = DEFAULT_DENSITY,
                      seed: int = 0) -> PatternStack:
    """Draw ``count`` independent binary patterns.

    Each pixel is 1 with probability ``density`` and 0 otherwise.
    """
    if count < 1 or rows < 1 or cols < 1:
        raise ParameterError("count, rows and cols must all be >= 1")
    if not 0 < density < 1:
        raise ParameterError(f"density must lie in (0, 1), got {density}")
    rng = make_rng(seed)
    u = rng.random((count, rows, cols))
    return PatternStack((u < density).astype(np.uint8))


def one_hot_patterns(rows: int, cols: int) -> PatternStack:
    """``rows * cols`` patterns that each light a single pixel (identity sensing)."""
    k = rows * cols
    return PatternStack(np.eye(k, dtype=np.uint8).reshape(k, rows, cols))


def measure(patterns: PatternStack, obj, noise: NoiseModel = NOISELESS,
            seed: int = 0) -> MeasurementVector:
    """Bucket values ``y = A x + noise`` for an object seen through each pattern."""
    obj = as_image(obj)
    if obj.shape != patterns.shape:
        raise ShapeError(
            f"object is {obj.rows}x{obj.cols} but patterns are {patterns.rows}x{patterns.cols}"
        )
    y = patterns.flatten() @ obj.pixels.reshape(-1)
    if noise.kind == "additive-gaussian":
        y = y + make_rng(seed).normal(0.0, noise.sigma, size=y.shape)
    return MeasurementVector(y)
