"""Shared data types and raster/vector conversions.

Every image lives on the unit intensity scale as a read-only float64 raster.
Flattening is row-major throughout, so pixel ``(i, j)`` of an ``r x c``
raster sits at index ``i * c + j`` of its vector.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GhostImagingError(Exception):
    """Base class for errors raised by this package."""


class ShapeError(GhostImagingError, ValueError):
    """Array dimensions do not agree."""


class ParameterError(GhostImagingError, ValueError):
    """A parameter lies outside its valid range."""


class DegenerateMatrixError(GhostImagingError, ArithmeticError):
    """The sensing matrix carries no information (all zeros)."""


class UndefinedSNRError(GhostImagingError, ArithmeticError):
    """SNR is undefined because the background has zero variance."""


class MaskError(GhostImagingError, ValueError):
    """A region mask lacks edge or background pixels."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    if arr.flags.writeable or not arr.flags.c_contiguous:
        arr = np.array(arr, order="C", copy=True)
        arr.flags.writeable = False
    return arr


def _as_2d_float(data, name: str = "pixels") -> np.ndarray:
    arr = np.array(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True, eq=False)
class Image:
    """Real-valued ``rows x cols`` raster.

    Use :meth:`from_array` for float data and :meth:`from_integer_raster`
    for 8- or 16-bit rasters, which are scaled linearly onto ``[0, 1]``.
    """

    pixels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pixels", _frozen(_as_2d_float(self.pixels)))

    @classmethod
    def from_array(cls, data) -> Image:
        return cls(np.asarray(data, dtype=np.float64))

    @classmethod
    def from_integer_raster(cls, data, maxval: int | None = None) -> Image:
        """Normalize an unsigned integer raster by its maximum code value.

        ``maxval`` defaults to 255 for ``uint8`` input and 65535 otherwise.
        """
        arr = np.asarray(data)
        if not np.issubdtype(arr.dtype, np.integer):
            raise ParameterError(f"expected an integer raster, got dtype {arr.dtype}")
        if maxval is None:
            maxval = 255 if arr.dtype == np.uint8 else 65535
        if maxval < 1 or arr.min(initial=0) < 0 or arr.max(initial=0) > maxval:
            raise ParameterError(f"raster values must lie in [0, {maxval}]")
        return cls(arr.astype(np.float64) / maxval)

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.pixels, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    __hash__ = None


def as_image(data) -> Image:
    """Accept an :class:`Image`, :class:`EdgeMap` or 2-D array."""
    if isinstance(data, Image):
        return data
    if isinstance(data, EdgeMap):
        return Image(data.coefficients)
    return Image.from_array(data)


def image_to_vector(img) -> np.ndarray:
    """Flatten an image row-major into a length ``rows * cols`` vector."""
    return as_image(img).pixels.reshape(-1).copy()


def vector_to_image(v, rows: int, cols: int) -> Image:
    """Inverse of :func:`image_to_vector`."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size != rows * cols:
        raise ShapeError(f"vector of shape {v.shape} cannot be reshaped to {rows}x{cols}")
    return Image(v.reshape(rows, cols))


@dataclass(frozen=True, eq=False)
class PatternStack:
    """``M`` illumination patterns of identical ``rows x cols`` shape.

    ``patterns`` is stored as an ``(M, rows, cols)`` array. Generated binary
    stacks keep a compact ``uint8`` dtype; loaded stacks may hold any
    non-negative reals.
    """

    patterns: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.patterns)
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise ShapeError(f"patterns must have shape (M, rows, cols), got {arr.shape}")
        if arr.dtype == np.bool_:
            arr = arr.astype(np.uint8)
        elif not (np.issubdtype(arr.dtype, np.integer) or np.issubdtype(arr.dtype, np.floating)):
            raise ParameterError(f"unsupported pattern dtype {arr.dtype}")
        if np.issubdtype(arr.dtype, np.floating) and not np.all(np.isfinite(arr)):
            raise ParameterError("patterns contain non-finite values")
        if arr.min() < 0:
            raise ParameterError("patterns must be non-negative")
        object.__setattr__(self, "patterns", _frozen(arr))

    @property
    def count(self) -> int:
        return self.patterns.shape[0]

    @property
    def rows(self) -> int:
        return self.patterns.shape[1]

    @property
    def cols(self) -> int:
        return self.patterns.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.patterns.shape[1:]

    @property
    def is_binary(self) -> bool:
        return bool(np.all((self.patterns == 0) | (self.patterns == 1)))

    def flatten(self) -> np.ndarray:
        """Sensing matrix ``A`` of shape ``(M, rows * cols)``, float64."""
        return self.patterns.reshape(self.count, -1).astype(np.float64)

    def __len__(self):
        return self.count

    def __getitem__(self, index) -> PatternStack:
        sub = self.patterns[index]
        if sub.ndim == 2:
            sub = sub[np.newaxis]
        return PatternStack(sub)

    def __eq__(self, other):
        if not isinstance(other, PatternStack):
            return NotImplemented
        return (
            self.patterns.shape == other.patterns.shape
            and self.patterns.dtype == other.patterns.dtype
            and bool(np.array_equal(self.patterns, other.patterns))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class MeasurementVector:
    """Bucket values ``y``, one per pattern."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).reshape(-1)
        if arr.size < 1:
            raise ShapeError("measurement vector is empty")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("measurements contain non-finite values")
        object.__setattr__(self, "values", _frozen(arr))

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, MeasurementVector):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    __hash__ = None


def as_measurements(y) -> np.ndarray:
    if isinstance(y, MeasurementVector):
        return y.values
    return MeasurementVector(y).values


@dataclass(frozen=True, eq=False)
class EdgeMap:
    """Per-pixel edge coefficients (window-averaged guided-filter slopes)."""

    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _frozen(_as_2d_float(self.coefficients, "coefficients"))
        )

    @property
    def rows(self) -> int:
        return self.coefficients.shape[0]

    @property
    def cols(self) -> int:
        return self.coefficients.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.coefficients.shape

    def normalized(self) -> Image:
        """Min-max rescaled copy on ``[0, 1]`` for display and metrics."""
        return Image(minmax_normalize(self.coefficients))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coefficients, dtype=dtype)


def minmax_normalize(arr) -> np.ndarray:
    """Rescale to ``[0, 1]``; a constant array maps to zeros."""
    arr = np.asarray(arr, dtype=np.float64)
    lo, hi = arr.min(), arr.max()
    if hi <= lo:
        return np.zeros_like(arr)
    return (arr - lo) / (hi - lo)


@dataclass(frozen=True)
class ReconstructionResult:
    """Output of an iterative reconstruction.

    ``image`` is the final estimate, clipped to ``[0, 1]`` when the run used
    clamping. ``filtered``, ``guidance`` and ``offset`` are the raw output,
    guidance image and averaged intercept map of the final filter pass, so
    that ``filtered == edge * guidance + offset`` holds pixelwise. They are
    ``None`` for methods without a guided-filter stage.
    """

    image: Image
    edge: EdgeMap
    iterations_run: int
    residual_history: tuple[float, ...]
    converged: bool = False
    stop_reason: str = "max_iterations"
    filtered: Image | None = field(default=None, repr=False)
    guidance: Image | None = field(default=None, repr=False)
    offset: Image | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.iterations_run != len(self.residual_history):
            raise ParameterError("iterations_run must equal len(residual_history)")
        if self.image.shape != self.edge.shape:
            raise ShapeError("image and edge map differ in shape")
