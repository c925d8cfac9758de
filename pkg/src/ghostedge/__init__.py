"""Ghost imaging with joint edge detection.

Simulates single-pixel measurements of an object through random binary
patterns and recovers both the image and its edge map by alternating
projected Landweber steps with guided filtering.
"""
from .baseline import correlation_image, reconstruct_cgi
from .core import (
    DegenerateMatrixError,
    EdgeMap,
    GhostImagingError,
    Image,
    MaskError,
    MeasurementVector,
    ParameterError,
    PatternStack,
    ReconstructionResult,
    ShapeError,
    UndefinedSNRError,
    image_to_vector,
    vector_to_image,
)
from .guided_filter import (
    GuidedFilterOutput,
    GuidedFilterParams,
    edge_response_selfguided,
    guided_filter,
    local_coefficients,
)
from .jigi import JigiConfig, PlirSettings, reconstruct_jigi, reconstruct_plir_only
from .metrics import RegionMask, ground_truth_edge, mse, psnr, snr
from .plir import PlirOperator, build_operator, plir_step
from .sensing import NoiseModel, generate_patterns, measure, one_hot_patterns

__version__ = "0.1.0"

__all__ = [
    "DegenerateMatrixError", "EdgeMap", "GhostImagingError", "GuidedFilterOutput",
    "GuidedFilterParams", "Image", "JigiConfig", "MaskError", "MeasurementVector",
    "NoiseModel", "ParameterError", "PatternStack", "PlirOperator", "PlirSettings",
    "ReconstructionResult", "RegionMask", "ShapeError", "UndefinedSNRError",
    "build_operator", "correlation_image", "edge_response_selfguided", "generate_patterns",
    "ground_truth_edge", "guided_filter", "image_to_vector", "local_coefficients", "measure",
    "mse", "one_hot_patterns", "plir_step", "psnr", "reconstruct_cgi", "reconstruct_jigi",
    "reconstruct_plir_only", "snr", "vector_to_image",
]
