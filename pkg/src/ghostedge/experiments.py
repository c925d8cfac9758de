"""Simulate-reconstruct-score runs over a range of measurement counts."""
from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass

from .config import RunConfig
from .core import GhostImagingError, Image, ReconstructionResult, UndefinedSNRError
from .formats import read_pgm
from .jigi import reconstruct_jigi
from .metrics import ground_truth_edge, psnr, snr
from .phantoms import PHANTOMS, make_phantom
from .sensing import NoiseModel, generate_patterns, measure


@dataclass
class SweepPoint:
    m: int
    image_psnr: float = math.nan
    edge_psnr: float = math.nan
    edge_snr: float = math.nan
    iterations: int = 0
    seconds: float = math.nan
    error: str | None = None
    result: ReconstructionResult | None = None


def load_object(phantom: str, size: int) -> Image:
    """Built-in phantom by name, otherwise a PGM file path."""
    if phantom in PHANTOMS:
        return make_phantom(phantom, size)
    if os.path.exists(phantom):
        return read_pgm(phantom)
    raise FileNotFoundError(f"no phantom named {phantom!r} and no such file")


def simulate(obj: Image, m: int, cfg: RunConfig):
    patterns = generate_patterns(obj.rows, obj.cols, m, cfg.sensing.density, cfg.seed)
    y = measure(patterns, obj, NoiseModel.gaussian(cfg.sensing.noise_sigma), cfg.seed)
    return patterns, y


def run_point(obj: Image, m: int, cfg: RunConfig) -> SweepPoint:
    """Simulate ``m`` measurements of ``obj`` and score the joint reconstruction."""
    start = time.perf_counter()
    patterns, y = simulate(obj, m, cfg)
    result = reconstruct_jigi(patterns, y, cfg.jigi_config())
    seconds = time.perf_counter() - start

    mask, edge_truth = ground_truth_edge(obj, cfg.metrics.edge_threshold)
    edge = result.edge.normalized()
    try:
        edge_snr = snr(edge, mask)
    except UndefinedSNRError:
        edge_snr = math.nan
    return SweepPoint(
        m=m,
        image_psnr=psnr(obj, result.image, cfg.metrics.max_val),
        edge_psnr=psnr(edge_truth, edge, cfg.metrics.max_val),
        edge_snr=edge_snr,
        iterations=result.iterations_run,
        seconds=seconds,
        result=result,
    )


def run_sweep(obj: Image, cfg: RunConfig) -> list[SweepPoint]:
    """Evaluate every count in ``cfg.m_values``; a failing point is recorded, not raised.

    All points share ``cfg.seed``, so smaller pattern sets are prefixes of
    larger ones.
    """
    points = []
    for m in cfg.m_values:
        try:
            points.append(run_point(obj, m, cfg))
        except (GhostImagingError, ArithmeticError, ValueError) as exc:
            points.append(SweepPoint(m=m, error=f"{type(exc).__name__}: {exc}"))
    return points
