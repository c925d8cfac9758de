"""Joint iteration of projected Landweber steps and guided filtering.

Each iteration applies one Landweber correction to the previous filter
output, then guided-filters the corrected image. The first pass is guided by
the corrected image itself; later passes are guided by the previous filter
output. The filter's averaged slope map is the edge image.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Image,
    ParameterError,
    PatternStack,
    ReconstructionResult,
    ShapeError,
    as_measurements,
)
from .guided_filter import (
    GuidedFilterOutput,
    GuidedFilterParams,
    edge_response_selfguided,
    guided_filter,
)
from .plir import DEFAULT_OMEGA, DEFAULT_RANK_CUTOFF, PlirOperator, build_operator, plir_step

log = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 1000
DEFAULT_TOLERANCE = 1e-4
STAGNATION_PATIENCE = 5
STAGNATION_GROWTH = 10.0


@dataclass(frozen=True)
class PlirSettings:
    omega: float = DEFAULT_OMEGA
    rank_cutoff: float = DEFAULT_RANK_CUTOFF
    clamp: bool = True


@dataclass(frozen=True)
class JigiConfig:
    """Loop control plus the Landweber and filter settings.

    Iteration stops once the relative L2 change of the filter output drops
    below ``tolerance``, after ``max_iterations``, or on stagnation (see
    :class:`StopMonitor`). On stagnation the iterate with the smallest residual
    is returned.
    """

    max_iterations: int = DEFAULT_MAX_ITERATIONS
    tolerance: float = DEFAULT_TOLERANCE
    plir: PlirSettings = field(default_factory=PlirSettings)
    filter: GuidedFilterParams = field(default_factory=GuidedFilterParams)

    def __post_init__(self):
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ParameterError(f"max_iterations must be a positive integer, got {self.max_iterations}")
        if not self.tolerance > 0:
            raise ParameterError(f"tolerance must be positive, got {self.tolerance}")


class StopMonitor:
    """Decides when the joint iteration stops.

    Convergence is a relative change below ``tolerance``. Stagnation means the
    absolute step ``||q_t - q_{t-1}||`` grew for ``patience`` consecutive
    iterations and now exceeds ``growth`` times the smallest step seen so far;
    the growth condition keeps slow transients from counting as divergence.
    """

    def __init__(self, tolerance: float, patience: int = STAGNATION_PATIENCE,
                 growth: float = STAGNATION_GROWTH):
        self.tolerance = tolerance
        self.patience = patience
        self.growth = growth
        self._last = math.inf
        self._smallest = math.inf
        self._rising = 0

    def update(self, relative_change: float, step: float) -> str | None:
        """Return ``"tolerance"``, ``"stagnation"`` or ``None`` to continue."""
        if relative_change < self.tolerance:
            return "tolerance"
        if not math.isfinite(step):
            return "stagnation"
        self._rising = self._rising + 1 if step > self._last else 0
        self._last = step
        self._smallest = min(self._smallest, step)
        if self._rising >= self.patience and step > self.growth * self._smallest:
            return "stagnation"
        return None


@dataclass(frozen=True)
class IterationState:
    """Snapshot handed to a per-iteration callback."""

    iteration: int
    x: np.ndarray
    output: GuidedFilterOutput | None
    residual: float
    change: float


def _relative_change(new: np.ndarray, old: np.ndarray) -> float:
    return float(np.linalg.norm(new - old) / max(np.linalg.norm(old), 1e-12))


def _setup(patterns: PatternStack, y, cfg: JigiConfig) -> tuple[PlirOperator, np.ndarray]:
    y = as_measurements(y)
    if y.size != patterns.count:
        raise ShapeError(f"{y.size} measurements for {patterns.count} patterns")
    op = build_operator(patterns, cfg.plir.omega, cfg.plir.rank_cutoff)
    return op, y


def reconstruct_jigi(patterns: PatternStack, y, cfg: JigiConfig = JigiConfig(),
                     callback=None) -> ReconstructionResult:
    """Recover the image and its edge map jointly from bucket measurements.

    Parameters
    ----------
    patterns : PatternStack
    y : MeasurementVector or array_like
        One bucket value per pattern.
    cfg : JigiConfig
    callback : callable, optional
        Called with an :class:`IterationState` after every iteration.

    Returns
    -------
    ReconstructionResult
        ``residual_history[t]`` is ``||y - A x||`` right after the Landweber
        step of iteration ``t + 1``. ``edge`` holds the raw averaged slopes of
        the final filter pass.
    """
    op, y = _setup(patterns, y, cfg)
    shape = patterns.shape
    clamp = cfg.plir.clamp

    prev = np.zeros(op.shape[1])
    q_prev = prev.reshape(shape)
    residuals: list[float] = []
    best = None
    monitor = StopMonitor(cfg.tolerance)
    converged = False
    reason = "max_iterations"

    for t in range(1, cfg.max_iterations + 1):
        x = plir_step(op, prev, y, clamp=clamp)
        residual = float(np.linalg.norm(y - op.forward(x)))
        residuals.append(residual)
        x_img = x.reshape(shape)
        guide = x_img if t == 1 else q_prev
        out = guided_filter(guide, x_img, cfg.filter)
        q = out.q.pixels

        if best is None or residual < best[0]:
            best = (residual, out, guide)
        step = float(np.linalg.norm(q - q_prev))
        change = step / max(float(np.linalg.norm(q_prev)), 1e-12)
        log.debug("iteration %d: residual %.6g, change %.3g", t, residual, change)
        if callback is not None:
            callback(IterationState(t, x, out, residual, change))

        q_prev = q
        prev = q.reshape(-1)
        decision = monitor.update(change, step)
        if decision == "tolerance":
            converged, reason = True, decision
            break
        if decision == "stagnation":
            reason = decision
            _, out, guide = best
            break

    image = np.clip(out.q.pixels, 0.0, 1.0) if clamp else out.q.pixels
    return ReconstructionResult(
        image=Image(image),
        edge=out.a,
        iterations_run=len(residuals),
        residual_history=tuple(residuals),
        converged=converged,
        stop_reason=reason,
        filtered=out.q,
        guidance=Image(guide),
        offset=out.b,
    )


def reconstruct_plir_only(patterns: PatternStack, y, cfg: JigiConfig = JigiConfig(),
                          callback=None) -> ReconstructionResult:
    """Ablation: the same loop with the filter stage replaced by the identity.

    The edge map is computed once, from the final iterate, by self-guided
    filtering with ``cfg.filter``.
    """
    op, y = _setup(patterns, y, cfg)
    shape = patterns.shape
    x = np.zeros(op.shape[1])
    residuals: list[float] = []
    converged = False
    reason = "max_iterations"

    for _ in range(cfg.max_iterations):
        x_new = plir_step(op, x, y, clamp=cfg.plir.clamp)
        residual = float(np.linalg.norm(y - op.forward(x_new)))
        residuals.append(residual)
        change = _relative_change(x_new, x)
        x = x_new
        if callback is not None:
            callback(IterationState(len(residuals), x, None, residual, change))
        if change < cfg.tolerance:
            converged, reason = True, "tolerance"
            break

    image = Image(x.reshape(shape))
    return ReconstructionResult(
        image=image,
        edge=edge_response_selfguided(image, cfg.filter),
        iterations_run=len(residuals),
        residual_history=tuple(residuals),
        converged=converged,
        stop_reason=reason,
    )
