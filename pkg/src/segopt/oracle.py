"""Exhaustive reference optimizer over all 2^n masks of a tiny grid.

Used to certify the analytic optimizers: enumerate every binary mask,
score it directly from the metric definitions, and collect the full argmax
set. Masks are indexed by the integer whose bit j is cell j, and the
per-cell accumulation below visits cells in a fixed ascending order, so
values and tie sets are deterministic. Hard cap at 20 cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDiceError,
    DegenerateMarginalError,
    GridTooLargeError,
    UnachievableVolumeError,
)
from .field import MarginalField, Segmentation
from .optimize import Metric

__all__ = ["BruteForceResult", "ConstrainedBruteForce", "brute_force", "brute_force_constrained"]

MAX_CELLS = 20
ARGMAX_SLACK = 1e-12


@dataclass(frozen=True)
class BruteForceResult:
    best_value: float
    optimal_masks: list[Segmentation]
    optimal_volumes: list[float]


@dataclass(frozen=True)
class ConstrainedBruteForce:
    best_value: float
    optimal_masks: list[Segmentation]


def _enumerate(field: MarginalField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bit table plus per-mask overlap and accuracy sums (not yet / n)."""
    n = field.ncells
    if n > MAX_CELLS:
        raise GridTooLargeError(f"{n} cells exceeds the {MAX_CELLS}-cell enumeration cap")
    total = 1 << n
    patterns = np.arange(total, dtype=np.uint32)
    bits = ((patterns[:, None] >> np.arange(n, dtype=np.uint32)[None, :]) & 1).astype(bool)
    overlap = np.zeros(total)
    acc = np.zeros(total)
    values = field.values
    for j in range(n):
        col = bits[:, j]
        overlap += np.where(col, values[j], 0.0)
        acc += np.where(col, values[j], 1.0 - values[j])
    return bits, overlap, acc


def _scores(
    field: MarginalField, metric: Metric, bits: np.ndarray, overlap: np.ndarray, acc: np.ndarray
) -> np.ndarray:
    n = field.ncells
    if metric is Metric.ACCURACY:
        return acc / n
    if field.l1_mass == 0.0:
        raise DegenerateMarginalError("Dice enumeration over a zero-mass field")
    volumes = bits.sum(axis=1) / n
    return 2.0 * (overlap / n) / (volumes + field.l1_mass)


def brute_force(field: MarginalField, metric: Metric) -> BruteForceResult:
    """Exact optimum and the full set of optimal masks and volumes."""
    bits, overlap, acc = _enumerate(field)
    scores = _scores(field, metric, bits, overlap, acc)
    best = float(np.max(scores))
    idx = np.flatnonzero(scores >= best - ARGMAX_SLACK)
    masks = [Segmentation(field.shape, bits[i]) for i in idx]
    volumes = sorted({m.volume for m in masks})
    return BruteForceResult(best_value=best, optimal_masks=masks, optimal_volumes=volumes)


def brute_force_constrained(
    field: MarginalField, metric: Metric, v: float
) -> ConstrainedBruteForce:
    """Exact optimum over masks whose volume is exactly v."""
    n = field.ncells
    k = round(float(v) * n)
    if abs(float(v) * n - k) > 1e-9 or not 0 <= k <= n:
        raise UnachievableVolumeError(f"volume {v!r} is not a multiple of 1/{n}")
    bits, overlap, acc = _enumerate(field)
    keep = bits.sum(axis=1) == k
    if metric is Metric.DICE and field.l1_mass == 0.0 and k == 0:
        raise DegenerateDiceError("Dice undefined for empty mask on zero-mass field")
    scores = _scores(field, metric, bits, overlap, acc)[keep]
    rows = np.flatnonzero(keep)
    best = float(np.max(scores))
    idx = rows[np.flatnonzero(scores >= best - ARGMAX_SLACK)]
    masks = [Segmentation(field.shape, bits[i]) for i in idx]
    return ConstrainedBruteForce(best_value=best, optimal_masks=masks)
