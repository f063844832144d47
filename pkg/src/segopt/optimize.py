"""Exact maximizers of Accuracy and Dice over all binary masks.

Both optima reduce to thresholding the marginal map:

- Accuracy is maximized by thresholding m at 1/2. Every optimal volume lies
  in [cdf_left(1/2), cdf(1/2)] on the complement distribution, and that
  interval is contained in [max(2*l1-1, 0), min(2*l1, 1)].

- Dice is maximized by thresholding m at half the optimal Dice value d*.
  Because delta (see reduced) is a step function constant between
  cumulative-volume breakpoints, dice_curve is monotone on each segment and
  its maximum is attained at a breakpoint; d* is found by an exact O(K)
  scan, no iteration. The optimal volumes form
  [cdf_left(1 - d*/2), cdf(1 - d*/2)], contained in [l1^2, 1].

Tie handling: d* is a float, so the threshold 1 - d*/2 may sit within a few
ulps of a stored level that it equals in exact arithmetic. Level matching
therefore uses a symmetric absolute tolerance (default 1e-12): a level
within tolerance of the threshold is treated as equal, included by the
inclusive mask and excluded by the strict one. Results carry a flag that
records when the tolerance actually fired.

Threshold masks are built by comparing the same 1 - m values the
distribution was grouped from, so mask volumes equal the reported interval
endpoints exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dist import (
    ValueDistribution,
    VolumeInterval,
    build_distribution,
    cdf,
    cdf_left,
)
from .errors import DegenerateDiceError, DegenerateMarginalError, ShapeMismatchError
from .field import MarginalField, Segmentation
from .reduced import accuracy_curve, constrained_overlap, dice_curve

__all__ = [
    "Metric",
    "OptimalResult",
    "OrderingCheck",
    "ConstrainedOptimum",
    "ThresholdBracket",
    "maximize_accuracy",
    "maximize_dice",
    "check_ordering",
    "constrained_optimum",
    "threshold_bracket",
    "is_optimal_member",
]

DEFAULT_TOLERANCE = 1e-12


class Metric(enum.Enum):
    ACCURACY = "accuracy"
    DICE = "dice"


@dataclass(frozen=True)
class OptimalResult:
    """Optimal value, volume interval, bracket masks, and sharp bounds.

    threshold is the level on m (1/2 for Accuracy, d*/2 for Dice).
    s_lower/s_upper are the strict/inclusive threshold masks when a field
    was supplied; their volumes equal volumes.lo / volumes.hi exactly.
    """

    metric: Metric
    value: float
    volumes: VolumeInterval
    threshold: float
    bound_lo: float
    bound_hi: float
    within_bounds: bool
    s_lower: Optional[Segmentation] = None
    s_upper: Optional[Segmentation] = None
    tie_tolerance_fired: bool = False
    tolerance: float = DEFAULT_TOLERANCE


@dataclass(frozen=True)
class OrderingCheck:
    sup_accuracy_volumes: float
    inf_dice_volumes: float
    holds: bool


@dataclass(frozen=True)
class ConstrainedOptimum:
    overlap: float
    accuracy: float
    dice: float


@dataclass(frozen=True)
class ThresholdBracket:
    s0: Segmentation
    s1: Segmentation
    vol_interval: VolumeInterval


def _cdf_pair_tol(d: ValueDistribution, t: float, tol: float) -> tuple[float, float, bool]:
    """(cdf_left, cdf, fired) at t with levels within tol treated as ties."""
    hi_idx = int(np.searchsorted(d.levels, t + tol, side="right"))
    lo_idx = int(np.searchsorted(d.levels, t - tol, side="left"))
    vol_hi = 0.0 if hi_idx == 0 else float(d.cum[hi_idx - 1])
    vol_lo = 0.0 if lo_idx == 0 else float(d.cum[lo_idx - 1])
    near = d.levels[lo_idx:hi_idx]
    fired = bool(near.size) and bool(np.any(near != t))
    return vol_lo, vol_hi, fired


def _bracket_masks(
    field: MarginalField, t: float, tol: float
) -> tuple[Segmentation, Segmentation]:
    """Strict/inclusive masks at complement level t, same comparisons as the
    distribution so volumes match its cumulative entries exactly."""
    comp = 1.0 - field.values
    s_upper = Segmentation(field.shape, comp <= t + tol)
    s_lower = Segmentation(field.shape, comp < t - tol)
    return s_lower, s_upper


def _check_field_matches(d: ValueDistribution, field: MarginalField) -> None:
    if abs(field.l1_mass - d.l1_mass) > 1e-9:
        raise ValueError("field does not generate the given distribution")


def maximize_accuracy(
    d: ValueDistribution,
    field: MarginalField | None = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> OptimalResult:
    """Optimal accuracy, its volume interval, and the threshold bracket."""
    t_comp = 0.5
    vol_lo, vol_hi, fired = _cdf_pair_tol(d, t_comp, tolerance)
    value = accuracy_curve(d, vol_lo)
    l1 = d.l1_mass
    bound_lo = max(2.0 * l1 - 1.0, 0.0)
    bound_hi = min(2.0 * l1, 1.0)
    s_lower = s_upper = None
    if field is not None:
        _check_field_matches(d, field)
        s_lower, s_upper = _bracket_masks(field, t_comp, tolerance)
    return OptimalResult(
        metric=Metric.ACCURACY,
        value=value,
        volumes=VolumeInterval(vol_lo, vol_hi),
        threshold=0.5,
        bound_lo=bound_lo,
        bound_hi=bound_hi,
        within_bounds=(bound_lo - 1e-12 <= vol_lo and vol_hi <= bound_hi + 1e-12),
        s_lower=s_lower,
        s_upper=s_upper,
        tie_tolerance_fired=fired,
        tolerance=tolerance,
    )


def maximize_dice(
    d: ValueDistribution,
    field: MarginalField | None = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> OptimalResult:
    """Optimal Dice via an exact breakpoint scan.

    Candidates are the cumulative volumes (plus v=0, which scores 0); the
    segment-monotonicity of dice_curve makes this exhaustive.
    """
    l1 = d.l1_mass
    if l1 == 0.0:
        raise DegenerateMarginalError("zero-mass marginal has no Dice optimum")
    candidates = 2.0 * (d.cum - d.prefix_integral) / (l1 + d.cum)
    best = float(np.max(candidates))
    t_comp = 1.0 - 0.5 * best
    vol_lo, vol_hi, fired = _cdf_pair_tol(d, t_comp, tolerance)
    s_lower = s_upper = None
    if field is not None:
        _check_field_matches(d, field)
        s_lower, s_upper = _bracket_masks(field, t_comp, tolerance)
    bound_lo = l1 * l1
    return OptimalResult(
        metric=Metric.DICE,
        value=best,
        volumes=VolumeInterval(vol_lo, vol_hi),
        threshold=0.5 * best,
        bound_lo=bound_lo,
        bound_hi=1.0,
        within_bounds=(bound_lo - 1e-12 <= vol_lo and vol_hi <= 1.0 + 1e-12),
        s_lower=s_lower,
        s_upper=s_upper,
        tie_tolerance_fired=fired,
        tolerance=tolerance,
    )


def check_ordering(
    d: ValueDistribution, *, tolerance: float = DEFAULT_TOLERANCE
) -> OrderingCheck:
    """sup of the accuracy-optimal volumes vs inf of the Dice-optimal ones.

    Always holds in exact arithmetic; a False result flags an
    implementation bug, not a property of the input.
    """
    _, sup_va, _ = _cdf_pair_tol(d, 0.5, tolerance)
    inf_vd = maximize_dice(d, tolerance=tolerance).volumes.lo
    return OrderingCheck(sup_va, inf_vd, holds=sup_va <= inf_vd + 1e-12)


def constrained_optimum(d: ValueDistribution, v: float) -> ConstrainedOptimum:
    """Best overlap, accuracy, and Dice at volume exactly v.

    One threshold family attains all three simultaneously.
    """
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"v must be in [0, 1], got {v!r}")
    if d.l1_mass + v == 0.0:
        raise DegenerateDiceError("constrained dice undefined at v=0 with zero mass")
    return ConstrainedOptimum(
        overlap=constrained_overlap(d, v),
        accuracy=accuracy_curve(d, v),
        dice=dice_curve(d, v),
    )


def threshold_bracket(field: MarginalField, t: float) -> ThresholdBracket:
    """Strict/inclusive threshold masks at complement level t in (0, 1].

    s1 keeps cells with m >= 1-t, s0 keeps cells with m > 1-t; their volumes
    are exactly the CDF left limit and value at t.
    """
    t = float(t)
    if not 0.0 < t <= 1.0:
        raise ValueError(f"t must be in (0, 1], got {t!r}")
    comp = 1.0 - field.values
    s1 = Segmentation(field.shape, comp <= t)
    s0 = Segmentation(field.shape, comp < t)
    return ThresholdBracket(s0=s0, s1=s1, vol_interval=VolumeInterval(s0.volume, s1.volume))


def is_optimal_member(
    s: Segmentation, field: MarginalField, result: OptimalResult
) -> bool:
    """True iff s sits cellwise between the bracket masks of the optimum."""
    if s.shape != field.shape:
        raise ShapeMismatchError(f"mask shape {s.shape} vs field shape {field.shape}")
    lower, upper = result.s_lower, result.s_upper
    if lower is None or upper is None:
        t_comp = 1.0 - result.threshold
        lower, upper = _bracket_masks(field, t_comp, result.tolerance)
    return bool(np.all(lower.bits <= s.bits) and np.all(s.bits <= upper.bits))
