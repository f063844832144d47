"""Accuracy and Dice between a concrete mask and a marginal map.

Accuracy integrates s*m + (1-s)*(1-m) over the grid; Dice is twice the
overlap mass over the sum of the two volumes. Both use compensated
summation on the flat cell order. Empty-vs-empty Dice is an explicit error
rather than a silent convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._accum import csum
from .errors import DegenerateDiceError, ShapeMismatchError
from .field import MarginalField, Segmentation, as_field, ensemble_marginal, ensemble_volume_stats

__all__ = ["accuracy", "dice", "overlap_mass", "ensemble_dice_gap", "EnsembleDiceGap"]


def _check_shapes(s: Segmentation, m: MarginalField) -> None:
    if s.shape != m.shape:
        raise ShapeMismatchError(f"mask shape {s.shape} vs field shape {m.shape}")


def overlap_mass(s: Segmentation, m: MarginalField) -> float:
    """Integral of s*m over the grid."""
    _check_shapes(s, m)
    return csum(m.values[s.bits.view(bool)]) / m.ncells


def accuracy(s: Segmentation, m: MarginalField) -> float:
    _check_shapes(s, m)
    on = s.bits.view(bool)
    terms = np.where(on, m.values, 1.0 - m.values)
    return csum(terms) / m.ncells


def dice(s: Segmentation, m: MarginalField) -> float:
    _check_shapes(s, m)
    denom = s.volume + m.l1_mass
    if denom == 0.0:
        raise DegenerateDiceError("dice of empty mask against zero-mass field")
    return 2.0 * overlap_mass(s, m) / denom


@dataclass(frozen=True)
class EnsembleDiceGap:
    dice_of_mean: float
    mean_of_dice: float
    volume_variance: float


def ensemble_dice_gap(masks: Sequence[Segmentation], s: Segmentation) -> EnsembleDiceGap:
    """Dice against the ensemble average vs the average of per-mask Dice.

    The two coincide exactly when all masks share one volume; the variance
    in the result quantifies how far that premise holds.
    """
    mean_field = ensemble_marginal(masks)
    d_mean = dice(s, mean_field)
    per_mask = [dice(s, as_field(m)) for m in masks]
    return EnsembleDiceGap(
        dice_of_mean=d_mean,
        mean_of_dice=math.fsum(per_mask) / len(per_mask),
        volume_variance=ensemble_volume_stats(masks).volume_variance,
    )
