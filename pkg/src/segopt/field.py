"""Marginal maps and binary segmentations on a uniform grid.

A MarginalField holds one probability per cell of a discretized unit cube;
a Segmentation holds one bit per cell on the same grid. Cells all carry the
same volume 1/(cell count), so the total measure is 1 and a mask's volume is
an exact rational count/cells. Both types are immutable after construction
and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from ._accum import csum
from .errors import FieldValueError, ShapeMismatchError

__all__ = [
    "MarginalField",
    "Segmentation",
    "VolumeStats",
    "ensemble_marginal",
    "complement",
    "ensemble_volume_stats",
    "as_field",
]


def _normalize_shape(shape: Any) -> tuple[int, ...]:
    try:
        dims = tuple(int(n) for n in shape)
    except TypeError:
        dims = (int(shape),)
    if not dims or any(n < 1 for n in dims):
        raise FieldValueError(f"shape must have positive extents, got {shape!r}")
    return dims


@dataclass(frozen=True)
class MarginalField:
    """Per-cell probabilities in [0, 1], flat in row-major cell order.

    l1_mass is the compensated sum of values times cell volume, i.e. the
    expected foreground volume. Construction rejects out-of-range values and
    never clamps.
    """

    shape: tuple[int, ...]
    values: np.ndarray
    meta: Mapping[str, Any] | None = None
    cell_volume: float = field(init=False)
    l1_mass: float = field(init=False)

    def __post_init__(self) -> None:
        shape = _normalize_shape(self.shape)
        # takes ownership of an already-contiguous float64 array (it is
        # frozen in place); anything else is converted into a fresh copy
        values = np.ascontiguousarray(self.values, dtype=np.float64).reshape(-1)
        if values.size != math.prod(shape):
            raise FieldValueError(
                f"{values.size} values do not fill shape {shape}"
            )
        vmin, vmax = float(np.min(values)), float(np.max(values))
        if not (vmin >= 0.0 and vmax <= 1.0):
            bad = vmin if not vmin >= 0.0 else vmax
            raise FieldValueError(f"cell value {bad!r} outside [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "cell_volume", 1.0 / values.size)
        object.__setattr__(self, "l1_mass", csum(values) / values.size)

    @property
    def ncells(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class Segmentation:
    """Binary mask on a grid; volume is exactly ones-count / cell-count."""

    shape: tuple[int, ...]
    bits: np.ndarray
    volume: float = field(init=False)

    def __post_init__(self) -> None:
        shape = _normalize_shape(self.shape)
        raw = np.asarray(self.bits).reshape(-1)
        if raw.size != math.prod(shape):
            raise FieldValueError(f"{raw.size} bits do not fill shape {shape}")
        bits = raw.astype(np.uint8, copy=True)
        if raw.dtype != np.bool_ and not bool(np.isin(raw, (0, 1)).all()):
            raise FieldValueError("mask bits must be exactly 0 or 1")
        bits.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "volume", int(np.count_nonzero(bits)) / bits.size)

    @property
    def ncells(self) -> int:
        return self.bits.size


@dataclass(frozen=True)
class VolumeStats:
    mean_volume: float
    volume_variance: float


def _require_same_shape(a, b) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")


def ensemble_marginal(masks: Sequence[Segmentation]) -> MarginalField:
    """Point-wise average of an ensemble of masks.

    Each cell value is (masks marking the cell) / (mask count), an exact
    binary-rational multiple of 1/K; equal counts therefore map to the same
    float and level grouping downstream stays exact.
    """
    if not masks:
        raise FieldValueError("need at least one mask")
    first = masks[0]
    counts = np.zeros(first.ncells, dtype=np.int64)
    for m in masks:
        _require_same_shape(first, m)
        counts += m.bits
    return MarginalField(first.shape, counts / len(masks))


def complement(obj: MarginalField | Segmentation):
    """1 - value per cell; involutive on both types."""
    if isinstance(obj, Segmentation):
        return Segmentation(obj.shape, 1 - obj.bits)
    return MarginalField(obj.shape, 1.0 - obj.values)


def ensemble_volume_stats(masks: Sequence[Segmentation]) -> VolumeStats:
    """Population mean/variance of mask volumes.

    The mean is taken from the ensemble marginal's l1_mass so it matches that
    field exactly (same finite sum).
    """
    mean = ensemble_marginal(masks).l1_mass
    dev = [(m.volume - mean) ** 2 for m in masks]
    return VolumeStats(mean_volume=mean, volume_variance=math.fsum(dev) / len(masks))


def as_field(mask: Segmentation) -> MarginalField:
    """View a binary mask as a (noise-free) marginal field."""
    return MarginalField(mask.shape, mask.bits.astype(np.float64))
