"""Closed-form extreme-case marginals and synthetic annotator ensembles.

The three closed-form constructions realize the sharp endpoints of the
optimal-volume bounds on a 1-D grid of `cells` cells:

- acc_lower(v): all mass piled so the accuracy-optimal volume interval
  starts exactly at max(2v-1, 0). For v >= 1/2 the map is 1 on [0, 2v-1]
  and 1/2 after; for v < 1/2 it is the constant v.
- acc_upper(v): interval ends exactly at min(2v, 1). For v < 1/2 the map is
  1/2 on [0, 2v] and 0 after; for v >= 1/2 it is the constant v.
- dice_sharp(v'): 1 on [0, v'^2] and v'/(1+v') after, total mass v'. The
  Dice-optimal volumes fill [v'^2, 1] and the optimal value is 2v'/(1+v').

Interval boundaries must land on cell boundaries to be exact on a grid. By
default the requested parameter is snapped to the nearest admissible value
and the snapped parameter is reported in the field's meta; pass snap=False
to get an error instead.

fig3/fig4 are the two constructions at total mass 0.4 used as standing
fixtures throughout the test suite (10 and 25 cells).

Ensembles are axis-aligned boxes with independently jittered corners, one
PCG64 stream per mask spawned from the seed, so output is reproducible
bit-for-bit across platforms.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import FieldValueError, MisalignedBreakpointError
from .field import MarginalField, Segmentation

__all__ = [
    "gen_acc_lower",
    "gen_acc_upper",
    "gen_dice_sharp",
    "gen_fig3",
    "gen_fig4",
    "gen_ensemble",
]

_MAX_BOX_RETRIES = 100


def _split_point(frac: float, cells: int, snap: bool, what: str) -> int:
    exact = frac * cells
    k = round(exact)
    if not snap and abs(exact - k) > 1e-9:
        raise MisalignedBreakpointError(
            f"{what} breakpoint {frac!r} needs a multiple of 1/{cells}"
        )
    return min(max(k, 0), cells)


def _steps(cells: int, k: int, first: float, second: float) -> np.ndarray:
    values = np.full(cells, second)
    values[:k] = first
    return values


def gen_acc_lower(v: float, cells: int, *, snap: bool = True) -> MarginalField:
    """Marginal whose accuracy-optimal volumes start at max(2v-1, 0)."""
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"v must be in [0, 1], got {v!r}")
    if v >= 0.5:
        k = _split_point(2.0 * v - 1.0, cells, snap, "acc-lower")
        values = _steps(cells, k, 1.0, 0.5)
        snapped = (k + (cells - k) * 0.5) / cells
    else:
        values = np.full(cells, v)
        snapped = v
    meta = {"case": "acc-lower", "requested": v, "snapped": snapped, "cells": cells}
    return MarginalField((cells,), values, meta=meta)


def gen_acc_upper(v: float, cells: int, *, snap: bool = True) -> MarginalField:
    """Marginal whose accuracy-optimal volumes end at min(2v, 1)."""
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"v must be in [0, 1], got {v!r}")
    if v < 0.5:
        k = _split_point(2.0 * v, cells, snap, "acc-upper")
        values = _steps(cells, k, 0.5, 0.0)
        snapped = (k * 0.5) / cells
    else:
        values = np.full(cells, v)
        snapped = v
    meta = {"case": "acc-upper", "requested": v, "snapped": snapped, "cells": cells}
    return MarginalField((cells,), values, meta=meta)


def gen_dice_sharp(vp: float, cells: int, *, snap: bool = True) -> MarginalField:
    """Marginal whose Dice-optimal volumes are exactly [vp^2, 1]."""
    vp = float(vp)
    if not 0.0 < vp <= 1.0:
        raise ValueError(f"vp must be in (0, 1], got {vp!r}")
    # k = 0 would collapse to a zero-mass marginal; the nearest valid
    # construction keeps one saturated cell.
    k = max(_split_point(vp * vp, cells, snap, "dice-sharp"), 1)
    snapped = math.sqrt(k / cells)
    tail = snapped / (1.0 + snapped)
    values = _steps(cells, k, 1.0, tail)
    meta = {"case": "dice-sharp", "requested": vp, "snapped": snapped, "cells": cells}
    return MarginalField((cells,), values, meta=meta)


def gen_fig3(cells: int = 10) -> MarginalField:
    """Accuracy extreme case at total mass 0.4 (both bound endpoints sharp)."""
    out = gen_acc_upper(0.4, cells, snap=False)
    out.meta["case"] = "fig3"
    return out


def gen_fig4(cells: int = 25) -> MarginalField:
    """Dice extreme case at total mass 0.4 (both bound endpoints sharp)."""
    out = gen_dice_sharp(0.4, cells, snap=False)
    out.meta["case"] = "fig4"
    return out


def _box_mask(extent: int, n_axes: int, lows: np.ndarray, highs: np.ndarray) -> np.ndarray:
    axes = [
        (np.arange(extent) >= lows[a]) & (np.arange(extent) < highs[a])
        for a in range(n_axes)
    ]
    if n_axes == 1:
        return axes[0]
    return np.logical_and.outer(axes[0], axes[1]).reshape(-1)


def gen_ensemble(
    seed: int,
    cells_per_axis: int,
    n_axes: int = 1,
    annotators: int = 5,
    jitter: float = 0.0,
) -> list[Segmentation]:
    """Jittered copies of a base box, one independent RNG stream per mask.

    Corners move by at most floor(jitter * extent) cells per draw; a draw
    that empties the box is retried up to 100 times on the same stream.
    """
    if n_axes not in (1, 2):
        raise ValueError("n_axes must be 1 or 2")
    if annotators < 1:
        raise ValueError("need at least one annotator")
    if jitter < 0.0:
        raise ValueError("jitter must be non-negative")
    extent = int(cells_per_axis)
    if extent < 1:
        raise ValueError("cells_per_axis must be positive")
    reach = int(jitter * extent)
    base_lo = extent // 4
    base_hi = base_lo + max(1, extent // 2)
    shape = (extent,) * n_axes
    streams = np.random.SeedSequence(seed).spawn(annotators)
    masks: list[Segmentation] = []
    for ss in streams:
        rng = np.random.Generator(np.random.PCG64(ss))
        for _ in range(_MAX_BOX_RETRIES):
            offsets = rng.integers(-reach, reach + 1, size=(n_axes, 2))
            lows = np.clip(base_lo + offsets[:, 0], 0, extent)
            highs = np.clip(base_hi + offsets[:, 1], 0, extent)
            if np.all(highs > lows):
                break
        else:
            raise FieldValueError("box degenerated to empty after 100 jitter retries")
        masks.append(Segmentation(shape, _box_mask(extent, n_axes, lows, highs)))
    return masks
