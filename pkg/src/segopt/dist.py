"""Step CDF and quantile of the complement map under the volume measure.

For a marginal field m, push the volume measure through 1 - m: the CDF value
at t is the volume of cells whose non-success probability 1 - m is at most t.
On a grid this is a right-continuous step function with at most one jump per
distinct cell value; its generalized inverse (the quantile) is the
left-continuous staircase used by every optimizer in this package.

Exactness conventions:

- levels are grouped by exact float equality (ensemble averages and the
  synthetic generators emit exact constants, so no epsilon clustering);
- cumulative volumes come from integer prefix counts divided once, so the
  last one is exactly 1 and mask volumes computed elsewhere from the same
  counts agree bit-for-bit;
- prefix integrals of the quantile are accumulated in extended precision
  (see _accum), and the total mass satisfies l1_mass = 1 - prefix[-1]
  by construction.

Queries use exact comparison with stored levels. Optimizer threshold queries
that need a tie tolerance apply it in the optimize module, not here.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from ._accum import csum, prefix_weighted
from .errors import FieldValueError
from .field import MarginalField

__all__ = [
    "ValueDistribution",
    "VolumeInterval",
    "build_distribution",
    "build_weighted",
    "cdf",
    "cdf_left",
    "quantile",
    "integral_quantile",
]

_WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class VolumeInterval:
    """Closed subinterval of [0, 1]."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise FieldValueError(f"invalid volume interval [{self.lo}, {self.hi}]")

    def contains(self, v: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= v <= self.hi + slack


@dataclass(frozen=True)
class ValueDistribution:
    """Sorted distinct complement levels with their volumes and prefix data.

    levels[k] are strictly increasing values of 1 - m in [0, 1]; masses[k]
    their volumes; cum[k] the cumulative volume with cum[-1] == 1; and
    prefix_integral[k] the integral of the quantile over [0, cum[k]].
    l1_mass == 1 - prefix_integral[-1].
    """

    levels: np.ndarray
    masses: np.ndarray
    cum: np.ndarray
    prefix_integral: np.ndarray = dc_field(init=False)
    l1_mass: float = dc_field(init=False)

    def __post_init__(self) -> None:
        # ownership convention as in MarginalField: float64 inputs are
        # frozen in place, anything else is copied
        levels = np.ascontiguousarray(self.levels, dtype=np.float64)
        masses = np.ascontiguousarray(self.masses, dtype=np.float64)
        cum = np.ascontiguousarray(self.cum, dtype=np.float64)
        if not (levels.size == masses.size == cum.size > 0):
            raise FieldValueError("levels, masses, cum must be equal-length, non-empty")
        if levels[0] < 0.0 or levels[-1] > 1.0 or np.any(np.diff(levels) <= 0.0):
            raise FieldValueError("levels must be strictly increasing within [0, 1]")
        if np.any(masses <= 0.0):
            raise FieldValueError("masses must be strictly positive")
        if abs(cum[-1] - 1.0) > 1e-14:
            raise FieldValueError(f"cumulative volume ends at {cum[-1]!r}, not 1")
        integral = prefix_weighted(levels, masses)
        total = min(max(1.0 - integral[-1], 0.0), 1.0)
        for arr in (levels, masses, cum, integral):
            arr.setflags(write=False)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "cum", cum)
        object.__setattr__(self, "prefix_integral", integral)
        object.__setattr__(self, "l1_mass", total)

    @property
    def nlevels(self) -> int:
        return self.levels.size


def build_distribution(field: MarginalField) -> ValueDistribution:
    """Group the distinct values of 1 - m by exact equality.

    Each mass is an exact cell count divided by the cell count of the grid,
    so threshold masks built from the same field match the cumulative
    volumes here exactly.
    """
    comp = 1.0 - field.values
    levels, counts = np.unique(comp, return_counts=True)
    n = field.ncells
    return ValueDistribution(levels, counts / n, np.cumsum(counts) / n)


def build_weighted(pairs: Iterable[Sequence[float]]) -> ValueDistribution:
    """Distribution from (value, weight) pairs; weights renormalized to 1.

    Duplicate values merge. Weights must be positive and sum to 1 within
    1e-9 before renormalization.
    """
    items = [(float(p), float(w)) for p, w in pairs]
    if not items:
        raise FieldValueError("need at least one (value, weight) pair")
    values = np.array([p for p, _ in items])
    weights = np.array([w for _, w in items])
    if np.any(weights <= 0.0):
        raise FieldValueError("weights must be strictly positive")
    if np.any(values < 0.0) or np.any(values > 1.0):
        raise FieldValueError("values must lie in [0, 1]")
    total = csum(weights)
    if abs(total - 1.0) > _WEIGHT_SUM_TOL:
        raise FieldValueError(f"weights sum to {total!r}, expected 1 within 1e-9")

    comp = 1.0 - values
    order = np.argsort(comp, kind="stable")
    comp = comp[order]
    weights = weights[order]
    boundaries = np.flatnonzero(np.r_[True, comp[1:] != comp[:-1]])
    levels = comp[boundaries]
    grouped = np.add.reduceat(weights, boundaries)

    masses = grouped / total
    cum = np.cumsum(grouped.astype(np.longdouble))
    cum = (cum / cum[-1]).astype(np.float64)
    cum[-1] = 1.0
    return ValueDistribution(levels, masses, cum)


def _check_unit(x: float, name: str) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {x!r}")
    return x


def cdf(d: ValueDistribution, t: float) -> float:
    """Volume of cells with complement value <= t (right-continuous)."""
    t = _check_unit(t, "t")
    idx = int(np.searchsorted(d.levels, t, side="right"))
    return 0.0 if idx == 0 else float(d.cum[idx - 1])


def cdf_left(d: ValueDistribution, t: float) -> float:
    """Left limit of the CDF: volume of cells with complement value < t."""
    t = _check_unit(t, "t")
    idx = int(np.searchsorted(d.levels, t, side="left"))
    return 0.0 if idx == 0 else float(d.cum[idx - 1])


def quantile(d: ValueDistribution, v: float) -> float:
    """Smallest level whose cumulative volume reaches v.

    Left-continuous and non-decreasing. At v = 0 returns the smallest
    attained level (never consumed by any optimum formula; keeps the range
    inside the level set).
    """
    v = _check_unit(v, "v")
    idx = min(int(np.searchsorted(d.cum, v, side="left")), d.nlevels - 1)
    return float(d.levels[idx])


def integral_quantile(d: ValueDistribution, v: float) -> float:
    """Integral of the quantile over [0, v], evaluated exactly.

    Piecewise linear in v with the stored prefix integrals as anchors;
    at v = 1 returns the full integral, which equals 1 - l1_mass.
    """
    v = _check_unit(v, "v")
    if v == 0.0:
        return 0.0
    if v == 1.0:
        return float(d.prefix_integral[-1])
    idx = min(int(np.searchsorted(d.cum, v, side="left")), d.nlevels - 1)
    below = 0.0 if idx == 0 else float(d.prefix_integral[idx - 1])
    c_prev = 0.0 if idx == 0 else float(d.cum[idx - 1])
    return below + float(d.levels[idx]) * (v - c_prev)
