"""Volume-parameterized reduced objectives.

Fixing a target volume v collapses the search over all masks to a 1-D
problem: the best achievable overlap mass at volume v is

    overlap*(v) = v - integral_quantile(v),

attained by filling the highest-probability cells first. From it:

    accuracy_curve(v) = v + 1 - l1 - 2 * integral_quantile(v)
    dice_curve(v)     = 2 * overlap*(v) / (l1 + v)

accuracy_curve is concave piecewise-linear; dice_curve's slope sign is
carried by

    delta(v) = l1 + integral_quantile(v) - (l1 + v) * quantile(v),

a left-continuous, non-increasing step function that is constant on each
quantile segment (cum[k-1], cum[k]]. delta is evaluated here in a v-free
per-segment form so it really is constant on a segment, bit for bit.

All three are exact evaluations from stored prefix integrals; there is no
numeric quadrature anywhere.
"""

from __future__ import annotations

import numpy as np

from .dist import ValueDistribution, integral_quantile
from .errors import DegenerateDiceError

__all__ = ["constrained_overlap", "accuracy_curve", "dice_curve", "delta"]


def constrained_overlap(d: ValueDistribution, v: float) -> float:
    """Maximum overlap mass over all masks of volume v."""
    return float(v) - integral_quantile(d, v)


def accuracy_curve(d: ValueDistribution, v: float) -> float:
    """Best accuracy at volume exactly v."""
    iq = integral_quantile(d, v)
    return float(v) + 1.0 - d.l1_mass - 2.0 * iq


def dice_curve(d: ValueDistribution, v: float) -> float:
    """Best Dice at volume exactly v."""
    v = float(v)
    denom = d.l1_mass + v
    if denom == 0.0:
        raise DegenerateDiceError("dice curve at v=0 on a zero-mass distribution")
    return 2.0 * constrained_overlap(d, v) / denom


def delta(d: ValueDistribution, v: float) -> float:
    """Sign surrogate for the slope of dice_curve, for v in (0, 1]."""
    v = float(v)
    if not 0.0 < v <= 1.0:
        raise ValueError(f"v must be in (0, 1], got {v!r}")
    k = min(int(np.searchsorted(d.cum, v, side="left")), d.nlevels - 1)
    level = float(d.levels[k])
    below_integral = 0.0 if k == 0 else float(d.prefix_integral[k - 1])
    c_prev = 0.0 if k == 0 else float(d.cum[k - 1])
    return d.l1_mass * (1.0 - level) + below_integral - level * c_prev
