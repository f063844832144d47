from __future__ import annotations

import numpy as np
import pytest

from segopt import MarginalField, build_distribution, gen_fig3, gen_fig4


@pytest.fixture
def two_cell() -> MarginalField:
    return MarginalField((2,), [0.6, 0.3])


@pytest.fixture
def fig3() -> MarginalField:
    return gen_fig3()


@pytest.fixture
def fig4() -> MarginalField:
    return gen_fig4()


@pytest.fixture
def fig3_dist():
    return build_distribution(gen_fig3())


@pytest.fixture
def fig4_dist():
    return build_distribution(gen_fig4())


def random_field(rng: np.random.Generator, ncells: int) -> MarginalField:
    """Random field mixing smooth values with annotator-style ties.

    Half the draws quantize to multiples of 1/K for a small K so repeated
    levels (CDF plateaus, quantile jumps) are exercised, not just the
    generic all-distinct case.
    """
    if rng.random() < 0.5:
        values = rng.random(ncells)
    else:
        k = int(rng.integers(2, 7))
        values = rng.integers(0, k + 1, size=ncells) / k
    return MarginalField((ncells,), values)


def random_weighted_pairs(rng: np.random.Generator, max_levels: int = 64):
    """(value, weight) list with positive weights summing to 1."""
    k = int(rng.integers(1, max_levels + 1))
    values = rng.random(k)
    weights = rng.random(k) + 1e-3
    weights /= weights.sum()
    return list(zip(values.tolist(), weights.tolist()))
