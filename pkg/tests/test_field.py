from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from segopt import (
    FieldValueError,
    MarginalField,
    Segmentation,
    ShapeMismatchError,
    complement,
    ensemble_marginal,
    ensemble_volume_stats,
)

unit_floats = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def seg(bits) -> Segmentation:
    return Segmentation((len(bits),), bits)


class TestConstruction:
    def test_field_basic(self):
        f = MarginalField((2, 2), [0.1, 0.2, 0.3, 0.4])
        assert f.cell_volume == 0.25
        assert f.ncells == 4
        assert abs(f.l1_mass - 0.25) < 1e-15

    def test_rejects_out_of_range(self):
        with pytest.raises(FieldValueError):
            MarginalField((2,), [0.5, 1.0000001])
        with pytest.raises(FieldValueError):
            MarginalField((2,), [-0.1, 0.5])
        with pytest.raises(FieldValueError):
            MarginalField((2,), [float("nan"), 0.5])

    def test_rejects_bad_cell_count(self):
        with pytest.raises(FieldValueError):
            MarginalField((3,), [0.5, 0.5])

    def test_rejects_bad_shape(self):
        with pytest.raises(FieldValueError):
            MarginalField((0,), [])

    def test_never_clamps(self):
        f = MarginalField((1,), [1.0])
        assert f.values[0] == 1.0

    def test_mask_bits_strict(self):
        with pytest.raises(FieldValueError):
            Segmentation((2,), [0, 2])
        with pytest.raises(FieldValueError):
            Segmentation((2,), [0.5, 1.0])

    def test_mask_volume_exact(self):
        s = Segmentation((3,), [1, 0, 1])
        assert s.volume == 2 / 3

    def test_immutability(self):
        f = MarginalField((2,), [0.5, 0.5])
        with pytest.raises(ValueError):
            f.values[0] = 0.2


class TestEnsembleMarginal:
    def test_direct_average(self):
        out = ensemble_marginal([seg([1, 0]), seg([1, 1])])
        assert out.values.tolist() == [1.0, 0.5]

    def test_zero_case(self):
        out = ensemble_marginal([seg([0, 0])])
        assert out.values.tolist() == [0.0, 0.0]
        assert out.l1_mass == 0.0

    def test_idempotent_average(self):
        masks = [seg([1, 0, 1])] * 5
        out = ensemble_marginal(masks)
        assert out.values.tolist() == [1.0, 0.0, 1.0]
        assert abs(out.l1_mass - 2 / 3) < 1e-15

    def test_empty_list_rejected(self):
        with pytest.raises(FieldValueError):
            ensemble_marginal([])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            ensemble_marginal([seg([1, 0]), Segmentation((3,), [1, 0, 0])])

    def test_values_are_multiples_of_one_over_k(self):
        rng = np.random.default_rng(7)
        masks = [Segmentation((12,), rng.integers(0, 2, 12)) for _ in range(5)]
        out = ensemble_marginal(masks)
        counts = out.values * 5
        assert np.array_equal(counts, np.round(counts))

    def test_mass_equals_mean_volume_exactly(self):
        rng = np.random.default_rng(3)
        masks = [Segmentation((9,), rng.integers(0, 2, 9)) for _ in range(7)]
        stats = ensemble_volume_stats(masks)
        assert stats.mean_volume == ensemble_marginal(masks).l1_mass


class TestComplement:
    def test_field_values(self):
        out = complement(MarginalField((2,), [0.3, 1.0]))
        assert out.values.tolist() == [0.7, 0.0]

    def test_mask_involution(self):
        s = seg([1, 0, 1, 1])
        assert np.array_equal(complement(complement(s)).bits, s.bits)

    @given(st.lists(unit_floats, min_size=1, max_size=40))
    def test_l1_linearity(self, values):
        f = MarginalField((len(values),), values)
        assert abs(complement(f).l1_mass - (1.0 - f.l1_mass)) <= 1e-14

    @given(st.lists(unit_floats, min_size=1, max_size=40))
    def test_field_involution_bitwise(self, values):
        f = MarginalField((len(values),), values)
        # involution is exact when 1-x is exact, within 1 ulp of 1.0 otherwise
        back = complement(complement(f))
        assert np.allclose(back.values, f.values, rtol=0, atol=1.2e-16)


class TestVolumeStats:
    def test_equal_volumes(self):
        stats = ensemble_volume_stats([seg([1, 0]), seg([0, 1])])
        assert stats.mean_volume == 0.5
        assert stats.volume_variance == 0.0

    def test_hand_variance(self):
        stats = ensemble_volume_stats([seg([1, 1]), seg([0, 0])])
        assert stats.mean_volume == 0.5
        assert stats.volume_variance == 0.25

    def test_single_mask(self):
        stats = ensemble_volume_stats([seg([1, 0, 0])])
        assert stats.volume_variance == 0.0

    def test_compensated_mass(self):
        rng = np.random.default_rng(11)
        values = rng.random(4097)
        f = MarginalField((4097,), values)
        assert abs(f.l1_mass - math.fsum(values.tolist()) / 4097) <= 1e-14
