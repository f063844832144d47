from __future__ import annotations

import numpy as np
import pytest

from segopt import (
    DegenerateDiceError,
    MarginalField,
    accuracy,
    accuracy_curve,
    build_distribution,
    constrained_overlap,
    delta,
    dice,
    dice_curve,
    threshold_bracket,
)

from conftest import random_field


@pytest.fixture
def two_cell_dist(two_cell):
    return build_distribution(two_cell)


class TestConstrainedOverlap:
    def test_hand_value(self, two_cell_dist):
        assert constrained_overlap(two_cell_dist, 0.5) == pytest.approx(0.3, abs=1e-15)

    def test_at_zero(self, two_cell_dist):
        assert constrained_overlap(two_cell_dist, 0.0) == 0.0

    def test_full_volume_gives_total_mass(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            d = build_distribution(random_field(rng, int(rng.integers(1, 100))))
            assert constrained_overlap(d, 1.0) == pytest.approx(d.l1_mass, abs=1e-14)


class TestAccuracyCurve:
    def test_fig3_plateau_and_endpoints(self, fig3_dist):
        assert accuracy_curve(fig3_dist, 0.0) == pytest.approx(0.6, abs=1e-12)
        assert accuracy_curve(fig3_dist, 0.8) == pytest.approx(0.6, abs=1e-12)
        assert accuracy_curve(fig3_dist, 1.0) == pytest.approx(0.4, abs=1e-12)

    def test_binary_perfect(self):
        d = build_distribution(MarginalField((5,), [1, 1, 0, 0, 0]))
        assert accuracy_curve(d, 0.4) == pytest.approx(1.0, abs=1e-15)

    def test_two_cell(self, two_cell_dist):
        assert accuracy_curve(two_cell_dist, 0.5) == pytest.approx(0.65, abs=1e-15)

    def test_identity_with_overlap_form(self):
        rng = np.random.default_rng(37)
        for _ in range(30):
            d = build_distribution(random_field(rng, int(rng.integers(1, 80))))
            for v in np.linspace(0, 1, 17):
                direct = accuracy_curve(d, v)
                via = 1.0 - d.l1_mass - v + 2.0 * constrained_overlap(d, v)
                assert abs(direct - via) <= 1e-12

    def test_concave_piecewise_linear(self):
        rng = np.random.default_rng(41)
        for _ in range(30):
            d = build_distribution(random_field(rng, int(rng.integers(2, 80))))
            pts = np.concatenate([[0.0], d.cum])
            vals = [accuracy_curve(d, v) for v in pts]
            slopes = np.diff(vals) / np.diff(pts)
            assert all(a >= b - 1e-9 for a, b in zip(slopes, slopes[1:]))


class TestDiceCurve:
    def test_fig4_plateau(self, fig4_dist):
        for v in [0.16, 0.3, 0.64, 1.0]:
            assert dice_curve(fig4_dist, v) == pytest.approx(4 / 7, abs=1e-12)

    def test_two_cell(self, two_cell_dist):
        assert dice_curve(two_cell_dist, 0.5) == pytest.approx(12 / 19, abs=1e-15)
        assert dice_curve(two_cell_dist, 1.0) == pytest.approx(18 / 29, abs=1e-15)

    def test_zero_volume(self, two_cell_dist):
        assert dice_curve(two_cell_dist, 0.0) == 0.0

    def test_degenerate(self):
        d = build_distribution(MarginalField((2,), [0.0, 0.0]))
        with pytest.raises(DegenerateDiceError):
            dice_curve(d, 0.0)


class TestDelta:
    def test_sharp_construction_step(self, fig4_dist):
        # mass * indicator of [0, mass^2]: 0.4 up to 0.16, then 0
        for v in [0.01, 0.1, 0.16]:
            assert delta(fig4_dist, v) == pytest.approx(0.4, abs=1e-12)
        for v in [0.1600001, 0.5, 1.0]:
            assert delta(fig4_dist, v) == pytest.approx(0.0, abs=1e-12)

    def test_two_cell_signs(self, two_cell_dist):
        assert delta(two_cell_dist, 0.5) == pytest.approx(0.27, abs=1e-15)
        assert delta(two_cell_dist, 1.0) == pytest.approx(-0.015, abs=1e-15)

    def test_binary_marginal(self):
        d = build_distribution(MarginalField((10,), [1] * 3 + [0] * 7))
        assert delta(d, 0.3) == pytest.approx(0.3, abs=1e-15)
        assert delta(d, 0.4) < 0.0
        assert delta(d, 1.0) < 0.0

    def test_domain(self, two_cell_dist):
        with pytest.raises(ValueError):
            delta(two_cell_dist, 0.0)
        with pytest.raises(ValueError):
            delta(two_cell_dist, 1.0001)

    def test_constant_on_segments(self):
        rng = np.random.default_rng(43)
        for _ in range(25):
            d = build_distribution(random_field(rng, int(rng.integers(2, 60))))
            prev_c = 0.0
            for k, c in enumerate(d.cum.tolist()):
                inner = prev_c + (c - prev_c) * 0.37
                if prev_c < inner <= c:
                    assert delta(d, inner) == delta(d, c)
                prev_c = c

    def test_non_increasing(self):
        rng = np.random.default_rng(47)
        for _ in range(40):
            d = build_distribution(random_field(rng, int(rng.integers(1, 120))))
            vs = np.linspace(1e-9, 1.0, 57)
            vals = [delta(d, v) for v in vs]
            assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_sign_matches_dice_forward_difference(self):
        rng = np.random.default_rng(53)
        for _ in range(40):
            d = build_distribution(random_field(rng, int(rng.integers(2, 120))))
            if d.l1_mass == 0.0:
                continue
            pts = np.concatenate([[0.0], d.cum])
            for a, b in zip(pts[:-1], pts[1:]):
                if b <= a:
                    continue
                diff = dice_curve(d, b) - dice_curve(d, a)
                dl = delta(d, b)
                if dl > 1e-12:
                    assert diff > -1e-12
                elif dl < -1e-12:
                    assert diff < 1e-12
                else:
                    assert abs(diff) <= 1e-10


class TestAgreementWithMetrics:
    def test_curves_match_threshold_masks_at_breakpoints(self):
        rng = np.random.default_rng(59)
        for _ in range(30):
            f = random_field(rng, int(rng.integers(2, 60)))
            d = build_distribution(f)
            for level, c in zip(d.levels.tolist(), d.cum.tolist()):
                if level == 0.0:
                    continue
                s1 = threshold_bracket(f, level).s1
                assert s1.volume == c
                assert abs(accuracy(s1, f) - accuracy_curve(d, c)) <= 1e-12
                if d.l1_mass + c > 0.0:
                    assert abs(dice(s1, f) - dice_curve(d, c)) <= 1e-12
