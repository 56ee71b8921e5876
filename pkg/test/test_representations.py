"""
表示测试：与暴力实现对照，以及各表示的边界情形
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_stream
from evrep.core.events import Event, EventStream
from evrep.core.exceptions import ArgumentError
from evrep.repr import (
    RepresentationFactory, ReprKind, binary_event_image, discount_grid, dist, dit, event_histogram,
    event_image, hats_surface, sorted_time_surface, time_surface, timestamp_image,
)
from oracle import brute_repr

TWO_CHANNEL_KINDS = [k for k in ReprKind if k is not ReprKind.EVENT_IMAGE]

ORACLE_PARAMS = {
    ReprKind.TIME_SURFACE: {'tau': 300.0},
    ReprKind.HATS: {'cell': 3, 'tau': 300.0},
    ReprKind.DIT: {'alpha': 2.5, 'rho': 2},
    ReprKind.DIST: {'alpha': 2.5, 'rho': 2},
    ReprKind.DISCOUNT: {'rho': 2},
}


def _events(*events, geometry=(4, 4), t_start=0, t_end=100) -> EventStream:
    return EventStream.from_events([Event(*e) for e in events], geometry=geometry,
                                   t_start=t_start, t_end=t_end)


class TestAgainstOracle:
    """随机小实例与暴力实现一致"""

    @pytest.mark.parametrize("kind", list(ReprKind), ids=lambda k: k.value)
    def test_matches_oracle(self, kind):
        rng = np.random.default_rng(kind.kind_id)
        params = ORACLE_PARAMS.get(kind, {})
        for _ in range(50):
            height, width = rng.integers(8, 13, size=2).tolist()
            stream = random_stream(rng, height=height, width=width, n=int(rng.integers(0, 150)))
            grid = RepresentationFactory.compute(kind, stream, params)
            expected = brute_repr(stream, kind, params)
            assert grid.data.shape == expected.data.shape
            if kind in (ReprKind.DIST, ReprKind.SORTED_TS, ReprKind.BINARY, ReprKind.HISTOGRAM):
                np.testing.assert_array_equal(grid.data, expected.data)
            else:
                np.testing.assert_allclose(grid.data, expected.data, rtol=0, atol=1e-10)

    def test_patch_sorted_time_surface(self):
        rng = np.random.default_rng(77)
        for _ in range(30):
            stream = random_stream(rng, height=10, width=9, n=120)
            np.testing.assert_array_equal(
                sorted_time_surface(stream, patch=4).data,
                brute_repr(stream, ReprKind.SORTED_TS, {'patch': 4}).data,
            )

    def test_dist_with_heavy_ties(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            stream = random_stream(rng, height=8, width=8, n=200, t_max=20)
            np.testing.assert_array_equal(
                dist(stream, alpha=3.0, rho=2).data,
                brute_repr(stream, ReprKind.DIST, {'alpha': 3.0, 'rho': 2}).data,
            )


class TestCommonProperties:
    """所有表示共有的性质"""

    @pytest.mark.parametrize("kind", list(ReprKind), ids=lambda k: k.value)
    def test_empty_stream_is_zero(self, kind):
        grid = RepresentationFactory.compute(kind, EventStream.empty((5, 6), 0, 1000))
        assert grid.geometry == (5, 6)
        assert grid.channels == (4 if kind is ReprKind.EVENT_IMAGE else 2)
        assert not grid.data.any()

    @pytest.mark.parametrize("kind", TWO_CHANNEL_KINDS, ids=lambda k: k.value)
    def test_polarity_channels_are_independent(self, kind):
        rng = np.random.default_rng(21)
        stream = random_stream(rng, n=150)
        positive = stream.take(np.flatnonzero(stream.p == 1))
        full = RepresentationFactory.compute(kind, stream).channel(1)
        alone = RepresentationFactory.compute(kind, positive).channel(1)
        if kind in (ReprKind.DIST, ReprKind.SORTED_TS, ReprKind.DIT):
            # 联合归一化，只比较顺序
            occupied = alone > 0
            np.testing.assert_array_equal(np.argsort(full[occupied], kind='stable'),
                                          np.argsort(alone[occupied], kind='stable'))
        else:
            np.testing.assert_array_equal(full, alone)

    @pytest.mark.parametrize("kind", list(ReprKind), ids=lambda k: k.value)
    def test_value_bounds(self, kind):
        rng = np.random.default_rng(1000 + kind.kind_id)
        # 十种表示共 10^4 条随机流
        for _ in range(1000):
            stream = random_stream(rng, height=6, width=6, n=int(rng.integers(0, 80)))
            data = RepresentationFactory.compute(kind, stream).data
            assert np.all(np.isfinite(data))
            assert data.min(initial=0.0) >= 0.0
            if kind not in (ReprKind.HISTOGRAM, ReprKind.DISCOUNT, ReprKind.EVENT_IMAGE):
                assert data.max(initial=0.0) <= 1.0

    def test_records_window_and_params(self, small_stream):
        grid = dist(small_stream, alpha=1.5, rho=4)
        assert grid.params == {'alpha': 1.5, 'rho': 4}
        assert grid.window == (small_stream.t_start, small_stream.t_end)


class TestCounting:
    """二值图、直方图与事件图"""

    def test_binary_single_event(self):
        grid = binary_event_image(_events((1, 1, 50, 1)))
        assert grid.channel(1)[1, 1] == 1.0
        assert grid.channel(1).sum() == 1.0
        assert not grid.channel(-1).any()

    def test_binary_is_histogram_indicator(self, small_stream):
        np.testing.assert_array_equal(binary_event_image(small_stream).data,
                                      (event_histogram(small_stream).data > 0).astype(float))

    def test_histogram_counts(self):
        grid = event_histogram(_events((2, 3, 1, 1), (2, 3, 2, 1), (2, 3, 3, 1)))
        assert grid.channel(1)[3, 2] == 3.0

    def test_histogram_channel_sums(self, small_stream):
        grid = event_histogram(small_stream)
        assert grid.channel(1).sum() == (small_stream.p == 1).sum()
        assert grid.channel(-1).sum() == (small_stream.p == -1).sum()

    def test_event_image_layout(self, small_stream):
        grid = event_image(small_stream)
        assert grid.channels == 4
        np.testing.assert_array_equal(grid.data[:, :, :2], event_histogram(small_stream).data)
        np.testing.assert_array_equal(grid.data[:, :, 2:], timestamp_image(small_stream).data)


class TestTimestamp:
    """时间戳图与时间面"""

    def test_event_at_window_end(self):
        assert timestamp_image(_events((0, 0, 100, 1))).channel(1)[0, 0] == 1.0

    def test_event_at_window_start(self):
        assert timestamp_image(_events((0, 0, 0, 1))).channel(1)[0, 0] == 0.0

    def test_degenerate_window(self):
        grid = timestamp_image(_events((0, 0, 7, -1), t_start=7, t_end=7))
        assert grid.channel(-1)[0, 0] == 1.0

    def test_time_surface_values(self):
        grid = time_surface(_events((0, 0, 50, 1), (1, 0, 100, 1)), tau=50.0)
        assert grid.channel(1)[0, 1] == 1.0
        assert grid.channel(1)[0, 0] == pytest.approx(math.exp(-1))

    @pytest.mark.parametrize("tau", [0.0, -1.0])
    def test_time_surface_bad_tau(self, tau):
        with pytest.raises(ArgumentError):
            time_surface(_events((0, 0, 50, 1)), tau=tau)

    def test_hats_single_event_fills_tile(self):
        stream = _events((1, 1, 100, 1), geometry=(8, 8))
        grid = hats_surface(stream, cell=4, tau=50.0)
        np.testing.assert_array_equal(grid.channel(1)[:4, :4], np.ones((4, 4)))
        assert not grid.channel(1)[4:, :].any()
        assert not grid.channel(1)[:, 4:].any()

    def test_hats_partial_edge_tile(self):
        stream = _events((4, 4, 100, 1), geometry=(5, 5))
        grid = hats_surface(stream, cell=3)
        np.testing.assert_array_equal(grid.channel(1)[3:, 3:], np.ones((2, 2)))


class TestDiscount:
    """折扣、DiT 与 DiST"""

    def test_single_event_no_discount(self):
        assert not discount_grid(_events((1, 1, 40, 1)), rho=2).data.any()

    def test_two_events_same_pixel(self):
        grid = discount_grid(_events((0, 0, 0, 1), (0, 0, 100, 1)), rho=2)
        assert grid.channel(1)[0, 0] == 50.0

    @pytest.mark.parametrize("rho", [0, 1])
    def test_rho_must_exceed_one(self, rho):
        stream = _events((0, 0, 1, 1))
        with pytest.raises(ArgumentError):
            dist(stream, rho=rho)
        with pytest.raises(ArgumentError):
            dit(stream, rho=rho)
        with pytest.raises(ArgumentError):
            discount_grid(stream, rho=rho)

    def test_negative_alpha(self):
        with pytest.raises(ArgumentError):
            dit(_events((0, 0, 1, 1)), alpha=-1.0)

    def test_dit_alpha_zero_matches_timestamp_order(self, small_stream):
        values = dit(small_stream, alpha=0.0).data
        stamps = timestamp_image(small_stream).data
        occupied = event_histogram(small_stream).data > 0
        t_new = stamps[occupied]
        expected = (t_new - t_new.min()) / (t_new.max() - t_new.min())
        np.testing.assert_allclose(values[occupied], expected, atol=1e-12)

    def test_dit_isolated_versus_dense(self):
        # A 在 (0,0) t=100 孤立；B 在 (9,0) 于 t=0..100 密集发放
        dense = [(9, 0, t, 1) for t in range(0, 101, 10)]
        events = sorted(dense + [(0, 0, 100, 1)], key=lambda e: e[2])
        stream = _events(*events, geometry=(1, 10), t_start=0, t_end=100)
        d = discount_grid(stream, rho=2).channel(1)
        assert d[0, 0] == 0.0
        assert d[0, 9] == pytest.approx(100 / 11)

        # alpha = 1 时 S_D(A) < S_D(B) 当且仅当 D(A) > t_new(A) - t_new(B) + D(B)；此处不成立，A 排在 B 之后
        assert not d[0, 0] > 100 - 100 + d[0, 9]
        grid = dit(stream, alpha=1.0, rho=2).channel(1)
        assert grid[0, 0] == 1.0
        assert grid[0, 9] == 0.0

    def test_dist_single_pixel(self):
        grid = dist(_events((3, 2, 10, -1)))
        assert grid.channel(-1)[2, 3] == 1.0
        assert grid.data.sum() == 1.0

    def test_dist_ranks_are_multiples_of_inverse_count(self, small_stream):
        data = dist(small_stream).data
        occupied = data[data > 0]
        m = len(occupied)
        np.testing.assert_array_equal(np.sort(occupied), np.arange(1, m + 1) / m)

    def test_dist_ties_break_by_polarity_then_row_then_column(self):
        stream = _events((1, 0, 10, 1), (0, 1, 10, 1), (3, 3, 10, -1), geometry=(4, 4), t_start=0, t_end=10)
        grid = dist(stream, alpha=0.0)
        assert grid.channel(-1)[3, 3] == pytest.approx(1 / 3)
        assert grid.channel(1)[0, 1] == pytest.approx(2 / 3)
        assert grid.channel(1)[1, 0] == 1.0

    def test_sorted_time_surface_is_dist_alpha_zero(self):
        rng = np.random.default_rng(9)
        for rho in (2, 5):
            stream = random_stream(rng, n=150, t_max=50)
            np.testing.assert_array_equal(sorted_time_surface(stream).data,
                                          dist(stream, alpha=0.0, rho=rho).data)

    def test_sorted_time_surface_monotone_relabel(self, small_stream):
        relabeled = small_stream.replace(t=small_stream.t ** 2 + 3 * small_stream.t,
                                         t_end=small_stream.t_end ** 2 + 3 * small_stream.t_end)
        np.testing.assert_array_equal(sorted_time_surface(relabeled).data,
                                      sorted_time_surface(small_stream).data)

    def test_exact_discount_fraction(self):
        stream = _events((0, 0, 0, 1), (1, 0, 10, 1), (2, 0, 20, 1), geometry=(1, 3), t_start=0, t_end=20)
        assert discount_grid(stream, rho=2).channel(1)[0, 1] == float(Fraction(20, 3))


class TestFactory:
    """表示工厂"""

    def test_supported_kinds(self):
        assert set(RepresentationFactory.get_supported_kinds()) == {k.value for k in ReprKind}

    def test_compute_by_name_ignores_unused_params(self, small_stream):
        grid = RepresentationFactory.compute("binary", small_stream, {'alpha': 9.0, 'rho': 1})
        assert grid.kind is ReprKind.BINARY
        assert grid.params == {}

    def test_unknown_kind(self, small_stream):
        with pytest.raises(ArgumentError):
            RepresentationFactory.compute("voxel_grid", small_stream)

    def test_param_names(self):
        assert RepresentationFactory.get_param_names(ReprKind.DIST) == ('alpha', 'rho')
