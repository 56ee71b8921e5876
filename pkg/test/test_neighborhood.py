"""
邻域统计测试
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_stream, streams
from evrep.core.events import Event, EventStream, scale_time
from evrep.core.exceptions import ArgumentError
from evrep.repr import discount_grid
from evrep.repr.neighborhood import EMPTY, box_sum, compute_stats, pixel_stats
from oracle import brute_stats


def _single(t: int = 10) -> EventStream:
    return EventStream.from_events([Event(2, 2, t, 1)], geometry=(6, 6), t_start=0, t_end=t)


def test_single_event_rho_zero():
    stats = compute_stats(_single(), 0)
    assert stats.count.sum() == 1
    assert stats.count[2, 2, 1] == 1
    assert stats.t_new[2, 2, 1] == stats.t_old[2, 2, 1] == 10
    assert stats.t_new[2, 2, 0] == EMPTY


def test_single_event_rho_one():
    stats = compute_stats(_single(), 1)
    expected = np.zeros((6, 6), dtype=np.int64)
    expected[1:4, 1:4] = 1
    np.testing.assert_array_equal(stats.count[:, :, 1], expected)
    assert not stats.count[:, :, 0].any()
    assert np.all(stats.t_new[:, :, 1][expected == 1] == 10)
    assert np.all(stats.t_new[:, :, 1][expected == 0] == EMPTY)


def test_same_pixel_two_events():
    stream = EventStream.from_events([Event(0, 0, 5, 1), Event(0, 0, 9, 1)], geometry=(2, 2))
    stats = pixel_stats(stream)
    assert stats.count[0, 0, 1] == 2
    assert stats.t_old[0, 0, 1] == 5
    assert stats.t_new[0, 0, 1] == 9


def test_empty_stream_is_all_empty():
    stats = compute_stats(EventStream.empty((4, 5)), 2)
    assert stats.count.shape == (4, 5, 2)
    assert not stats.count.any()
    assert np.all(stats.t_new == EMPTY)
    assert np.all(stats.t_old == EMPTY)


def test_timestamp_zero_is_not_empty():
    stream = EventStream.from_events([Event(0, 0, 0, -1)], geometry=(1, 1), t_start=0, t_end=0)
    stats = pixel_stats(stream)
    assert stats.t_new[0, 0, 0] == 0
    assert stats.occupied[0, 0, 0]


@pytest.mark.parametrize("rho", [0, 1, 2, 3])
def test_matches_brute_force(rho):
    rng = np.random.default_rng(100 + rho)
    for _ in range(50):
        stream = random_stream(rng, height=8, width=8, n=int(rng.integers(0, 200)))
        assert compute_stats(stream, rho) == brute_stats(stream, rho)


def test_matches_brute_force_non_square():
    rng = np.random.default_rng(7)
    for _ in range(20):
        stream = random_stream(rng, height=5, width=11, n=80)
        assert compute_stats(stream, 2) == brute_stats(stream, 2)


def test_large_radius_covers_sensor():
    rng = np.random.default_rng(3)
    stream = random_stream(rng, height=4, width=4, n=30)
    stats = compute_stats(stream, 10)
    positive = int((stream.p == 1).sum())
    assert np.all(stats.count[:, :, 1] == positive)


def test_box_sum_clips_at_border():
    values = np.ones((1, 3, 3), dtype=np.int64)
    np.testing.assert_array_equal(box_sum(values, 1)[0], [[4, 6, 4], [6, 9, 6], [4, 6, 4]])


def test_negative_radius():
    with pytest.raises(ArgumentError):
        compute_stats(_single(), -1)


def test_count_grows_with_radius():
    rng = np.random.default_rng(21)
    stream = random_stream(rng, height=10, width=10, n=120)
    previous = compute_stats(stream, 0).count
    for rho in range(1, 5):
        current = compute_stats(stream, rho).count
        assert np.all(current >= previous)
        previous = current


@pytest.mark.parametrize("rho", [1, 2, 3])
def test_single_event_oldest_is_its_timestamp(rho):
    stream = EventStream.from_events([Event(1, 1, 40, 1)], geometry=(4, 4), t_start=0, t_end=40)
    stats = compute_stats(stream, rho)
    covered = stats.count[:, :, 1] > 0
    assert covered[1, 1]
    assert np.all(stats.t_old[:, :, 1][covered] == 40)
    assert np.all(stats.t_new[:, :, 1][covered] == 40)


def test_discount_of_two_events_at_one_pixel():
    stream = EventStream.from_events([Event(2, 2, 0, 1), Event(2, 2, 100, 1)], geometry=(5, 5),
                                     t_start=0, t_end=100)
    assert discount_grid(stream, 2).data[2, 2, 1] == 50.0


@pytest.mark.parametrize("t", [2 ** 53 + 1, 2 ** 62 + 3, np.iinfo(np.int64).max - 1])
def test_timestamps_beyond_double_precision(t):
    stream = EventStream.from_events([Event(0, 0, t - 7, 1), Event(1, 1, t, 1)], geometry=(3, 3),
                                     t_start=t - 7, t_end=t)
    stats = compute_stats(stream, 1)
    assert int(stats.t_new[1, 1, 1]) == t
    assert int(stats.t_old[1, 1, 1]) == t - 7
    assert int(stats.t_new[2, 2, 1]) == int(stats.t_old[2, 2, 1]) == t


@pytest.mark.parametrize("corner", [(0, 0), (4, 5)])
def test_corner_aggregates_four_neighbors(corner):
    height, width = 5, 6
    cy, cx = corner
    dy = 1 if cy == 0 else -1
    dx = 1 if cx == 0 else -1
    neighbors = [(cy, cx), (cy, cx + dx), (cy + dy, cx), (cy + dy, cx + dx)]
    events = [Event(x, y, 10 * (i + 1), 1) for i, (y, x) in enumerate(neighbors)]
    # 窗口外的事件不得计入
    events.append(Event(cx + 2 * dx, cy + 2 * dy, 100, 1))
    events.append(Event(cx + 2 * dx, cy, 200, 1))
    stream = EventStream.from_events(events, geometry=(height, width), t_start=0, t_end=200)

    stats = compute_stats(stream, 1)
    assert stats.count[cy, cx, 1] == 4
    assert stats.t_old[cy, cx, 1] == 10
    assert stats.t_new[cy, cx, 1] == 40
    assert stats.count[cy, cx, 0] == 0


def _shifted(stream: EventStream, delta: int) -> EventStream:
    return stream.replace(t=stream.t + delta, t_start=stream.t_start + delta, t_end=stream.t_end + delta)


def _assert_mapped(before, after, mapping):
    assert np.array_equal(before.count, after.count)
    occupied = before.count > 0
    assert np.array_equal(after.t_new[occupied], mapping(before.t_new[occupied]))
    assert np.array_equal(after.t_old[occupied], mapping(before.t_old[occupied]))
    assert np.all(after.t_new[~occupied] == EMPTY)
    assert np.all(after.t_old[~occupied] == EMPTY)


@given(streams(), st.integers(0, 2 ** 62), st.integers(0, 3))
@settings(max_examples=100, deadline=None)
def test_time_shift_equivariance(stream, delta, rho):
    _assert_mapped(compute_stats(stream, rho), compute_stats(_shifted(stream, delta), rho),
                   lambda t: t + delta)


@given(streams(), st.integers(1, 2 ** 40), st.integers(0, 3))
@settings(max_examples=100, deadline=None)
def test_time_scale_equivariance(stream, k, rho):
    _assert_mapped(compute_stats(stream, rho), compute_stats(scale_time(stream, k), rho),
                   lambda t: t * k)


@pytest.mark.parametrize("rho", [0, 1, 2, 3])
def test_negative_events_never_change_positive_stats(rho):
    rng = np.random.default_rng(300 + rho)
    for _ in range(30):
        stream = random_stream(rng, height=7, width=9, n=150)
        negative = np.flatnonzero(stream.p == -1)
        order = rng.permutation(negative)
        x = stream.x.copy()
        y = stream.y.copy()
        x[negative] = stream.x[order]
        y[negative] = stream.y[order]
        permuted = stream.replace(x=x, y=y)

        before = compute_stats(stream, rho)
        after = compute_stats(permuted, rho)
        for grid in ('count', 't_new', 't_old'):
            np.testing.assert_array_equal(getattr(before, grid)[:, :, 1], getattr(after, grid)[:, :, 1])
