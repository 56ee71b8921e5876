"""
事件流模型测试
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_stream, streams
from evrep.core.events import Event, EventStream, affine_time, scale_time, validate, window
from evrep.core.exceptions import ArgumentError


class TestValidate:
    """校验报告"""

    def test_empty_stream_is_valid(self):
        report = validate(EventStream.empty((4, 4)))
        assert report.is_valid
        assert len(report) == 0

    def test_x_out_of_bounds(self):
        stream = EventStream.from_events([Event(5, 0, 0, 1)], geometry=(4, 4))
        assert validate(stream).messages() == ["x out of bounds at index 0"]

    def test_non_monotone_timestamp(self):
        stream = EventStream.from_events([Event(0, 0, 7, 1), Event(1, 1, 3, 1)],
                                         geometry=(4, 4), t_start=0, t_end=10)
        assert validate(stream).messages() == ["non-monotone timestamp at index 1"]

    def test_reports_every_violation_with_index(self):
        stream = EventStream(geometry=(2, 2), x=[0, 3, 1], y=[0, 0, 5], t=[1, 2, 3], p=[1, 0, -1],
                             t_start=0, t_end=3)
        messages = validate(stream).messages()
        assert "x out of bounds at index 1" in messages
        assert "invalid polarity at index 1" in messages
        assert "y out of bounds at index 2" in messages

    def test_timestamp_outside_window(self):
        stream = EventStream.from_events([Event(0, 0, 20, 1)], geometry=(1, 1), t_start=0, t_end=10)
        assert validate(stream).messages() == ["timestamp outside window at index 0"]

    def test_reversed_window(self):
        report = validate(EventStream.empty((1, 1), t_start=5, t_end=1))
        assert not report.is_valid

    def test_validate_never_raises_on_bad_geometry(self):
        report = validate(EventStream.empty((0, 3)))
        assert not report.is_valid

    @given(streams())
    @settings(max_examples=50, deadline=None)
    def test_generated_streams_are_valid(self, stream):
        assert validate(stream).is_valid


class TestEventStream:
    """事件流构造与访问"""

    def test_columns_are_read_only(self, small_stream):
        with pytest.raises(ValueError):
            small_stream.t[0] = 5

    def test_iteration_yields_events(self):
        events = [Event(1, 2, 100, 1), Event(0, 0, 150, -1)]
        stream = EventStream.from_events(events, geometry=(4, 4))
        assert stream.events == events
        assert (stream.t_start, stream.t_end) == (100, 150)

    def test_column_length_mismatch(self):
        with pytest.raises(ArgumentError):
            EventStream(geometry=(2, 2), x=[0, 1], y=[0], t=[0], p=[1])

    def test_equality(self, rng):
        a = random_stream(np.random.default_rng(1))
        b = random_stream(np.random.default_rng(1))
        assert a == b
        assert a != a.replace(t_end=a.t_end + 1)


class TestWindow:
    """时间窗口截取"""

    def test_identity_window(self, small_stream):
        assert window(small_stream, small_stream.t_start, small_stream.t_end) == small_stream

    def test_empty_interval(self):
        stream = EventStream.from_events([Event(0, 0, 10, 1), Event(0, 0, 50, 1)], geometry=(1, 1))
        result = window(stream, 20, 30)
        assert len(result) == 0
        assert (result.t_start, result.t_end) == (20, 30)

    def test_matches_filter(self, rng):
        for _ in range(20):
            stream = random_stream(rng, n=100)
            a, b = sorted(rng.integers(0, 1001, size=2).tolist())
            expected = [e for e in stream.events if a <= e.t <= b]
            result = window(stream, a, b)
            assert result.events == expected
            assert validate(result).is_valid

    def test_reversed_bounds(self, small_stream):
        with pytest.raises(ArgumentError):
            window(small_stream, 10, 5)

    @given(streams(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_idempotent(self, stream, data):
        a = data.draw(st.integers(stream.t_start - 10, stream.t_end + 10))
        b = data.draw(st.integers(a, stream.t_end + 10))
        once = window(stream, a, b)
        assert window(once, a, b) == once


class TestAffineTime:
    """时间轴仿射变换"""

    def test_scale_maps_window(self):
        stream = EventStream.from_events([Event(0, 0, 10, 1), Event(0, 0, 40, 1)],
                                         geometry=(1, 1), t_start=0, t_end=50)
        scaled = scale_time(stream, 2)
        assert scaled.t.tolist() == [20, 80]
        assert (scaled.t_start, scaled.t_end) == (0, 100)

    def test_offset(self):
        stream = EventStream.from_events([Event(0, 0, 10, 1)], geometry=(1, 1), t_start=0, t_end=10)
        shifted = affine_time(stream, 1, 10 ** 6)
        assert shifted.t.tolist() == [10 ** 6 + 10]
        assert validate(shifted).is_valid

    def test_non_positive_factor(self, small_stream):
        with pytest.raises(ArgumentError):
            affine_time(small_stream, 0)

    def test_integer_map_is_exact_beyond_double_precision(self):
        stream = EventStream.from_events([Event(0, 0, 3, 1)], geometry=(1, 1), t_start=0, t_end=3)
        mapped = affine_time(stream, 2 ** 52, 2 ** 53 + 1)
        assert mapped.t.tolist() == [3 * 2 ** 52 + 2 ** 53 + 1]
        assert (mapped.t_start, mapped.t_end) == (2 ** 53 + 1, 3 * 2 ** 52 + 2 ** 53 + 1)
