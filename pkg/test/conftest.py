"""
测试公共设施：随机事件流与 hypothesis 策略
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from evrep.core.events import EventStream  # noqa: E402


def random_stream(rng: np.random.Generator, height: int = 8, width: int = 8, n: int = 200,
                  t_max: int = 1000, t_start: int = 0, even: bool = False) -> EventStream:
    """随机合法事件流，时间可重复；even=True 时时间戳全为偶数"""
    t = np.sort(rng.integers(t_start, t_start + t_max + 1, size=n))
    if even:
        t = t - (t % 2)
        t = np.maximum(t, t_start + (t_start % 2))
    return EventStream(
        geometry=(height, width),
        x=rng.integers(0, width, size=n),
        y=rng.integers(0, height, size=n),
        t=t,
        p=rng.choice(np.array([-1, 1]), size=n),
        t_start=t_start,
        t_end=t_start + t_max,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_stream(rng):
    return random_stream(rng)


@st.composite
def streams(draw, max_side: int = 12, max_events: int = 60, max_time: int = 10 ** 6):
    """合法事件流策略"""
    height = draw(st.integers(1, max_side))
    width = draw(st.integers(1, max_side))
    t_start = draw(st.integers(0, max_time))
    n = draw(st.integers(0, max_events))
    times = sorted(draw(st.lists(st.integers(t_start, t_start + max_time), min_size=n, max_size=n)))
    t_end = draw(st.integers(times[-1] if times else t_start, t_start + max_time))
    return EventStream(
        geometry=(height, width),
        x=draw(st.lists(st.integers(0, width - 1), min_size=n, max_size=n)),
        y=draw(st.lists(st.integers(0, height - 1), min_size=n, max_size=n)),
        t=times,
        p=draw(st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n)),
        t_start=t_start,
        t_end=t_end,
    )
