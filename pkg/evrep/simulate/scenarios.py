"""
构造场景
单行传感器上的背景活动 / 正常运动边缘 / 热像素三区域事件流，以及压制噪声所需的最小折扣系数
"""

from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from ..core.events import Event, EventStream
from ..core.exceptions import ArgumentError
from ..repr.grid import polarity_channel
from ..repr.neighborhood import compute_stats, pixel_stats

SCENARIO_WIDTH = 30
SCENARIO_DURATION = 50000
SCENARIO_RHO = 2

# 稀疏、时间上分散的背景活动
_BACKGROUND = [(1, 2000), (2, 20000), (4, 38000), (5, 46000)]
# 边缘扫过 x = 10..19，每像素两次，间隔 4 ms
_NORMAL_COLUMNS = range(10, 20)
# 孤立的热像素，整个窗口内周期发放
_HOT_COLUMN = 25
_HOT_TIMES = [5000, 20000, 35000, 49000]


def noise_scenario(polarity: int = 1) -> Tuple[EventStream, Dict[str, List[int]]]:
    """
    构造 1×30 的三区域事件流（单一极性，窗口 [0, 50000]）

    Returns:
        (stream, regions)：regions 给出 background / normal / hot 三类像素的列号
    """
    events = [(x, t) for x, t in _BACKGROUND]
    for x in _NORMAL_COLUMNS:
        offset = 50 * (x - _NORMAL_COLUMNS[0])
        events.append((x, 40000 + offset))
        events.append((x, 44000 + offset))
    events.extend((_HOT_COLUMN, t) for t in _HOT_TIMES)
    events.sort(key=lambda e: (e[1], e[0]))

    stream = EventStream.from_events(
        (Event(x, 0, t, polarity) for x, t in events),
        geometry=(1, SCENARIO_WIDTH), t_start=0, t_end=SCENARIO_DURATION
    )
    regions = {
        'background': [x for x, _ in _BACKGROUND],
        'normal': list(_NORMAL_COLUMNS),
        'hot': [_HOT_COLUMN],
    }
    return stream, regions


def exact_discounts(stream: EventStream, rho: int, polarity: int = 1, row: int = 0) -> Dict[int, Tuple[int, Fraction]]:
    """
    逐列精确折扣

    Returns:
        {列号: (t_new, D)}，只含该行该极性有事件的列
    """
    channel = int(polarity_channel(polarity))
    pixel = pixel_stats(stream)
    neighborhood = compute_stats(stream, rho)

    result = {}
    for x in np.flatnonzero(pixel.count[row, :, channel] > 0).tolist():
        span = int(neighborhood.t_new[row, x, channel]) - int(neighborhood.t_old[row, x, channel])
        result[x] = (int(pixel.t_new[row, x, channel]), Fraction(span, int(neighborhood.count[row, x, channel])))
    return result


def suppression_threshold(stream: EventStream, regions: Dict[str, List[int]],
                          rho: int = SCENARIO_RHO, polarity: int = 1) -> Fraction:
    """
    使每个噪声像素的 S_D 严格低于每个正常像素所需的折扣系数下界

    对噪声像素 n 与正常像素 m，t_n - a*D_n < t_m - a*D_m 当且仅当
    a > (t_n - t_m) / (D_n - D_m)（要求 D_n > D_m）。返回所有组合的最大值（不小于 0），
    alpha 严格大于该值即可压制。

    Raises:
        ArgumentError: 某噪声像素的折扣不大于某正常像素而时间更晚，无法压制
    """
    discounts = exact_discounts(stream, rho, polarity)
    noisy = [x for name, cols in regions.items() if name != 'normal' for x in cols]

    bound = Fraction(0)
    for n in noisy:
        t_n, d_n = discounts[n]
        for m in regions['normal']:
            t_m, d_m = discounts[m]
            if d_n > d_m:
                bound = max(bound, Fraction(t_n - t_m) / (d_n - d_m))
            elif t_n >= t_m:
                raise ArgumentError(f"像素 {n} 的折扣不大于正常像素 {m}，无法通过折扣压制")
    return bound
