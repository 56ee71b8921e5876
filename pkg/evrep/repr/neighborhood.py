"""
邻域统计
按 (像素, 极性) 聚合切比雪夫半径 rho 邻域内事件的最新/最早时间戳与事件数
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.logging_config import log_performance

from ..core.events import EventStream
from ..core.exceptions import ArgumentError
from .grid import polarity_channel

logger = logging.getLogger(__name__)

# 空邻域标记，与合法时间戳 0 区分
EMPTY = np.iinfo(np.int64).min
_FAR_FUTURE = np.iinfo(np.int64).max


@dataclass(frozen=True, eq=False)
class NeighborhoodStats:
    """
    邻域统计结果，各网格形状均为 H×W×2（通道 0 为负极性）

    count 为 0 的位置 t_new 与 t_old 均为 EMPTY。
    """
    rho: int
    t_new: np.ndarray
    t_old: np.ndarray
    count: np.ndarray

    @property
    def geometry(self) -> Tuple[int, int]:
        return self.count.shape[0], self.count.shape[1]

    @property
    def occupied(self) -> np.ndarray:
        return self.count > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NeighborhoodStats):
            return NotImplemented
        return (self.rho == other.rho
                and np.array_equal(self.t_new, other.t_new)
                and np.array_equal(self.t_old, other.t_old)
                and np.array_equal(self.count, other.count))

    __hash__ = None


def box_sum(values: np.ndarray, rho: int) -> np.ndarray:
    """
    积分图求 (2rho+1)×(2rho+1) 方窗和，边界裁剪

    Args:
        values: C×H×W 整数网格
    """
    _, height, width = values.shape
    integral = np.zeros((values.shape[0], height + 1, width + 1), dtype=np.int64)
    integral[:, 1:, 1:] = values.cumsum(axis=1).cumsum(axis=2)

    y0 = np.clip(np.arange(height) - rho, 0, height)
    y1 = np.clip(np.arange(height) + rho + 1, 0, height)
    x0 = np.clip(np.arange(width) - rho, 0, width)
    x1 = np.clip(np.arange(width) + rho + 1, 0, width)

    return (integral[:, y1][:, :, x1] - integral[:, y0][:, :, x1]
            - integral[:, y1][:, :, x0] + integral[:, y0][:, :, x0])


def _along(ndim: int, axis: int, start: int, stop: int) -> Tuple[slice, ...]:
    index = [slice(None)] * ndim
    index[axis] = slice(start, stop)
    return tuple(index)


def sliding_extreme(values: np.ndarray, rho: int, reduce: np.ufunc, fill: int) -> np.ndarray:
    """
    (2rho+1)×(2rho+1) 方窗内的 max 或 min，边界裁剪，结果与输入 dtype 相同

    scipy.ndimage 的 maximum_filter / minimum_filter 对 int64 经 double 中转：
    超过 2^53 的时间戳会被舍入，int64 极值哨兵会溢出。这里按行、列两次一维滑窗，
    全程整数运算。

    Args:
        values: C×H×W 整数网格
        reduce: np.maximum 或 np.minimum
        fill: 窗口越界部分的填充值，不得影响结果
    """
    result = values
    for axis in (1, 2):
        length = result.shape[axis]
        padded_shape = list(result.shape)
        padded_shape[axis] += 2 * rho
        padded = np.full(padded_shape, fill, dtype=result.dtype)
        padded[_along(result.ndim, axis, rho, rho + length)] = result

        out = padded[_along(result.ndim, axis, 0, length)].copy()
        for offset in range(1, 2 * rho + 1):
            reduce(out, padded[_along(result.ndim, axis, offset, offset + length)], out=out)
        result = out
    return result


def _pixel_aggregates(stream: EventStream) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """逐像素聚合，返回 C×H×W 的 (t_new, t_old, count)，空位置 t_old 为 +inf 哨兵"""
    height, width = stream.geometry
    shape = (2, height, width)
    size = 2 * height * width

    flat = (polarity_channel(stream.p) * height + stream.y) * width + stream.x
    count = np.bincount(flat, minlength=size).astype(np.int64)

    t_new = np.full(size, EMPTY, dtype=np.int64)
    t_old = np.full(size, _FAR_FUTURE, dtype=np.int64)
    np.maximum.at(t_new, flat, stream.t)
    np.minimum.at(t_old, flat, stream.t)

    return t_new.reshape(shape), t_old.reshape(shape), count.reshape(shape)


def _to_hwc(grid: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.moveaxis(grid, 0, -1))


@log_performance()
def compute_stats(stream: EventStream, rho: int) -> NeighborhoodStats:
    """
    计算半径 rho 的邻域统计

    对每个 (x, y, p)，聚合极性为 p、像素在 (x, y) 切比雪夫距离 rho 内的全部事件，
    传感器边界处裁剪；邻域在时间上覆盖整个窗口。

    Raises:
        ArgumentError: rho < 0
    """
    if rho < 0:
        raise ArgumentError(f"邻域半径必须非负: {rho}")

    t_new, t_old, count = _pixel_aggregates(stream)

    if rho > 0:
        # 不要换回 scipy 的秩滤波器，见 sliding_extreme
        t_new = sliding_extreme(t_new, rho, np.maximum, EMPTY)
        t_old = sliding_extreme(t_old, rho, np.minimum, _FAR_FUTURE)
        count = box_sum(count, rho)

    empty = count == 0
    t_new = np.where(empty, EMPTY, t_new)
    t_old = np.where(empty, EMPTY, t_old)

    return NeighborhoodStats(
        rho=rho,
        t_new=_to_hwc(t_new),
        t_old=_to_hwc(t_old),
        count=_to_hwc(count)
    )


def pixel_stats(stream: EventStream) -> NeighborhoodStats:
    """逐像素统计，等价于 compute_stats(stream, 0)"""
    return compute_stats(stream, 0)
