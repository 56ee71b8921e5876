"""
事件表示
九种非学习型表示及邻域折扣 D

所有表示按极性分通道（通道 0 为负极性，通道 1 为正极性），空事件流得到全零网格。
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config.logging_config import log_performance

from ..core.events import EventStream
from ..core.exceptions import ArgumentError
from .grid import ReprGrid, ReprKind
from .neighborhood import compute_stats, pixel_stats
from .ranking import rank_normalize

logger = logging.getLogger(__name__)

# 默认参数
DEFAULT_ALPHA = 5.0
DEFAULT_RHO = 3
DEFAULT_TAU = 50000.0
DEFAULT_CELL = 8


def _chw(grid: np.ndarray) -> np.ndarray:
    """H×W×C -> C×H×W"""
    return np.moveaxis(grid, -1, 0)


def _make_grid(kind: ReprKind, chw: np.ndarray, stream: EventStream,
               params: Optional[Dict[str, Any]] = None) -> ReprGrid:
    return ReprGrid(
        kind=kind,
        data=np.moveaxis(chw, 0, -1),
        params=params or {},
        window=(stream.t_start, stream.t_end)
    )


def _check_rho(rho: int) -> int:
    if int(rho) != rho or rho < 2:
        raise ArgumentError(f"折扣邻域半径必须为 >= 2 的整数 (rho > 1): {rho}")
    return int(rho)


def _check_alpha(alpha: float) -> float:
    if not alpha >= 0:
        raise ArgumentError(f"折扣系数必须非负: {alpha}")
    return float(alpha)


def _check_tau(tau: float) -> float:
    if not tau > 0:
        raise ArgumentError(f"衰减时间常数必须为正数: {tau}")
    return float(tau)


def _check_cell(cell: int, name: str = "cell") -> int:
    if int(cell) != cell or cell < 1:
        raise ArgumentError(f"{name} 必须为正整数: {cell}")
    return int(cell)


def _newest(stream: EventStream) -> Tuple[np.ndarray, np.ndarray]:
    """逐像素最新时间戳与占用掩码（C×H×W）"""
    stats = pixel_stats(stream)
    return _chw(stats.t_new), _chw(stats.occupied)


def _time_surface_values(stream: EventStream, tau: float) -> Tuple[np.ndarray, np.ndarray]:
    t_new, occupied = _newest(stream)
    age = (stream.t_end - np.where(occupied, t_new, stream.t_end)).astype(np.float64)
    values = np.where(occupied, np.exp(-age / tau), 0.0)
    return values, occupied


def binary_event_image(stream: EventStream) -> ReprGrid:
    """二值事件图：有事件的像素为 1"""
    counts = _chw(pixel_stats(stream).count)
    return _make_grid(ReprKind.BINARY, (counts > 0).astype(np.float64), stream)


def event_histogram(stream: EventStream) -> ReprGrid:
    """事件直方图：逐像素逐极性事件数"""
    counts = _chw(pixel_stats(stream).count)
    return _make_grid(ReprKind.HISTOGRAM, counts.astype(np.float64), stream)


def _timestamp_values(stream: EventStream) -> np.ndarray:
    t_new, occupied = _newest(stream)
    if stream.t_end == stream.t_start:
        return occupied.astype(np.float64)
    scaled = (np.where(occupied, t_new, stream.t_start) - stream.t_start) / float(stream.t_end - stream.t_start)
    return np.where(occupied, scaled, 0.0)


def timestamp_image(stream: EventStream) -> ReprGrid:
    """
    时间戳图：最新事件时间按窗口归一化

    (t_new - t_start) / (t_end - t_start)；窗口退化时占用像素为 1。
    t = t_start 的事件取值 0，与空像素无法区分。
    """
    return _make_grid(ReprKind.TIMESTAMP, _timestamp_values(stream), stream)


def event_image(stream: EventStream) -> ReprGrid:
    """事件图：通道 0-1 为直方图，通道 2-3 为时间戳图"""
    counts = _chw(pixel_stats(stream).count).astype(np.float64)
    stacked = np.concatenate([counts, _timestamp_values(stream)], axis=0)
    return _make_grid(ReprKind.EVENT_IMAGE, stacked, stream)


def time_surface(stream: EventStream, tau: float = DEFAULT_TAU) -> ReprGrid:
    """时间面：exp(-(t_end - t_new) / tau)，空像素为 0"""
    tau = _check_tau(tau)
    values, _ = _time_surface_values(stream, tau)
    return _make_grid(ReprKind.TIME_SURFACE, values, stream, {'tau': tau})


def hats_surface(stream: EventStream, cell: int = DEFAULT_CELL, tau: float = DEFAULT_TAU) -> ReprGrid:
    """
    分块平均时间面（HATS 替代实现）

    传感器划分为 cell×cell 块，块内每个极性取占用像素时间面均值并广播到整块；
    无占用像素的块为 0。边缘不足一块的部分单独成块。
    """
    cell = _check_cell(cell)
    tau = _check_tau(tau)
    values, occupied = _time_surface_values(stream, tau)

    channels, height, width = values.shape
    tiles_y = -(-height // cell)
    tiles_x = -(-width // cell)
    pad = ((0, 0), (0, tiles_y * cell - height), (0, tiles_x * cell - width))

    blocks = (channels, tiles_y, cell, tiles_x, cell)
    sums = np.pad(values, pad).reshape(blocks).sum(axis=(2, 4))
    counts = np.pad(occupied.astype(np.int64), pad).reshape(blocks).sum(axis=(2, 4))
    means = np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)

    tiled = np.repeat(np.repeat(means, cell, axis=1), cell, axis=2)[:, :height, :width]
    return _make_grid(ReprKind.HATS, tiled, stream, {'cell': cell, 'tau': tau})


def _discount_parts(stream: EventStream, rho: int):
    """返回逐像素最新时间、占用掩码、邻域时间跨度 R 与邻域事件数 C（均为 C×H×W）"""
    pixel = pixel_stats(stream)
    neighborhood = compute_stats(stream, rho)

    occupied = _chw(pixel.occupied)
    t_new = _chw(pixel.t_new)
    span = np.where(occupied, _chw(neighborhood.t_new) - _chw(neighborhood.t_old), 0)
    count = np.where(occupied, _chw(neighborhood.count), 1)
    return t_new, occupied, span, count


def _discount_values(span: np.ndarray, count: np.ndarray, occupied: np.ndarray) -> np.ndarray:
    return np.where(occupied, span.astype(np.float64) / count, 0.0)


def discount_grid(stream: EventStream, rho: int = DEFAULT_RHO) -> ReprGrid:
    """
    邻域折扣 D = (T_new(N_rho) - T_old(N_rho)) / C(N_rho)，单位微秒

    只在该 (x, y, p) 有事件的位置计算，其余为 0。

    Raises:
        ArgumentError: rho < 2
    """
    rho = _check_rho(rho)
    _, occupied, span, count = _discount_parts(stream, rho)
    return _make_grid(ReprKind.DISCOUNT, _discount_values(span, count, occupied), stream, {'rho': rho})


def _discounted_timestamps(stream: EventStream, alpha: float, rho: int):
    """S_D = t_new - alpha * D（原始微秒），附带精确键所需的整数分量"""
    t_new, occupied, span, count = _discount_parts(stream, rho)
    discount = _discount_values(span, count, occupied)
    s_d = np.where(occupied, t_new.astype(np.float64) - alpha * discount, 0.0)
    return s_d, occupied, t_new, span, count


@log_performance()
def dit(stream: EventStream, alpha: float = DEFAULT_ALPHA, rho: int = DEFAULT_RHO) -> ReprGrid:
    """
    折扣时间戳图 DiT

    S_D = t_new - alpha * D 在原始微秒上计算，再对占用位置做 min-max 归一化到 [0, 1]；
    所有占用位置取值相同时归一化为 1。
    """
    alpha = _check_alpha(alpha)
    rho = _check_rho(rho)
    s_d, occupied, _, _, _ = _discounted_timestamps(stream, alpha, rho)

    values = np.zeros_like(s_d)
    if occupied.any():
        lo = s_d[occupied].min()
        hi = s_d[occupied].max()
        if hi > lo:
            values[occupied] = (s_d[occupied] - lo) / (hi - lo)
        else:
            values[occupied] = 1.0

    return _make_grid(ReprKind.DIT, values, stream, {'alpha': alpha, 'rho': rho})


@log_performance()
def dist(stream: EventStream, alpha: float = DEFAULT_ALPHA, rho: int = DEFAULT_RHO) -> ReprGrid:
    """
    排序折扣时间戳图 DiST

    两个极性通道的占用位置按 S_D 升序联合排序，秩 1..m 除以 m；未占用位置为 0。
    """
    alpha = _check_alpha(alpha)
    rho = _check_rho(rho)
    s_d, occupied, t_new, span, count = _discounted_timestamps(stream, alpha, rho)

    flat_index = np.flatnonzero(occupied.ravel())
    alpha_exact = Fraction(alpha)
    t_compact = t_new.ravel()[flat_index]
    span_compact = span.ravel()[flat_index]
    count_compact = count.ravel()[flat_index]

    def exact_key(members: np.ndarray) -> List[Fraction]:
        return [
            Fraction(t) - alpha_exact * Fraction(r, c)
            for t, r, c in zip(t_compact[members].tolist(),
                               span_compact[members].tolist(),
                               count_compact[members].tolist())
        ]

    values = rank_normalize(s_d, occupied, exact_key=exact_key)
    return _make_grid(ReprKind.DIST, values, stream, {'alpha': alpha, 'rho': rho})


def sorted_time_surface(stream: EventStream, patch: Optional[int] = None) -> ReprGrid:
    """
    排序时间面：最新时间戳的排序归一化（即 alpha = 0 的 DiST）

    Args:
        patch: 给定时按 patch×patch 块分别排序（两个极性联合），否则全局排序
    """
    t_new, occupied = _newest(stream)

    if patch is None:
        values = rank_normalize(t_new, occupied)
        return _make_grid(ReprKind.SORTED_TS, values, stream)

    patch = _check_cell(patch, name="patch")
    _, height, width = t_new.shape
    tiles_x = -(-width // patch)
    rows = np.arange(height)[:, None] // patch
    cols = np.arange(width)[None, :] // patch
    tile_id = np.broadcast_to(rows * tiles_x + cols, t_new.shape)

    values = rank_normalize(t_new, occupied, groups=tile_id)
    return _make_grid(ReprKind.SORTED_TS, values, stream, {'patch': patch})
