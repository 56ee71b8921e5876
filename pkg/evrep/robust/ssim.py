"""
结构相似度 SSIM
均值窗口，局部统计只在窗口完整落在网格内的位置上计算（有效区域），方差取总体方差
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.ndimage import uniform_filter

from ..core.exceptions import ArgumentError
from ..repr.grid import ReprGrid

logger = logging.getLogger(__name__)

GridLike = Union[ReprGrid, np.ndarray]


@dataclass(frozen=True)
class SsimParams:
    """SSIM 参数，dynamic_range 默认 1.0（表示已归一化到 [0, 1]）"""
    window: int = 11
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 1.0

    def __post_init__(self):
        if int(self.window) != self.window or self.window < 3 or self.window % 2 == 0:
            raise ArgumentError(f"SSIM 窗口必须为 >= 3 的奇数: {self.window}")
        if not (self.k1 > 0 and self.k2 > 0):
            raise ArgumentError(f"SSIM 常数必须为正数: k1={self.k1}, k2={self.k2}")
        if not self.dynamic_range > 0:
            raise ArgumentError(f"动态范围必须为正数: {self.dynamic_range}")
        object.__setattr__(self, 'window', int(self.window))

    @property
    def c1(self) -> float:
        return (self.k1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.dynamic_range) ** 2


def _as_hwc(grid: GridLike) -> np.ndarray:
    data = grid.data if isinstance(grid, ReprGrid) else np.asarray(grid, dtype=np.float64)
    if data.ndim == 2:
        data = data[:, :, None]
    if data.ndim != 3:
        raise ArgumentError(f"SSIM 输入必须为 H×W 或 H×W×C: {data.shape}")
    return data


def ssim_map(a: np.ndarray, b: np.ndarray, params: SsimParams) -> np.ndarray:
    """单通道局部 SSIM 图（有效区域）"""
    w = params.window
    half = w // 2
    valid = (slice(half, a.shape[0] - half), slice(half, a.shape[1] - half))

    def local_mean(values: np.ndarray) -> np.ndarray:
        return uniform_filter(values, size=w, mode='reflect')[valid]

    mu_a = local_mean(a)
    mu_b = local_mean(b)
    var_a = local_mean(a * a) - mu_a * mu_a
    var_b = local_mean(b * b) - mu_b * mu_b
    cov = local_mean(a * b) - mu_a * mu_b

    c1, c2 = params.c1, params.c2
    numerator = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    denominator = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return numerator / denominator


def ssim(a: GridLike, b: GridLike, params: SsimParams = None) -> float:
    """
    两个网格的 SSIM：逐通道取局部 SSIM 均值，再对通道等权平均

    Raises:
        ArgumentError: 尺寸或通道数不一致，或网格小于窗口
    """
    params = params or SsimParams()
    data_a = _as_hwc(a)
    data_b = _as_hwc(b)
    if data_a.shape != data_b.shape:
        raise ArgumentError(f"网格形状不一致: {data_a.shape} vs {data_b.shape}")

    height, width, channels = data_a.shape
    if height < params.window or width < params.window:
        raise ArgumentError(f"网格 {height}x{width} 小于 SSIM 窗口 {params.window}")

    per_channel = [
        float(np.mean(ssim_map(data_a[:, :, c], data_b[:, :, c], params)))
        for c in range(channels)
    ]
    return float(np.mean(per_channel))
