"""
相机运动轨迹
给定时刻的图像平面偏移（像素，x 向右，y 向下）
"""

import math
from typing import Tuple

import numpy as np

from .configs import TrajectoryConfig, TrajectoryShape

# 方形轨迹顶点：左下 -> 右下 -> 右上 -> 左上（屏幕上逆时针），以半边长为单位
_SQUARE_CORNERS = np.array([
    [-1.0, 1.0],
    [1.0, 1.0],
    [1.0, -1.0],
    [-1.0, -1.0],
    [-1.0, 1.0],
])


def trajectory_offsets(cfg: TrajectoryConfig, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    批量计算偏移

    Args:
        cfg: 轨迹配置
        t: 时间（微秒）

    Returns:
        (dx, dy) 像素偏移数组
    """
    t = np.asarray(t, dtype=np.float64)
    seconds = t * 1e-6
    amplitude = cfg.half_amplitude_px

    if cfg.shape is TrajectoryShape.VERTICAL:
        return np.zeros_like(seconds), amplitude * np.sin(2.0 * math.pi * cfg.frequency * seconds)
    if cfg.shape is TrajectoryShape.HORIZONTAL:
        return amplitude * np.sin(2.0 * math.pi * cfg.frequency * seconds), np.zeros_like(seconds)

    # 匀速走过四条边，每条边四分之一周期
    half_side = cfg.max_excursion
    phase = np.mod(seconds * cfg.frequency, 1.0) * 4.0
    edge = np.minimum(np.floor(phase).astype(np.int64), 3)
    frac = phase - edge
    start = _SQUARE_CORNERS[edge]
    end = _SQUARE_CORNERS[edge + 1]
    position = start + (end - start) * frac[..., None]
    return half_side * position[..., 0], half_side * position[..., 1]


def trajectory_offset(cfg: TrajectoryConfig, t: float) -> Tuple[float, float]:
    """单个时刻 t（微秒）的偏移 (dx, dy)"""
    dx, dy = trajectory_offsets(cfg, np.array([t]))
    return float(dx[0]), float(dy[0])
