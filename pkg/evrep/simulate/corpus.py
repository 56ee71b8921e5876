"""
合成图像集
棋盘格、阶跃边缘、线性渐变与平滑噪声纹理四类静止图像，供一致性实验使用
"""

import logging
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy.ndimage import gaussian_filter

from ..core.exceptions import ArgumentError

logger = logging.getLogger(__name__)

PATTERNS = ('checker', 'edge', 'gradient', 'texture')

# 强度范围，避开 0 与 1 两端
_LOW, _HIGH = 0.1, 0.9


def _rescale(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi <= lo:
        return np.full_like(values, (_LOW + _HIGH) / 2.0)
    return _LOW + (_HIGH - _LOW) * (values - lo) / (hi - lo)


def _coords(size: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.meshgrid(np.arange(size, dtype=np.float64), np.arange(size, dtype=np.float64), indexing='ij')


def checker(size: int, rng: np.random.Generator) -> np.ndarray:
    period = int(rng.integers(8, 25))
    rows, cols = _coords(size)
    phase = rng.integers(0, period, size=2)
    cells = ((rows + phase[0]) // period + (cols + phase[1]) // period) % 2
    return np.where(cells > 0, _HIGH, _LOW)


def edge(size: int, rng: np.random.Generator) -> np.ndarray:
    angle = rng.uniform(0.0, np.pi)
    rows, cols = _coords(size)
    center = (size - 1) / 2.0 + rng.uniform(-size / 8.0, size / 8.0)
    distance = (cols - center) * np.cos(angle) + (rows - center) * np.sin(angle)
    return np.where(distance > 0, _HIGH, _LOW)


def gradient(size: int, rng: np.random.Generator) -> np.ndarray:
    angle = rng.uniform(0.0, 2.0 * np.pi)
    rows, cols = _coords(size)
    return _rescale(cols * np.cos(angle) + rows * np.sin(angle))


def texture(size: int, rng: np.random.Generator) -> np.ndarray:
    sigma = rng.uniform(1.5, 4.0)
    return _rescale(gaussian_filter(rng.standard_normal((size, size)), sigma=sigma))


_GENERATORS: Dict[str, Callable[[int, np.random.Generator], np.ndarray]] = {
    'checker': checker,
    'edge': edge,
    'gradient': gradient,
    'texture': texture,
}


def synthetic_corpus(n: int = 16, size: int = 128, seed: int = 0) -> List[Tuple[str, np.ndarray]]:
    """
    生成 n 张 size×size 图像，四类图案轮流出现

    Returns:
        [(名称, 图像)]，名称形如 "03_checker"
    """
    if n < 1:
        raise ArgumentError(f"图像数量必须为正: {n}")
    if size < 8:
        raise ArgumentError(f"图像尺寸过小: {size}")

    rng = np.random.default_rng(seed)
    corpus = []
    for i in range(n):
        pattern = PATTERNS[i % len(PATTERNS)]
        corpus.append((f"{i:02d}_{pattern}", _GENERATORS[pattern](size, rng)))

    logger.debug(f"生成合成图像 {n} 张, 尺寸 {size}x{size}")
    return corpus
