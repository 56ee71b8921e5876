"""
噪声注入
背景活动（逐像素泊松过程，极性随机）与热像素（少数像素高频发放，极性固定）
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.events import EventStream
from ..core.exceptions import ArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoiseConfig:
    """
    噪声参数

    ba_rate: 每像素每秒背景活动事件数
    hot_pixel_count: 热像素个数
    hot_rate: 每个热像素每秒事件数
    """
    ba_rate: float = 0.0
    hot_pixel_count: int = 0
    hot_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.ba_rate >= 0:
            raise ArgumentError(f"背景活动速率必须非负: {self.ba_rate}")
        if not self.hot_rate >= 0:
            raise ArgumentError(f"热像素速率必须非负: {self.hot_rate}")
        if int(self.hot_pixel_count) != self.hot_pixel_count or self.hot_pixel_count < 0:
            raise ArgumentError(f"热像素个数必须为非负整数: {self.hot_pixel_count}")
        object.__setattr__(self, 'hot_pixel_count', int(self.hot_pixel_count))

    @property
    def is_silent(self) -> bool:
        return self.ba_rate == 0 and (self.hot_pixel_count == 0 or self.hot_rate == 0)


def inject_noise(stream: EventStream, cfg: NoiseConfig) -> EventStream:
    """
    向事件流注入噪声

    噪声时间在 [t_start, t_end] 上均匀取整数微秒；合并后按时间稳定排序，
    同一时刻原有事件在前。结果只由 seed 决定。

    Raises:
        ArgumentError: 热像素个数超过像素总数
    """
    height, width = stream.geometry
    pixels = height * width
    if cfg.hot_pixel_count > pixels:
        raise ArgumentError(f"热像素个数 {cfg.hot_pixel_count} 超过像素总数 {pixels}")
    if cfg.is_silent:
        return stream

    rng = np.random.default_rng(cfg.seed)
    seconds = stream.duration * 1e-6

    # 背景活动
    ba_counts = rng.poisson(cfg.ba_rate * seconds, size=pixels)
    ba_pixels = np.repeat(np.arange(pixels), ba_counts)
    ba_polarity = rng.choice(np.array([-1, 1]), size=len(ba_pixels))

    # 热像素
    hot = rng.choice(pixels, size=cfg.hot_pixel_count, replace=False)
    hot_sign = rng.choice(np.array([-1, 1]), size=cfg.hot_pixel_count)
    hot_counts = rng.poisson(cfg.hot_rate * seconds, size=cfg.hot_pixel_count)
    hot_pixels = np.repeat(hot, hot_counts)
    hot_polarity = np.repeat(hot_sign, hot_counts)

    noise_pixels = np.concatenate([ba_pixels, hot_pixels])
    noise_polarity = np.concatenate([ba_polarity, hot_polarity])
    noise_t = rng.integers(stream.t_start, stream.t_end, size=len(noise_pixels), endpoint=True)

    t = np.concatenate([stream.t, noise_t])
    order = np.argsort(t, kind='stable')
    merged = stream.replace(
        x=np.concatenate([stream.x, noise_pixels % width])[order],
        y=np.concatenate([stream.y, noise_pixels // width])[order],
        t=t[order],
        p=np.concatenate([stream.p, noise_polarity])[order],
    )

    logger.debug(f"注入噪声: 背景活动 {len(ba_pixels)} 个, 热像素 {len(hot_pixels)} 个 "
                 f"({cfg.hot_pixel_count} 个像素)")
    return merged
