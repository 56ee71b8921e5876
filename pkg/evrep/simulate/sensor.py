"""
虚拟事件相机
相机在静止图像上方按轨迹移动，逐像素在对数强度上做阈值穿越生成事件
"""

import time
import logging
from typing import List, Tuple

import numpy as np
from scipy.ndimage import map_coordinates

from config.logging_config import log_performance

from ..core.events import EventStream
from ..core.exceptions import ArgumentError
from .configs import PhotometricConfig, SensorConfig, TrajectoryConfig
from .trajectory import trajectory_offsets

logger = logging.getLogger(__name__)

LOG_EPS = 1e-3
# 阈值失配后的最小阈值（相对名义阈值）
MIN_THRESHOLD_RATIO = 0.01


def apply_photometrics(image: np.ndarray, cfg: PhotometricConfig) -> np.ndarray:
    """显示器亮度与 gamma：out = (brightness / 100) * in ** gamma，截断到 [0, 1]"""
    image = np.asarray(image, dtype=np.float64)
    out = (cfg.brightness_level / 100.0) * np.power(image, cfg.gamma)
    return np.clip(out, 0.0, 1.0)


def sample_times(duration: int, dt: int) -> np.ndarray:
    """0, dt, 2dt, ...，最后一步截止在 duration"""
    steps = np.arange(0, duration, dt, dtype=np.int64)
    return np.append(steps, np.int64(duration))


def _sensor_grid(image_shape: Tuple[int, int], geometry: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
    """传感器像素在图像中的静止坐标（居中）"""
    height, width = geometry
    rows = (image_shape[0] - 1) / 2.0 - (height - 1) / 2.0 + np.arange(height, dtype=np.float64)
    cols = (image_shape[1] - 1) / 2.0 - (width - 1) / 2.0 + np.arange(width, dtype=np.float64)
    return np.meshgrid(rows, cols, indexing='ij')


def _check_fits(image_shape: Tuple[int, int], geometry: Tuple[int, int], traj: TrajectoryConfig) -> None:
    excursion = traj.excursion
    for axis, name in ((0, "高度"), (1, "宽度")):
        needed = (geometry[axis] - 1) + 2.0 * excursion[axis]
        if needed > image_shape[axis] - 1 + 1e-9:
            raise ArgumentError(
                f"图像{name}不足: {image_shape[axis]} 像素，传感器 {geometry[axis]} 加上轨迹偏移需要 "
                f"{needed + 1:.1f} 像素"
            )


def _thresholds(sensor: SensorConfig) -> np.ndarray:
    """逐像素对比度阈值（由 seed 决定）"""
    rng = np.random.default_rng(sensor.seed)
    theta = np.full(sensor.geometry, sensor.contrast_threshold, dtype=np.float64)
    if sensor.threshold_sigma > 0:
        theta = theta * (1.0 + sensor.threshold_sigma * rng.standard_normal(sensor.geometry))
    return np.maximum(theta, MIN_THRESHOLD_RATIO * sensor.contrast_threshold)


@log_performance()
def generate_events(image: np.ndarray, traj: TrajectoryConfig, photo: PhotometricConfig,
                    sensor: SensorConfig) -> EventStream:
    """
    由静止图像生成事件流

    每 dt 微秒用双线性插值采样一次平移后的图像，对 log(I + 1e-3) 相对参考电平
    每穿越一个阈值产生一个事件，穿越时刻在相邻采样间线性插值；参考电平随穿越前移，
    不应期内的穿越丢弃但参考电平照常更新。

    Args:
        image: H'×W' 强度图像，取值 [0, 1]
        traj: 轨迹配置
        photo: 亮度配置
        sensor: 传感器配置

    Returns:
        EventStream: 窗口 [0, duration]

    Raises:
        ArgumentError: 图像不够大，采样会越出图像
    """
    started = time.perf_counter()
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise ArgumentError(f"输入图像必须为二维: {image.shape}")
    _check_fits(image.shape, sensor.geometry, traj)

    lit = apply_photometrics(image, photo)
    base_rows, base_cols = _sensor_grid(image.shape, sensor.geometry)
    theta = _thresholds(sensor)
    refractory = sensor.refractory

    times = sample_times(traj.duration, sensor.dt)
    dx, dy = trajectory_offsets(traj, times)

    def log_frame(k: int) -> np.ndarray:
        coords = np.stack([base_rows + dy[k], base_cols + dx[k]])
        frame = map_coordinates(lit, coords, order=1, mode='nearest')
        return np.log(frame + LOG_EPS)

    previous = log_frame(0)
    reference = previous.copy()
    last_fire = np.full(sensor.geometry, -refractory - 1, dtype=np.int64)

    chunks: List[Tuple[np.ndarray, ...]] = []
    for k in range(1, len(times)):
        current = log_frame(k)
        diff = current - reference
        crossings = np.floor(np.abs(diff) / theta).astype(np.int64)
        if not crossings.any():
            previous = current
            continue

        sign = np.sign(diff).astype(np.int64)
        slope = current - previous
        t0, t1 = float(times[k - 1]), float(times[k])

        for level in range(1, int(crossings.max()) + 1):
            rows, cols = np.nonzero(crossings >= level)
            target = reference[rows, cols] + level * sign[rows, cols] * theta[rows, cols]
            step = slope[rows, cols]
            frac = np.divide(target - previous[rows, cols], step,
                             out=np.ones_like(step), where=step != 0)
            stamps = np.rint(t0 + np.clip(frac, 0.0, 1.0) * (t1 - t0)).astype(np.int64)

            if refractory > 0:
                keep = stamps - last_fire[rows, cols] >= refractory
                rows, cols, stamps = rows[keep], cols[keep], stamps[keep]
            last_fire[rows, cols] = stamps
            chunks.append((cols, rows, stamps, sign[rows, cols]))

        reference = reference + crossings * sign * theta
        previous = current

    if chunks:
        x, y, t, p = (np.concatenate(parts) for parts in zip(*chunks))
        order = np.argsort(t, kind='stable')
        x, y, t, p = x[order], y[order], t[order], p[order]
    else:
        x = y = t = p = np.empty(0, dtype=np.int64)

    stream = EventStream(geometry=sensor.geometry, x=x, y=y, t=t, p=p,
                         t_start=0, t_end=traj.duration)
    logger.debug(f"生成 {len(stream)} 个事件, {len(times)} 个采样步, "
                 f"耗时 {time.perf_counter() - started:.3f}s")
    return stream
