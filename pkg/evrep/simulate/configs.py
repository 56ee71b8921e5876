"""
采集配置
相机运动轨迹、显示器亮度/gamma、传感器模型以及十组扰动配置
"""

import math
import logging
from enum import Enum
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from ..core.exceptions import ArgumentError
from ..io.images import read_key_values

logger = logging.getLogger(__name__)

DEFAULT_MM_TO_PX = 8.0
DEFAULT_DURATION = 50000
DEFAULT_DT = 500
DEFAULT_THRESHOLD = 0.2
DEFAULT_GEOMETRY = (64, 64)


class TrajectoryShape(Enum):
    """轨迹形状"""
    VERTICAL = "Vertical"
    HORIZONTAL = "Horizontal"
    SQUARE_CCW = "SquareCCW"

    @classmethod
    def parse(cls, name: str) -> "TrajectoryShape":
        for shape in cls:
            if shape.value.lower() == str(name).strip().lower():
                return shape
        valid = ", ".join(s.value for s in cls)
        raise ArgumentError(f"未知的轨迹形状: {name} (可选: {valid})")


class ChangeGroup(Enum):
    """变化幅度分组"""
    TRAJECTORY_SMALL = "trajectory-small"
    TRAJECTORY_BIG = "trajectory-big"
    BRIGHTNESS_SMALL = "brightness-small"
    BRIGHTNESS_BIG = "brightness-big"


@dataclass(frozen=True)
class TrajectoryConfig:
    """
    相机运动轨迹

    amplitude 为峰峰值（毫米），方形轨迹为对角线长度；振幅 0 表示静止。
    """
    shape: TrajectoryShape
    frequency: float
    amplitude: float
    mm_to_px: float = DEFAULT_MM_TO_PX
    duration: int = DEFAULT_DURATION

    def __post_init__(self):
        if not isinstance(self.shape, TrajectoryShape):
            object.__setattr__(self, 'shape', TrajectoryShape.parse(self.shape))
        if not self.frequency > 0:
            raise ArgumentError(f"轨迹频率必须为正数: {self.frequency}")
        if not self.amplitude >= 0:
            raise ArgumentError(f"轨迹振幅必须非负: {self.amplitude}")
        if not self.mm_to_px > 0:
            raise ArgumentError(f"mm_to_px 必须为正数: {self.mm_to_px}")
        if int(self.duration) != self.duration or self.duration <= 0:
            raise ArgumentError(f"持续时间必须为正整数微秒: {self.duration}")
        object.__setattr__(self, 'duration', int(self.duration))

    @property
    def half_amplitude_px(self) -> float:
        """A = amplitude * mm_to_px / 2（像素）"""
        return self.amplitude * self.mm_to_px / 2.0

    @property
    def max_excursion(self) -> float:
        """单轴最大偏移（像素）"""
        if self.shape is TrajectoryShape.SQUARE_CCW:
            # 对角线 2A，半边长 A / sqrt(2)
            return self.half_amplitude_px / math.sqrt(2.0)
        return self.half_amplitude_px

    @property
    def excursion(self) -> Tuple[float, float]:
        """(行方向, 列方向) 最大偏移（像素）"""
        if self.shape is TrajectoryShape.VERTICAL:
            return self.max_excursion, 0.0
        if self.shape is TrajectoryShape.HORIZONTAL:
            return 0.0, self.max_excursion
        return self.max_excursion, self.max_excursion

    def scaled(self, k: float) -> "TrajectoryConfig":
        """速度放大 k 倍：频率 ×k，持续时间 ÷k"""
        return replace(self, frequency=self.frequency * k, duration=int(round(self.duration / k)))


@dataclass(frozen=True)
class PhotometricConfig:
    """显示器亮度与 gamma；照度仅作记录，不参与仿真"""
    brightness_level: float
    gamma: float
    illuminance_lux: float = 0.0

    def __post_init__(self):
        if not 0 <= self.brightness_level <= 100:
            raise ArgumentError(f"亮度等级必须位于 [0, 100]: {self.brightness_level}")
        if not self.gamma > 0:
            raise ArgumentError(f"gamma 必须为正数: {self.gamma}")
        if not self.illuminance_lux >= 0:
            raise ArgumentError(f"照度必须非负: {self.illuminance_lux}")


@dataclass(frozen=True)
class SensorConfig:
    """
    虚拟传感器

    threshold_sigma 为逐像素阈值失配的相对标准差，dt 为采样步长（微秒）。
    """
    geometry: Tuple[int, int] = DEFAULT_GEOMETRY
    contrast_threshold: float = DEFAULT_THRESHOLD
    refractory: int = 0
    seed: int = 0
    threshold_sigma: float = 0.0
    dt: int = DEFAULT_DT

    def __post_init__(self):
        height, width = (int(v) for v in self.geometry)
        if height <= 0 or width <= 0:
            raise ArgumentError(f"传感器尺寸必须为正: {self.geometry}")
        object.__setattr__(self, 'geometry', (height, width))
        if not self.contrast_threshold > 0:
            raise ArgumentError(f"对比度阈值必须为正数: {self.contrast_threshold}")
        if self.refractory < 0:
            raise ArgumentError(f"不应期必须非负: {self.refractory}")
        if not self.threshold_sigma >= 0:
            raise ArgumentError(f"阈值失配必须非负: {self.threshold_sigma}")
        if int(self.dt) != self.dt or self.dt <= 0:
            raise ArgumentError(f"采样步长必须为正整数微秒: {self.dt}")
        object.__setattr__(self, 'dt', int(self.dt))


@dataclass(frozen=True)
class PerturbationConfig:
    """
    一组完整采集配置

    factor 标记相对 Original 改变的因素（trajectory / brightness），Original 为 None；
    未改变的因素沿用 Original。
    """
    name: str
    trajectory: TrajectoryConfig
    photometric: PhotometricConfig
    factor: Optional[str] = None
    group: Optional[ChangeGroup] = None

    @property
    def varied(self) -> Union[TrajectoryConfig, PhotometricConfig]:
        """被改变的那部分配置（Original 返回轨迹）"""
        if self.factor == 'brightness':
            return self.photometric
        return self.trajectory

    @property
    def group_name(self) -> str:
        return self.group.value if self.group else "original"

    def to_dict(self) -> Dict[str, object]:
        return {
            'name': self.name,
            'shape': self.trajectory.shape.value,
            'frequency': self.trajectory.frequency,
            'amplitude': self.trajectory.amplitude,
            'mm_to_px': self.trajectory.mm_to_px,
            'duration': self.trajectory.duration,
            'brightness_level': self.photometric.brightness_level,
            'gamma': self.photometric.gamma,
            'illuminance_lux': self.photometric.illuminance_lux,
            'factor': self.factor,
            'group': self.group_name,
        }


ORIGINAL = "Original"

_ORIGINAL_TRAJECTORY = TrajectoryConfig(TrajectoryShape.SQUARE_CCW, 5.0, 3.0)
_ORIGINAL_PHOTOMETRIC = PhotometricConfig(50, 1.0, 70.00)

# (名称, 频率 Hz, 振幅 mm, 形状, 分组)
_TRAJECTORY_ROWS = [
    ("Validation 1", 8.33, 4.5, TrajectoryShape.VERTICAL, ChangeGroup.TRAJECTORY_SMALL),
    ("Validation 2", 5.0, 3.0, TrajectoryShape.HORIZONTAL, ChangeGroup.TRAJECTORY_SMALL),
    ("Validation 3", 5.0, 6.0, TrajectoryShape.VERTICAL, ChangeGroup.TRAJECTORY_BIG),
    ("Validation 4", 5.0, 6.0, TrajectoryShape.HORIZONTAL, ChangeGroup.TRAJECTORY_BIG),
    ("Validation 5", 5.0, 6.0, TrajectoryShape.SQUARE_CCW, ChangeGroup.TRAJECTORY_BIG),
]

# (名称, 亮度等级, gamma, 照度 lux, 分组)
_BRIGHTNESS_ROWS = [
    ("Validation 6", 0, 0.7, 12.75, ChangeGroup.BRIGHTNESS_BIG),
    ("Validation 7", 0, 1.0, 23.38, ChangeGroup.BRIGHTNESS_SMALL),
    ("Validation 8", 100, 1.0, 95.50, ChangeGroup.BRIGHTNESS_SMALL),
    ("Validation 9", 100, 1.5, 111.00, ChangeGroup.BRIGHTNESS_BIG),
]


def table_configs(mm_to_px: float = DEFAULT_MM_TO_PX,
                  duration: int = DEFAULT_DURATION) -> List[PerturbationConfig]:
    """
    十组命名配置：Original 与 Validation 1-9

    Args:
        mm_to_px: 毫米到像素的换算
        duration: 每个样本的持续时间（微秒）
    """
    base_traj = replace(_ORIGINAL_TRAJECTORY, mm_to_px=mm_to_px, duration=duration)
    rows = [PerturbationConfig(ORIGINAL, base_traj, _ORIGINAL_PHOTOMETRIC)]

    for name, frequency, amplitude, shape, group in _TRAJECTORY_ROWS:
        traj = TrajectoryConfig(shape, frequency, amplitude, mm_to_px, duration)
        rows.append(PerturbationConfig(name, traj, _ORIGINAL_PHOTOMETRIC, 'trajectory', group))

    for name, level, gamma, lux, group in _BRIGHTNESS_ROWS:
        photo = PhotometricConfig(level, gamma, lux)
        rows.append(PerturbationConfig(name, base_traj, photo, 'brightness', group))

    return rows


def config_names() -> List[str]:
    return [row.name for row in table_configs()]


def _normalize_name(name: str) -> str:
    key = str(name).strip().lower().replace('_', ' ')
    if key.startswith('v') and key[1:].isdigit():
        key = f"validation {key[1:]}"
    return key.replace('validation', 'validation ').replace('  ', ' ').strip()


def get_config(name: str, mm_to_px: float = DEFAULT_MM_TO_PX,
               duration: int = DEFAULT_DURATION) -> PerturbationConfig:
    """
    按名称查找配置，大小写不敏感，接受 "Validation 3" / "V3" / "validation_3"

    Raises:
        ArgumentError: 未知名称，消息列出全部合法名称
    """
    rows = table_configs(mm_to_px, duration)
    wanted = _normalize_name(name)
    for row in rows:
        if _normalize_name(row.name) == wanted:
            return row
    raise ArgumentError(f"未知的配置: {name} (可选: {', '.join(r.name for r in rows)})")


def group_of(variant: str) -> Optional[ChangeGroup]:
    """变体所属分组，Original 为 None"""
    return get_config(variant).group


def _float(entries: Dict[str, str], key: str, default: float) -> float:
    if key not in entries:
        return default
    try:
        return float(entries[key])
    except ValueError:
        raise ArgumentError(f"配置项 {key} 必须为数值: {entries[key]!r}") from None


def load_config_file(path: Union[str, Path], mm_to_px: float = DEFAULT_MM_TO_PX,
                     duration: int = DEFAULT_DURATION) -> PerturbationConfig:
    """
    读取 key=value 配置文件

    可选键 base（基准配置名，默认 Original）、name、shape、frequency、amplitude、
    mm_to_px、duration、brightness、gamma、lux；未给出的键沿用基准配置。
    """
    entries = read_key_values(path)
    known = {'base', 'name', 'shape', 'frequency', 'amplitude', 'mm_to_px',
             'duration', 'brightness', 'gamma', 'lux'}
    unknown = sorted(set(entries) - known)
    if unknown:
        raise ArgumentError(f"未知的配置项: {', '.join(unknown)}")

    base = get_config(entries.get('base', ORIGINAL), mm_to_px, duration)
    traj = TrajectoryConfig(
        shape=TrajectoryShape.parse(entries['shape']) if 'shape' in entries else base.trajectory.shape,
        frequency=_float(entries, 'frequency', base.trajectory.frequency),
        amplitude=_float(entries, 'amplitude', base.trajectory.amplitude),
        mm_to_px=_float(entries, 'mm_to_px', base.trajectory.mm_to_px),
        duration=int(_float(entries, 'duration', base.trajectory.duration)),
    )
    photo = PhotometricConfig(
        brightness_level=_float(entries, 'brightness', base.photometric.brightness_level),
        gamma=_float(entries, 'gamma', base.photometric.gamma),
        illuminance_lux=_float(entries, 'lux', base.photometric.illuminance_lux),
    )

    name = entries.get('name', Path(path).stem)
    logger.info(f"从文件加载配置: {name} ({path})")
    return PerturbationConfig(name, traj, photo, base.factor, base.group)


def resolve_config(name_or_path: str, mm_to_px: float = DEFAULT_MM_TO_PX,
                   duration: int = DEFAULT_DURATION) -> PerturbationConfig:
    """命名配置或配置文件路径"""
    path = Path(name_or_path)
    if path.suffix and path.is_file():
        return load_config_file(path, mm_to_px, duration)
    return get_config(name_or_path, mm_to_px, duration)
