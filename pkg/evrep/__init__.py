"""
evrep - 事件相机表示库
事件流模型与文件格式、九种事件表示（含排序折扣时间戳图 DiT / DiST）、
虚拟事件采集与噪声注入，以及基于 SSIM 的表示一致性实验
"""

__version__ = "0.1.0"

from .core import (
    Event, EventStream, ValidationReport, validate, window, affine_time, scale_time,
    EvrepError, ArgumentError, FormatError, TruncationError, ValidationError, StudyError,
)
from .repr import ReprKind, ReprGrid, RepresentationFactory, compute_stats
from .robust import ssim, consistency_study, StudyParams, ConsistencyReport
from .simulate import (
    TrajectoryConfig, PhotometricConfig, SensorConfig, PerturbationConfig, NoiseConfig,
    table_configs, get_config, generate_events, inject_noise,
)

__all__ = [
    '__version__',
    'Event', 'EventStream', 'ValidationReport', 'validate', 'window', 'affine_time', 'scale_time',
    'EvrepError', 'ArgumentError', 'FormatError', 'TruncationError', 'ValidationError', 'StudyError',
    'ReprKind', 'ReprGrid', 'RepresentationFactory', 'compute_stats',
    'ssim', 'consistency_study', 'StudyParams', 'ConsistencyReport',
    'TrajectoryConfig', 'PhotometricConfig', 'SensorConfig', 'PerturbationConfig', 'NoiseConfig',
    'table_configs', 'get_config', 'generate_events', 'inject_noise',
]
