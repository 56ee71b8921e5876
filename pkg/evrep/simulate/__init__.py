"""
仿真模块
虚拟采集：轨迹、亮度、事件生成、噪声注入与构造场景
"""

from .configs import (
    TrajectoryShape, ChangeGroup, TrajectoryConfig, PhotometricConfig, SensorConfig,
    PerturbationConfig, ORIGINAL, table_configs, config_names, get_config, group_of,
    load_config_file, resolve_config,
)
from .trajectory import trajectory_offset, trajectory_offsets
from .sensor import apply_photometrics, generate_events
from .noise import NoiseConfig, inject_noise
from .scenarios import noise_scenario, exact_discounts, suppression_threshold
from .corpus import synthetic_corpus, PATTERNS

__all__ = [
    'TrajectoryShape', 'ChangeGroup', 'TrajectoryConfig', 'PhotometricConfig', 'SensorConfig',
    'PerturbationConfig', 'ORIGINAL', 'table_configs', 'config_names', 'get_config', 'group_of',
    'load_config_file', 'resolve_config',
    'trajectory_offset', 'trajectory_offsets',
    'apply_photometrics', 'generate_events',
    'NoiseConfig', 'inject_noise',
    'noise_scenario', 'exact_discounts', 'suppression_threshold',
    'synthetic_corpus', 'PATTERNS',
]
