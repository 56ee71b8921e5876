"""
配置加载模块
从 YAML 文件加载默认配置，校验后应用环境变量覆盖
"""

import os
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = Path(__file__).parent / "evrep_config.yaml"

ENV_THREADS = "EVREP_THREADS"
ENV_LOG_LEVEL = "EVREP_LOG_LEVEL"


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid')


class RepresentationSettings(_Section):
    alpha: float = Field(5.0, ge=0)
    rho: int = Field(3, ge=2)
    tau: float = Field(50000.0, gt=0)
    cell: int = Field(8, ge=1)
    patch: Optional[int] = Field(None, ge=1)


class SensorSettings(_Section):
    height: int = Field(64, ge=1, le=0xFFFF)
    width: int = Field(64, ge=1, le=0xFFFF)
    contrast_threshold: float = Field(0.2, gt=0)
    refractory: int = Field(0, ge=0)
    dt: int = Field(500, ge=1)
    threshold_sigma: float = Field(0.0, ge=0)
    seed: int = 0


class TrajectorySettings(_Section):
    mm_to_px: float = Field(8.0, gt=0)
    duration: int = Field(50000, ge=1)


class NoiseSettings(_Section):
    ba_rate: float = Field(0.5, ge=0)
    hot_pixel_count: int = Field(2, ge=0)
    hot_rate: float = Field(200.0, ge=0)


class SsimSettings(_Section):
    window: int = Field(11, ge=3)
    k1: float = Field(0.01, gt=0)
    k2: float = Field(0.03, gt=0)
    dynamic_range: float = Field(1.0, gt=0)

    @field_validator('window')
    @classmethod
    def _odd_window(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("SSIM 窗口必须为奇数")
        return value


class StudySettings(_Section):
    threads: int = Field(0, ge=0)
    image_size: int = Field(128, ge=8)
    corpus_size: int = Field(16, ge=1)
    alpha: float = Field(500.0, ge=0)


class LoggingSettings(_Section):
    level: str = "INFO"
    log_file: str = "logs/evrep.log"
    enable_file: bool = False

    @field_validator('level')
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ValueError(f"未知的日志级别: {value}")
        return value


class EvrepSettings(_Section):
    """全部配置"""
    representation: RepresentationSettings = Field(default_factory=RepresentationSettings)
    sensor: SensorSettings = Field(default_factory=SensorSettings)
    trajectory: TrajectorySettings = Field(default_factory=TrajectorySettings)
    noise: NoiseSettings = Field(default_factory=NoiseSettings)
    ssim: SsimSettings = Field(default_factory=SsimSettings)
    study: StudySettings = Field(default_factory=StudySettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


class SettingsError(ValueError):
    """配置文件非法"""


def _read_yaml(path: Path) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        raw = yaml.safe_load(f)
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise SettingsError(f"配置文件顶层必须是映射: {path}")
    return raw


def _apply_env(raw: Dict[str, Any], environ: Dict[str, str]) -> Dict[str, Any]:
    """环境变量覆盖"""
    if environ.get(ENV_THREADS):
        try:
            threads = int(environ[ENV_THREADS])
        except ValueError:
            raise SettingsError(f"{ENV_THREADS} 必须为整数: {environ[ENV_THREADS]!r}") from None
        raw.setdefault('study', {})['threads'] = threads
    if environ.get(ENV_LOG_LEVEL):
        raw.setdefault('logging', {})['level'] = environ[ENV_LOG_LEVEL]
    return raw


def load_settings(path: Optional[Union[str, Path]] = None,
                  environ: Optional[Dict[str, str]] = None) -> EvrepSettings:
    """
    加载配置

    Args:
        path: YAML 文件路径，默认使用包内 evrep_config.yaml
        environ: 环境变量字典，默认 os.environ

    Returns:
        EvrepSettings: 校验后的配置

    Raises:
        SettingsError: 文件内容或环境变量非法
        OSError: 文件无法读取
    """
    path = Path(path) if path is not None else DEFAULT_CONFIG_FILE
    environ = dict(os.environ) if environ is None else environ

    try:
        raw = _read_yaml(path)
    except yaml.YAMLError as e:
        raise SettingsError(f"YAML 解析失败: {path}: {e}") from e

    raw = _apply_env(raw, environ)
    try:
        settings = EvrepSettings.model_validate(raw)
    except ValidationError as e:
        raise SettingsError(f"配置校验失败: {path}\n{e}") from e

    logger.debug(f"已加载配置: {path}")
    return settings


def resolve_threads(threads: int) -> int:
    """0 表示自动，取 CPU 核数"""
    if threads < 0:
        raise SettingsError(f"线程数必须非负: {threads}")
    if threads == 0:
        return os.cpu_count() or 1
    return threads
