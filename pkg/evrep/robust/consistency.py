"""
表示一致性实验
同一场景在 Original 与各扰动配置下生成事件，比较表示之间的 SSIM，并按变化幅度分组汇总
"""

import time
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.logging_config import log_performance, study_logger

from ..core.events import EventStream
from ..core.exceptions import ArgumentError, StudyError
from ..repr import RepresentationFactory, ReprGrid, ReprKind
from ..repr.representations import DEFAULT_CELL, DEFAULT_RHO, DEFAULT_TAU
from ..simulate.configs import (
    ORIGINAL, ChangeGroup, PerturbationConfig, SensorConfig, get_config, table_configs,
)
from ..simulate.noise import NoiseConfig, inject_noise
from ..simulate.sensor import generate_events
from .ssim import SsimParams, ssim

logger = logging.getLogger(__name__)

REPORT_VERSION = 1

# 仿真事件流很密，邻域折扣 D 只有几十微秒；需要这个量级 alpha * D 才能与窗口长度相当
STUDY_ALPHA = 500.0

# 通道数不同或不是图像表示，不参与比较
EXCLUDED_KINDS = (ReprKind.EVENT_IMAGE, ReprKind.DISCOUNT)
DEFAULT_KINDS = tuple(kind for kind in ReprKind if kind not in EXCLUDED_KINDS)


@dataclass(frozen=True)
class StudyParams:
    """实验参数；噪声 seed 为基准值，第 i 张图像使用 seed + i"""
    alpha: float = STUDY_ALPHA
    rho: int = DEFAULT_RHO
    tau: float = DEFAULT_TAU
    cell: int = DEFAULT_CELL
    patch: Optional[int] = None
    sensor: SensorConfig = field(default_factory=SensorConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    ssim_params: SsimParams = field(default_factory=SsimParams)
    threads: int = 1

    def repr_params(self) -> Dict[str, Any]:
        return {'alpha': self.alpha, 'rho': self.rho, 'tau': self.tau,
                'cell': self.cell, 'patch': self.patch}

    def to_dict(self) -> Dict[str, Any]:
        params = self.repr_params()
        params['sensor'] = asdict(self.sensor)
        params['sensor']['geometry'] = list(self.sensor.geometry)
        params['noise'] = asdict(self.noise)
        params['ssim'] = asdict(self.ssim_params)
        return params


@dataclass
class ReportEntry:
    """一个 (表示, 变体) 的平均 SSIM"""
    kind: str
    variant: str
    group: str
    mean_ssim: Optional[float]
    n: int


@dataclass
class GroupEntry:
    """一个 (表示, 分组) 的平均 SSIM"""
    kind: str
    group: str
    mean_ssim: Optional[float]
    n: int


@dataclass
class ConsistencyReport:
    """一致性实验报告"""
    entries: List[ReportEntry] = field(default_factory=list)
    groups: List[GroupEntry] = field(default_factory=list)
    failures: List[Dict[str, str]] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)
    version: int = REPORT_VERSION

    @property
    def has_failures(self) -> bool:
        return bool(self.failures)

    def mean(self, kind: str, variant: str) -> Optional[float]:
        for entry in self.entries:
            if entry.kind == kind and entry.variant == variant:
                return entry.mean_ssim
        raise KeyError((kind, variant))

    def group_mean(self, kind: str, group: str) -> Optional[float]:
        for entry in self.groups:
            if entry.kind == kind and entry.group == group:
                return entry.mean_ssim
        raise KeyError((kind, group))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'format_version': self.version,
            'params': self.params,
            'entries': [asdict(e) for e in self.entries],
            'groups': [asdict(g) for g in self.groups],
            'failures': list(self.failures),
        }


ImageInput = Union[np.ndarray, Tuple[str, np.ndarray]]


def _named_images(images: Sequence[ImageInput]) -> List[Tuple[str, np.ndarray]]:
    named = []
    for i, item in enumerate(images):
        if isinstance(item, tuple):
            named.append((str(item[0]), np.asarray(item[1], dtype=np.float64)))
        else:
            named.append((f"image_{i:03d}", np.asarray(item, dtype=np.float64)))
    return named


def _resolve_kinds(kinds: Sequence[Union[str, ReprKind]]) -> List[ReprKind]:
    resolved = []
    for kind in kinds:
        kind = kind if isinstance(kind, ReprKind) else ReprKind.parse(kind)
        if kind in EXCLUDED_KINDS:
            logger.warning(f"表示 {kind.value} 不参与一致性比较，已跳过")
            continue
        if kind not in resolved:
            resolved.append(kind)
    return resolved


def _resolve_variants(variants: Sequence[Union[str, PerturbationConfig]]) -> List[PerturbationConfig]:
    return [v if isinstance(v, PerturbationConfig) else get_config(v) for v in variants]


class ConsistencyStudy:
    """
    一致性实验执行器

    每张图像先在 Original 配置下生成事件并计算表示，再对每个 (图像, 变体) 组合并行
    生成事件、计算表示并与 Original 比较。同一图像在所有配置下使用相同的噪声 seed。
    """

    def __init__(self, kinds: Sequence[Union[str, ReprKind]] = DEFAULT_KINDS,
                 variants: Optional[Sequence[Union[str, PerturbationConfig]]] = None,
                 params: Optional[StudyParams] = None):
        self.params = params or StudyParams()
        self.kinds = _resolve_kinds(kinds)
        self.variants = _resolve_variants(variants if variants is not None else table_configs())
        if not self.kinds:
            raise ArgumentError("没有可比较的表示类型")
        if not self.variants:
            raise ArgumentError("变体列表为空")
        self.original = self._original_config()

    def _original_config(self) -> PerturbationConfig:
        for variant in self.variants:
            if variant.name == ORIGINAL:
                return variant
        # 与变体使用相同的 mm_to_px / duration
        reference = self.variants[0].trajectory
        return get_config(ORIGINAL, reference.mm_to_px, reference.duration)

    def _events(self, image: np.ndarray, config: PerturbationConfig, index: int) -> EventStream:
        noise = self.params.noise
        stream = generate_events(image, config.trajectory, config.photometric, self.params.sensor)
        return inject_noise(stream, NoiseConfig(noise.ba_rate, noise.hot_pixel_count,
                                                noise.hot_rate, noise.seed + index))

    def _representations(self, stream: EventStream) -> Dict[ReprKind, ReprGrid]:
        repr_params = self.params.repr_params()
        return {kind: RepresentationFactory.compute(kind, stream, repr_params) for kind in self.kinds}

    def _original_task(self, index: int, name: str, image: np.ndarray):
        started = time.perf_counter()
        try:
            stream = self._events(image, self.original, index)
            study_logger.log_generation(name, self.original.name, len(stream), time.perf_counter() - started)
            return self._representations(stream), None
        except Exception as e:
            return None, StudyError(str(e), sample=name)

    def _variant_task(self, index: int, name: str, image: np.ndarray,
                      variant: PerturbationConfig, reference: Dict[ReprKind, ReprGrid]):
        started = time.perf_counter()
        try:
            if variant.name == self.original.name:
                grids = reference
            else:
                stream = self._events(image, variant, index)
                study_logger.log_generation(name, variant.name, len(stream), time.perf_counter() - started)
                grids = self._representations(stream)

            scores = {}
            for kind in self.kinds:
                scores[kind] = ssim(reference[kind], grids[kind], self.params.ssim_params)
                study_logger.log_sample(name, variant.name, kind.value, scores[kind])
            return scores, None
        except Exception as e:
            return None, StudyError(str(e), sample=f"{name}/{variant.name}")

    @log_performance()
    def run(self, images: Sequence[ImageInput]) -> ConsistencyReport:
        """
        执行实验

        Raises:
            ArgumentError: 图像列表为空
        """
        named = _named_images(images)
        if not named:
            raise ArgumentError("empty corpus")

        started = time.perf_counter()
        threads = max(1, int(self.params.threads))
        failures: List[Dict[str, str]] = []

        with ThreadPoolExecutor(max_workers=threads) as executor:
            originals = list(executor.map(lambda args: self._original_task(*args),
                                          [(i, name, image) for i, (name, image) in enumerate(named)]))

            pairs = []
            for i, ((name, image), (reference, error)) in enumerate(zip(named, originals)):
                if error is not None:
                    self._record_failure(failures, name, ORIGINAL, error)
                    continue
                pairs.extend((i, name, image, variant, reference) for variant in self.variants)

            outcomes = list(executor.map(lambda args: self._variant_task(*args), pairs))

        # 按 (图像, 变体) 固定顺序累加
        scores: Dict[Tuple[ReprKind, str], List[float]] = {
            (kind, variant.name): [] for kind in self.kinds for variant in self.variants
        }
        for (_, name, _, variant, _), (result, error) in zip(pairs, outcomes):
            if error is not None:
                self._record_failure(failures, name, variant.name, error)
                continue
            for kind, value in result.items():
                scores[(kind, variant.name)].append(value)

        report = self._build_report(scores, failures)
        study_logger.log_performance("consistency_study", time.perf_counter() - started, {
            'images': len(named), 'variants': len(self.variants),
            'kinds': len(self.kinds), 'failures': len(failures)
        })
        return report

    @staticmethod
    def _record_failure(failures: List[Dict[str, str]], sample: str, variant: str, error: StudyError):
        study_logger.log_error("consistency_study", str(error), {'sample': sample, 'variant': variant})
        failures.append({'sample': sample, 'variant': variant, 'error': str(error)})

    def _build_report(self, scores: Dict[Tuple[ReprKind, str], List[float]],
                      failures: List[Dict[str, str]]) -> ConsistencyReport:
        entries = []
        groups = []
        for kind in self.kinds:
            for variant in self.variants:
                values = scores[(kind, variant.name)]
                entries.append(ReportEntry(kind.value, variant.name, variant.group_name,
                                           _mean(values), len(values)))

            for group in ChangeGroup:
                members = [v for v in self.variants if v.group is group]
                if not members:
                    continue
                values = [s for v in members for s in scores[(kind, v.name)]]
                groups.append(GroupEntry(kind.value, group.value, _mean(values), len(values)))

        params = self.params.to_dict()
        params['kinds'] = [k.value for k in self.kinds]
        params['variants'] = [v.to_dict() for v in self.variants]
        return ConsistencyReport(entries=entries, groups=groups, failures=failures, params=params)


def _mean(values: List[float]) -> Optional[float]:
    return float(np.mean(values)) if values else None


def consistency_study(images: Sequence[ImageInput], kinds: Sequence[Union[str, ReprKind]],
                      variants: Sequence[Union[str, PerturbationConfig]],
                      params: Optional[StudyParams] = None) -> ConsistencyReport:
    """
    一致性实验

    Args:
        images: 强度图像，或 (名称, 图像) 元组
        kinds: 表示类型（event_image 与 discount 会被跳过）
        variants: 扰动配置或其名称
        params: 实验参数

    Returns:
        ConsistencyReport: 各 (表示, 变体) 平均 SSIM 与分组汇总
    """
    if not images:
        raise ArgumentError("empty corpus")
    if not kinds:
        raise ArgumentError("表示类型列表为空")
    return ConsistencyStudy(kinds, variants, params).run(images)
