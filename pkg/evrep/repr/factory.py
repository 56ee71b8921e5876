"""
表示工厂
注册和统一调用不同类型的事件表示
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple

from config.logging_config import study_logger

from ..core.events import EventStream
from ..core.exceptions import ArgumentError
from .grid import ReprGrid, ReprKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RepresentationSpec:
    """已注册表示的描述"""
    kind: ReprKind
    builder: Callable[..., ReprGrid]
    param_names: Tuple[str, ...] = ()


class RepresentationFactory:
    """表示工厂"""

    _builders: Dict[ReprKind, RepresentationSpec] = {}

    @classmethod
    def register_kind(cls, kind: ReprKind, builder: Callable[..., ReprGrid],
                      param_names: Tuple[str, ...] = ()):
        """注册表示构建函数"""
        cls._builders[kind] = RepresentationSpec(kind, builder, tuple(param_names))

    @classmethod
    def get_spec(cls, kind) -> RepresentationSpec:
        if isinstance(kind, str):
            kind = ReprKind.parse(kind)
        if kind not in cls._builders:
            raise ArgumentError(f"不支持的表示类型: {kind.value}")
        return cls._builders[kind]

    @classmethod
    def compute(cls, kind, stream: EventStream, params: Dict[str, Any] = None) -> ReprGrid:
        """
        计算指定类型的表示

        Args:
            kind: ReprKind 或其名称
            stream: 事件流
            params: 参数字典，只取该表示需要的键，缺省键使用默认值

        Returns:
            ReprGrid: 计算结果
        """
        spec = cls.get_spec(kind)
        params = params or {}
        selected = {name: params[name] for name in spec.param_names
                    if params.get(name) is not None}
        study_logger.log_representation(spec.kind.value, selected)
        return spec.builder(stream, **selected)

    @classmethod
    def get_supported_kinds(cls) -> List[str]:
        """获取支持的表示类型"""
        return [kind.value for kind in cls._builders]

    @classmethod
    def get_param_names(cls, kind) -> Tuple[str, ...]:
        """获取表示所需参数名"""
        return cls.get_spec(kind).param_names
