"""
表示网格
ReprKind 枚举与 ReprGrid 数据结构
"""

from enum import Enum
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from ..core.exceptions import ArgumentError


class ReprKind(Enum):
    """表示类型枚举，value 为 CLI 名称"""
    BINARY = "binary"                  # 二值事件图
    HISTOGRAM = "histogram"            # 事件直方图
    TIMESTAMP = "timestamp"            # 时间戳图
    EVENT_IMAGE = "event_image"        # 直方图 + 时间戳图（4 通道）
    TIME_SURFACE = "time_surface"      # 指数衰减时间面
    HATS = "hats"                      # 分块平均时间面
    SORTED_TS = "sorted_ts"            # 排序时间面
    DIT = "dit"                        # 折扣时间戳图
    DIST = "dist"                      # 排序折扣时间戳图
    DISCOUNT = "discount"              # 邻域折扣 D（微秒）

    @property
    def kind_id(self) -> int:
        """RGR1 文件头中的类型编号"""
        return _KIND_IDS[self]

    @classmethod
    def from_id(cls, kind_id: int) -> "ReprKind":
        for kind, value in _KIND_IDS.items():
            if value == kind_id:
                return kind
        raise ArgumentError(f"未知的表示编号: {kind_id}")

    @classmethod
    def parse(cls, name: str) -> "ReprKind":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ArgumentError(f"未知的表示类型: {name} (可选: {valid})") from None


_KIND_IDS = {kind: i for i, kind in enumerate(ReprKind, start=1)}

# 通道约定：通道 0 为负极性，通道 1 为正极性
NEGATIVE_CHANNEL = 0
POSITIVE_CHANNEL = 1


def polarity_channel(p: np.ndarray) -> np.ndarray:
    """极性 -1/+1 映射到通道 0/1"""
    return (np.asarray(p, dtype=np.int64) + 1) // 2


@dataclass(frozen=True, eq=False)
class ReprGrid:
    """
    一个表示的计算结果

    data 形状为 H×W×C，float64；params 记录计算所用参数；window 为事件流时间窗口。
    """
    kind: ReprKind
    data: np.ndarray
    params: Dict[str, Any] = field(default_factory=dict)
    window: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 3:
            raise ArgumentError(f"表示网格必须为 H×W×C: {data.shape}")
        if data.flags.writeable:
            data = data.copy()
            data.flags.writeable = False
        object.__setattr__(self, 'data', data)
        object.__setattr__(self, 'window', (int(self.window[0]), int(self.window[1])))

    @property
    def geometry(self) -> Tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def channel(self, polarity: int) -> np.ndarray:
        """按极性取通道（仅 2 通道网格）"""
        return self.data[:, :, polarity_channel(polarity)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReprGrid):
            return NotImplemented
        return (self.kind == other.kind
                and self.params == other.params
                and self.window == other.window
                and self.data.shape == other.data.shape
                and np.array_equal(self.data, other.data))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ReprGrid(kind={self.kind.value}, shape={self.data.shape}, params={self.params})"
