"""
事件与事件流模型
提供事件流的校验、时间窗口截取与时间轴仿射变换
"""

import logging
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from .exceptions import ArgumentError

logger = logging.getLogger(__name__)

POLARITIES = (-1, 1)


@dataclass(frozen=True)
class Event:
    """单个事件 (x, y, t, p)，t 为微秒"""
    x: int
    y: int
    t: int
    p: int


@dataclass(frozen=True, eq=False)
class EventStream:
    """
    按时间排序的事件序列

    事件以列式 numpy 数组保存（只读），构造后不可修改，可在线程间共享。
    构造时不做校验，违反不变量的流可以存在，由 validate 报告。
    """
    geometry: Tuple[int, int]
    x: np.ndarray
    y: np.ndarray
    t: np.ndarray
    p: np.ndarray
    t_start: int = 0
    t_end: int = 0

    def __post_init__(self):
        columns = {
            'x': np.asarray(self.x, dtype=np.int64),
            'y': np.asarray(self.y, dtype=np.int64),
            't': np.asarray(self.t, dtype=np.int64),
            'p': np.asarray(self.p, dtype=np.int8),
        }
        sizes = {len(col) for col in columns.values()}
        if len(sizes) > 1:
            raise ArgumentError(f"事件列长度不一致: {sorted(sizes)}")

        for name, col in columns.items():
            col = col.reshape(-1)
            if col.flags.writeable:
                col = col.copy()
                col.flags.writeable = False
            object.__setattr__(self, name, col)

        object.__setattr__(self, 'geometry', (int(self.geometry[0]), int(self.geometry[1])))
        object.__setattr__(self, 't_start', int(self.t_start))
        object.__setattr__(self, 't_end', int(self.t_end))

    @classmethod
    def from_events(cls, events: Iterable[Event], geometry: Tuple[int, int],
                    t_start: Optional[int] = None, t_end: Optional[int] = None) -> "EventStream":
        """
        由事件列表构造事件流

        Args:
            events: 事件序列（保持原顺序）
            geometry: (H, W)
            t_start: 窗口起点，默认取首个事件时间（空流为 0）
            t_end: 窗口终点，默认取最后一个事件时间
        """
        events = list(events)
        x = [e.x for e in events]
        y = [e.y for e in events]
        t = [e.t for e in events]
        p = [e.p for e in events]

        if t_start is None:
            t_start = t[0] if t else 0
        if t_end is None:
            t_end = t[-1] if t else t_start

        return cls(geometry=geometry, x=x, y=y, t=t, p=p, t_start=t_start, t_end=t_end)

    @classmethod
    def empty(cls, geometry: Tuple[int, int], t_start: int = 0, t_end: int = 0) -> "EventStream":
        """创建空事件流"""
        return cls(geometry=geometry, x=[], y=[], t=[], p=[], t_start=t_start, t_end=t_end)

    @property
    def height(self) -> int:
        return self.geometry[0]

    @property
    def width(self) -> int:
        return self.geometry[1]

    @property
    def duration(self) -> int:
        return self.t_end - self.t_start

    @property
    def events(self) -> List[Event]:
        """以 Event 列表形式返回（大流慎用）"""
        return list(iter(self))

    def replace(self, **changes: Any) -> "EventStream":
        """返回替换部分字段后的新事件流"""
        fields_ = {
            'geometry': self.geometry, 'x': self.x, 'y': self.y, 't': self.t, 'p': self.p,
            't_start': self.t_start, 't_end': self.t_end,
        }
        fields_.update(changes)
        return EventStream(**fields_)

    def take(self, index: np.ndarray) -> "EventStream":
        """按索引选取事件，窗口不变"""
        return self.replace(x=self.x[index], y=self.y[index], t=self.t[index], p=self.p[index])

    def __len__(self) -> int:
        return len(self.t)

    def __iter__(self) -> Iterator[Event]:
        for x, y, t, p in zip(self.x.tolist(), self.y.tolist(), self.t.tolist(), self.p.tolist()):
            yield Event(x, y, t, p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (self.geometry == other.geometry
                and self.t_start == other.t_start
                and self.t_end == other.t_end
                and np.array_equal(self.x, other.x)
                and np.array_equal(self.y, other.y)
                and np.array_equal(self.t, other.t)
                and np.array_equal(self.p, other.p))

    __hash__ = None

    def __repr__(self) -> str:
        return (f"EventStream(geometry={self.geometry}, n={len(self)}, "
                f"window=({self.t_start}, {self.t_end}))")


@dataclass
class Violation:
    """单条不变量违反"""
    index: Optional[int]  # 事件下标，流级别问题为 None
    message: str


@dataclass
class ValidationReport:
    """校验报告，合法的流对应空报告"""
    violations: List[Violation] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def messages(self) -> List[str]:
        return [v.message for v in self.violations]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'valid': self.is_valid,
            'violations': [asdict(v) for v in self.violations]
        }

    def __len__(self) -> int:
        return len(self.violations)


def validate(stream: EventStream) -> ValidationReport:
    """
    校验事件流的全部不变量

    Returns:
        ValidationReport: 每条违反附带事件下标；不抛异常
    """
    violations: List[Violation] = []
    height, width = stream.geometry

    if height <= 0 or width <= 0:
        violations.append(Violation(None, f"non-positive geometry {stream.geometry}"))
    if stream.t_start > stream.t_end:
        violations.append(Violation(None, "window start after window end"))

    per_event: List[Tuple[int, int, str]] = []

    def collect(mask: np.ndarray, order: int, template: str):
        for i in np.flatnonzero(mask).tolist():
            per_event.append((i, order, template.format(i=i)))

    x, y, t, p = stream.x, stream.y, stream.t, stream.p
    collect((x < 0) | (x >= width), 0, "x out of bounds at index {i}")
    collect((y < 0) | (y >= height), 1, "y out of bounds at index {i}")
    collect((p != -1) & (p != 1), 2, "invalid polarity at index {i}")
    collect(t < 0, 3, "negative timestamp at index {i}")
    collect((t < stream.t_start) | (t > stream.t_end), 4, "timestamp outside window at index {i}")
    if len(t) > 1:
        decreasing = np.zeros(len(t), dtype=bool)
        decreasing[1:] = t[1:] < t[:-1]
        collect(decreasing, 5, "non-monotone timestamp at index {i}")

    per_event.sort()
    violations.extend(Violation(i, message) for i, _, message in per_event)

    if violations:
        logger.debug(f"事件流校验发现 {len(violations)} 处违反")
    return ValidationReport(violations)


def window(stream: EventStream, a: int, b: int) -> EventStream:
    """
    截取时间窗口 [a, b]（闭区间）

    Raises:
        ArgumentError: a > b
    """
    if a > b:
        raise ArgumentError(f"窗口起点 {a} 大于终点 {b}")

    lo = int(np.searchsorted(stream.t, a, side='left'))
    hi = int(np.searchsorted(stream.t, b, side='right'))
    index = np.arange(lo, max(lo, hi))
    return stream.take(index).replace(t_start=a, t_end=b)


def affine_time(stream: EventStream, a: float, b: float = 0) -> EventStream:
    """
    时间轴仿射变换 t -> round(a*t + b)，窗口同样变换

    相机速度变化等价于时间轴缩放；映射在流的时间戳上是单射时排序关系不变。

    Raises:
        ArgumentError: a <= 0
    """
    if a <= 0:
        raise ArgumentError(f"缩放系数必须为正数: {a}")

    if float(a).is_integer() and float(b).is_integer():
        # 整数映射走整数运算，超过 2^53 的时间戳也不丢精度
        def remap(values):
            return np.asarray(values, dtype=np.int64) * int(a) + int(b)
    else:
        def remap(values):
            return np.rint(np.asarray(values, dtype=np.float64) * a + b).astype(np.int64)

    t_start, t_end = remap([stream.t_start, stream.t_end]).tolist()
    return stream.replace(t=remap(stream.t), t_start=t_start, t_end=t_end)


def scale_time(stream: EventStream, k: float) -> EventStream:
    """时间轴缩放 t -> k*t"""
    return affine_time(stream, k, 0)
