"""
核心组件模块
事件模型与错误定义
"""

from .events import (
    Event, EventStream, Violation, ValidationReport,
    validate, window, affine_time, scale_time, POLARITIES,
)
from .exceptions import (
    EvrepError, ArgumentError, FormatError, TruncationError, ValidationError, StudyError,
)

__all__ = [
    'Event', 'EventStream', 'Violation', 'ValidationReport',
    'validate', 'window', 'affine_time', 'scale_time', 'POLARITIES',
    'EvrepError', 'ArgumentError', 'FormatError', 'TruncationError', 'ValidationError', 'StudyError',
]
