"""
异常定义
evrep 所有模块共用的错误层次
"""

from typing import Any, Optional


class EvrepError(Exception):
    """evrep 基础异常"""


class ArgumentError(EvrepError, ValueError):
    """参数不合法（对应 CLI 退出码 2）"""


class FormatError(EvrepError):
    """文件格式错误（魔数、版本、字段取值非法）"""


class TruncationError(FormatError):
    """记录被截断"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (字节偏移: {offset})")
        self.offset = offset


class ValidationError(EvrepError):
    """事件流不满足不变量"""

    def __init__(self, report: Any):
        self.report = report
        first = report.violations[0].message if report.violations else "未知错误"
        super().__init__(f"事件流校验失败: {first} (共 {len(report.violations)} 处)")


class StudyError(EvrepError):
    """一致性实验中某个样本失败"""

    def __init__(self, message: str, sample: Optional[str] = None):
        self.sample = sample
        prefix = f"[{sample}] " if sample else ""
        super().__init__(f"{prefix}{message}")
