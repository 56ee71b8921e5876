"""
evrep 日志配置

库代码只通过 logging.getLogger(__name__) 取记录器，setup_logging 只在命令行入口调用。
控制台日志写到 stderr，stdout 留给命令结果。
"""

import functools
import logging
import sys
import time
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional

try:
    import colorlog
    COLORLOG_AVAILABLE = True
except ImportError:
    COLORLOG_AVAILABLE = False

DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s'
CONSOLE_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

# 调试时这些库的日志只会淹没实验输出
NOISY_LOGGERS = ('PIL', 'matplotlib')


def _console_formatter() -> logging.Formatter:
    if COLORLOG_AVAILABLE:
        return colorlog.ColoredFormatter(
            '%(log_color)s%(asctime)s - %(levelname)s%(reset)s - %(message)s',
            datefmt=DATE_FORMAT,
        )
    return logging.Formatter(CONSOLE_FORMAT, datefmt=DATE_FORMAT)


def setup_logging(
    level: str = "INFO",
    log_file: Optional[str] = "logs/evrep.log",
    max_file_size: int = 10 * 1024 * 1024,
    backup_count: int = 5,
    enable_console: bool = True,
    enable_file: bool = False,
) -> None:
    """
    配置根日志记录器。

    Args:
        level: 日志级别 (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: 滚动日志文件路径，目录不存在时自动创建
        max_file_size: 单个日志文件的最大大小（字节）
        backup_count: 保留的日志文件数量
        enable_console: 是否输出到 stderr
        enable_file: 是否写日志文件
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)
    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)

    # 重复调用时替换而不是叠加处理器
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
        handler.close()

    if enable_console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(_console_formatter())
        console_handler.setLevel(numeric_level)
        root_logger.addHandler(console_handler)

    if enable_file and log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(path, maxBytes=max_file_size,
                                           backupCount=backup_count, encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt=DATE_FORMAT))
        file_handler.setLevel(numeric_level)
        root_logger.addHandler(file_handler)
        root_logger.info(f"日志文件: {path}")

    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(max(numeric_level, logging.WARNING))


def log_performance(logger: Optional[logging.Logger] = None, level: int = logging.DEBUG):
    """
    记录函数耗时的装饰器，异常照常抛出

    使用示例:
        @log_performance()
        def neighborhood_stats(stream, rho):
            ...
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            log = logger or logging.getLogger(func.__module__)
            started = time.perf_counter()
            log.log(level, f"开始执行: {func.__name__}")
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                log.error(f"执行失败: {func.__name__}, 耗时: {time.perf_counter() - started:.3f}秒, 错误: {e}")
                raise
            log.log(level, f"执行完成: {func.__name__}, 耗时: {time.perf_counter() - started:.3f}秒")
            return result

        return wrapper
    return decorator


class StudyLogger:
    """一致性实验业务日志记录器"""

    def __init__(self, name: str = "evrep.study"):
        self.logger = logging.getLogger(name)

    def log_generation(self, sample: str, variant: str, n_events: int, duration: float):
        """记录一次事件生成"""
        self.logger.info(f"事件生成: {sample} | 配置: {variant} | 事件数: {n_events} | 耗时: {duration:.3f}s")

    def log_representation(self, kind: str, params: Dict[str, Any]):
        self.logger.debug(f"计算表示: {kind} | 参数: {params}")

    def log_sample(self, sample: str, variant: str, kind: str, ssim: float):
        self.logger.debug(f"SSIM: {sample} | {variant} | {kind} = {ssim:.6f}")

    def log_error(self, operation: str, error: str, context: Optional[Dict[str, Any]] = None):
        """记录样本失败，实验本身继续"""
        context_str = f" | 上下文: {context}" if context else ""
        self.logger.error(f"操作失败: {operation} | 错误: {error}{context_str}")

    def log_performance(self, operation: str, duration: float, details: Optional[Dict[str, Any]] = None):
        details_str = f" | 详情: {details}" if details else ""
        self.logger.info(f"性能指标: {operation} | 耗时: {duration:.3f}s{details_str}")


study_logger = StudyLogger()
