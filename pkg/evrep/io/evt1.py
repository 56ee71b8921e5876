"""
EVT1 事件流二进制格式
小端序：24 字节文件头 + 每事件 13 字节记录；另提供 CSV 导入导出
"""

import io
import struct
import logging
from pathlib import Path
from typing import BinaryIO, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..core.events import EventStream, validate
from ..core.exceptions import ArgumentError, FormatError, TruncationError, ValidationError

logger = logging.getLogger(__name__)

MAGIC = b"EVT1"
VERSION = 1
HEADER = struct.Struct("<4sHHHHIII")
HEADER_SIZE = HEADER.size  # 24
RECORD_DTYPE = np.dtype([('x', '<u2'), ('y', '<u2'), ('t', '<i8'), ('p', 'i1')])
RECORD_SIZE = RECORD_DTYPE.itemsize  # 13
CSV_COLUMNS = ['x', 'y', 't', 'p']

Source = Union[str, Path, bytes, bytearray, BinaryIO]


def _read_source(source: Source) -> bytes:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source)
    if isinstance(source, (str, Path)):
        return Path(source).read_bytes()
    return source.read()


def _write_sink(sink: Union[str, Path, BinaryIO], payload: bytes) -> None:
    if isinstance(sink, (str, Path)):
        with open(sink, 'wb') as f:
            f.write(payload)
    else:
        sink.write(payload)


def encoded_size(n_events: int) -> int:
    """EVT1 文件字节数"""
    return HEADER_SIZE + RECORD_SIZE * n_events


def read_stream(source: Source) -> EventStream:
    """
    读取 EVT1 事件流

    Args:
        source: 文件路径、字节串或二进制文件对象

    Returns:
        EventStream: 通过校验的事件流；t_end 取 max(t_start, 最后事件时间)

    Raises:
        FormatError: 文件头非法或极性取值非法
        TruncationError: 记录被截断
        ValidationError: 事件流违反不变量
    """
    data = _read_source(source)

    if len(data) < HEADER_SIZE:
        raise TruncationError("EVT1 文件头不完整", offset=len(data))

    magic, version, flags, height, width, n_events, t_lo, t_hi = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"魔数错误: {magic!r}")
    if version != VERSION:
        raise FormatError(f"不支持的版本: {version}")
    if flags != 0:
        raise FormatError(f"flags 必须为 0: {flags}")

    t_start = int(np.array([t_lo | (t_hi << 32)], dtype=np.uint64).view(np.int64)[0])

    expected = encoded_size(n_events)
    if len(data) < expected:
        complete = (len(data) - HEADER_SIZE) // RECORD_SIZE
        raise TruncationError(f"第 {complete} 条记录被截断", offset=HEADER_SIZE + complete * RECORD_SIZE)
    if len(data) > expected:
        raise FormatError(f"文件末尾存在 {len(data) - expected} 字节多余数据")

    records = np.frombuffer(data, dtype=RECORD_DTYPE, count=n_events, offset=HEADER_SIZE)
    bad = np.flatnonzero((records['p'] != 1) & (records['p'] != -1))
    if len(bad):
        raise FormatError(f"极性取值非法 {int(records['p'][bad[0]])} at index {int(bad[0])}")

    t = records['t'].astype(np.int64)
    t_end = max(t_start, int(t[-1])) if n_events else t_start

    stream = EventStream(
        geometry=(height, width),
        x=records['x'], y=records['y'], t=t, p=records['p'],
        t_start=t_start, t_end=t_end
    )

    report = validate(stream)
    if not report.is_valid:
        raise ValidationError(report)

    logger.debug(f"读取 EVT1: {n_events} 个事件, 尺寸 {height}x{width}")
    return stream


def encode_stream(stream: EventStream) -> bytes:
    """将事件流编码为 EVT1 字节串"""
    report = validate(stream)
    if not report.is_valid:
        raise ValidationError(report)

    height, width = stream.geometry
    if height > 0xFFFF or width > 0xFFFF:
        raise ArgumentError(f"传感器尺寸超出 u16 范围: {stream.geometry}")

    n_events = len(stream)
    if n_events and stream.t_end != int(stream.t[-1]):
        logger.debug(f"EVT1 不保存 t_end，读回时 t_end={int(stream.t[-1])} (原值 {stream.t_end})")

    t_bits = int(np.array([stream.t_start], dtype=np.int64).view(np.uint64)[0])
    header = HEADER.pack(MAGIC, VERSION, 0, height, width, n_events,
                         t_bits & 0xFFFFFFFF, t_bits >> 32)

    records = np.empty(n_events, dtype=RECORD_DTYPE)
    records['x'] = stream.x
    records['y'] = stream.y
    records['t'] = stream.t
    records['p'] = stream.p
    return header + records.tobytes()


def write_stream(stream: EventStream, sink: Union[str, Path, BinaryIO]) -> int:
    """
    写出 EVT1 事件流

    Returns:
        int: 写出的字节数（24 + 13n）

    Raises:
        ValidationError: 事件流不合法
        OSError: 写入失败
    """
    payload = encode_stream(stream)
    _write_sink(sink, payload)
    return len(payload)


def read_csv_stream(source: Union[str, Path, io.TextIOBase], geometry: Tuple[int, int],
                    t_start: Optional[int] = None, t_end: Optional[int] = None) -> EventStream:
    """
    读取 CSV 事件（表头 x,y,t,p）

    CSV 不含传感器尺寸，需显式给出；窗口默认取首末事件时间。
    """
    try:
        frame = pd.read_csv(source, dtype='int64')
    except ValueError as e:
        raise FormatError(f"CSV 解析失败: {e}") from e

    if list(frame.columns) != CSV_COLUMNS:
        raise FormatError(f"CSV 表头必须为 {','.join(CSV_COLUMNS)}: {list(frame.columns)}")

    t = frame['t'].to_numpy()
    if t_start is None:
        t_start = int(t[0]) if len(t) else 0
    if t_end is None:
        t_end = int(t[-1]) if len(t) else t_start

    stream = EventStream(
        geometry=geometry,
        x=frame['x'].to_numpy(), y=frame['y'].to_numpy(), t=t, p=frame['p'].to_numpy(),
        t_start=t_start, t_end=t_end
    )

    report = validate(stream)
    if not report.is_valid:
        raise ValidationError(report)
    return stream


def write_csv_stream(stream: EventStream, sink: Union[str, Path, io.TextIOBase]) -> int:
    """写出 CSV 事件，返回事件数"""
    frame = pd.DataFrame({
        'x': stream.x, 'y': stream.y, 't': stream.t, 'p': stream.p.astype(np.int64)
    }, columns=CSV_COLUMNS)
    frame.to_csv(sink, index=False)
    return len(frame)


def load_stream(path: Union[str, Path], geometry: Optional[Tuple[int, int]] = None) -> EventStream:
    """按扩展名读取事件流（.csv 需要 geometry，其余按 EVT1）"""
    path = Path(path)
    if path.suffix.lower() == '.csv':
        if geometry is None:
            raise ArgumentError("读取 CSV 事件需要指定传感器尺寸")
        return read_csv_stream(path, geometry)
    return read_stream(path)
