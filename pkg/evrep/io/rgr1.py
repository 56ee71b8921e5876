"""
RGR1 表示网格二进制格式
文件头：魔数 "RGR1"、类型编号、H、W、C（均 u16）、参数块长度 u16 + UTF-8 key=value 参数；
随后为 C·H·W 个小端 float64，通道优先、行优先
"""

import struct
import logging
from pathlib import Path
from typing import Any, BinaryIO, Dict, Union

import numpy as np

from ..core.exceptions import ArgumentError, FormatError, TruncationError
from ..repr.grid import ReprGrid, ReprKind

logger = logging.getLogger(__name__)

MAGIC = b"RGR1"
HEADER = struct.Struct("<4sHHHHH")
HEADER_SIZE = HEADER.size  # 14
VALUE_DTYPE = np.dtype('<f8')

Source = Union[str, Path, bytes, bytearray, BinaryIO]


def format_params(params: Dict[str, Any], window=None) -> str:
    """参数字典编码为按键排序的 key=value 文本，窗口记为 window_start/window_end"""
    items = dict(params)
    if window is not None:
        items['window_start'] = int(window[0])
        items['window_end'] = int(window[1])

    lines = []
    for key in sorted(items):
        value = items[key]
        if '=' in key or '\n' in key:
            raise ArgumentError(f"参数名非法: {key!r}")
        text = repr(value) if isinstance(value, float) else str(value)
        if '\n' in text:
            raise ArgumentError(f"参数值不能包含换行: {key}")
        lines.append(f"{key}={text}\n")
    return "".join(lines)


def _parse_value(text: str) -> Any:
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def parse_params(text: str) -> Dict[str, Any]:
    """解析 key=value 参数块，数值依次尝试 int、float，否则保留字符串"""
    params: Dict[str, Any] = {}
    for line in text.splitlines():
        if not line:
            continue
        key, sep, value = line.partition('=')
        if not sep:
            raise FormatError(f"参数行缺少 '=': {line!r}")
        params[key] = _parse_value(value)
    return params


def encode_grid(grid: ReprGrid) -> bytes:
    """将表示网格编码为 RGR1 字节串"""
    height, width = grid.geometry
    channels = grid.channels
    if max(height, width, channels) > 0xFFFF:
        raise ArgumentError(f"网格尺寸超出 u16 范围: {grid.data.shape}")

    block = format_params(grid.params, grid.window).encode('utf-8')
    if len(block) > 0xFFFF:
        raise ArgumentError(f"参数块过长: {len(block)} 字节")

    header = HEADER.pack(MAGIC, grid.kind.kind_id, height, width, channels, len(block))
    values = np.ascontiguousarray(np.moveaxis(grid.data, -1, 0), dtype=VALUE_DTYPE)
    return header + block + values.tobytes()


def write_grid(grid: ReprGrid, sink: Union[str, Path, BinaryIO]) -> int:
    """写出 RGR1 网格，返回字节数"""
    payload = encode_grid(grid)
    if isinstance(sink, (str, Path)):
        with open(sink, 'wb') as f:
            f.write(payload)
    else:
        sink.write(payload)
    return len(payload)


def read_grid(source: Source) -> ReprGrid:
    """
    读取 RGR1 网格

    Raises:
        FormatError: 魔数、类型编号或参数块非法
        TruncationError: 数据不完整
    """
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source.read()

    if len(data) < HEADER_SIZE:
        raise TruncationError("RGR1 文件头不完整", offset=len(data))

    magic, kind_id, height, width, channels, block_len = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"魔数错误: {magic!r}")
    try:
        kind = ReprKind.from_id(kind_id)
    except ArgumentError as e:
        raise FormatError(str(e)) from None

    values_offset = HEADER_SIZE + block_len
    if len(data) < values_offset:
        raise TruncationError("RGR1 参数块被截断", offset=len(data))
    try:
        params = parse_params(data[HEADER_SIZE:values_offset].decode('utf-8'))
    except UnicodeDecodeError as e:
        raise FormatError(f"参数块不是合法 UTF-8: {e}") from e

    expected = values_offset + VALUE_DTYPE.itemsize * channels * height * width
    if len(data) < expected:
        complete = (len(data) - values_offset) // VALUE_DTYPE.itemsize
        raise TruncationError(f"第 {complete} 个数值被截断",
                              offset=values_offset + complete * VALUE_DTYPE.itemsize)
    if len(data) > expected:
        raise FormatError(f"文件末尾存在 {len(data) - expected} 字节多余数据")

    values = np.frombuffer(data, dtype=VALUE_DTYPE, count=channels * height * width, offset=values_offset)
    chw = values.reshape(channels, height, width)

    window = (params.pop('window_start', 0), params.pop('window_end', 0))
    logger.debug(f"读取 RGR1: {kind.value} {height}x{width}x{channels}")
    return ReprGrid(kind=kind, data=np.moveaxis(chw, 0, -1), params=params, window=window)
