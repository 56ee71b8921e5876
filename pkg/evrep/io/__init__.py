"""
文件格式模块
EVT1 事件流、RGR1 表示网格、图像与 key=value 配置
"""

from .evt1 import (
    read_stream, write_stream, encode_stream, encoded_size,
    read_csv_stream, write_csv_stream, load_stream,
)
from .rgr1 import read_grid, write_grid, encode_grid
from .images import (
    read_pgm, write_pgm, read_raw, write_raw, load_image, read_key_values,
)

__all__ = [
    'read_stream', 'write_stream', 'encode_stream', 'encoded_size',
    'read_csv_stream', 'write_csv_stream', 'load_stream',
    'read_grid', 'write_grid', 'encode_grid',
    'read_pgm', 'write_pgm', 'read_raw', 'write_raw', 'load_image', 'read_key_values',
]
