"""
图像与配置文件读写
PGM (P5, 8 位灰度)、原始 float32 网格（.f32）以及 UTF-8 key=value 配置文件
"""

import struct
import logging
from pathlib import Path
from typing import Dict, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..core.exceptions import ArgumentError, FormatError, TruncationError

logger = logging.getLogger(__name__)

# 原始网格头：H u32, W u32，随后 H·W 个小端 float32
RAW_HEADER = struct.Struct("<II")
RAW_SUFFIXES = ('.f32', '.raw')
PGM_SUFFIXES = ('.pgm',)

PathLike = Union[str, Path]


def read_pgm(path: PathLike) -> np.ndarray:
    """读取 8 位灰度 PGM，返回 [0, 1] 的 float64 强度网格"""
    try:
        with Image.open(path) as img:
            if img.mode != 'L':
                raise FormatError(f"仅支持 8 位灰度 PGM: {path} (mode={img.mode})")
            pixels = np.asarray(img, dtype=np.float64)
    except UnidentifiedImageError as e:
        raise FormatError(f"无法识别的图像文件: {path}") from e
    return pixels / 255.0


def write_pgm(image: np.ndarray, path: PathLike) -> None:
    """写出 8 位灰度 PGM（强度按 [0, 1] 截断后量化）"""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise ArgumentError(f"PGM 只能保存二维图像: {image.shape}")
    pixels = np.rint(np.clip(image, 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(pixels).save(path, format='PPM')


def read_raw(path: PathLike) -> np.ndarray:
    """读取原始 float32 网格"""
    data = Path(path).read_bytes()
    if len(data) < RAW_HEADER.size:
        raise TruncationError("原始网格文件头不完整", offset=len(data))
    height, width = RAW_HEADER.unpack_from(data, 0)
    expected = RAW_HEADER.size + 4 * height * width
    if len(data) != expected:
        raise TruncationError(f"原始网格长度应为 {expected} 字节", offset=len(data))
    values = np.frombuffer(data, dtype='<f4', count=height * width, offset=RAW_HEADER.size)
    return values.reshape(height, width).astype(np.float64)


def write_raw(image: np.ndarray, path: PathLike) -> int:
    """写出原始 float32 网格，返回字节数"""
    image = np.asarray(image)
    if image.ndim != 2:
        raise ArgumentError(f"原始网格只能保存二维图像: {image.shape}")
    payload = RAW_HEADER.pack(*image.shape) + np.ascontiguousarray(image, dtype='<f4').tobytes()
    Path(path).write_bytes(payload)
    return len(payload)


def load_image(path: PathLike) -> np.ndarray:
    """按扩展名读取强度图像"""
    suffix = Path(path).suffix.lower()
    if suffix in PGM_SUFFIXES:
        image = read_pgm(path)
    elif suffix in RAW_SUFFIXES:
        image = read_raw(path)
    else:
        raise ArgumentError(f"不支持的图像格式: {suffix} (可选: .pgm, .f32, .raw)")

    if not np.all(np.isfinite(image)) or image.min(initial=0.0) < 0.0 or image.max(initial=0.0) > 1.0:
        raise FormatError(f"图像强度必须位于 [0, 1]: {path}")
    return image


def read_key_values(path: PathLike) -> Dict[str, str]:
    """
    读取 UTF-8 key=value 配置文件

    空行与 # 开头的行忽略，键值两侧空白去除。
    """
    entries: Dict[str, str] = {}
    text = Path(path).read_text(encoding='utf-8')
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        key, sep, value = line.partition('=')
        if not sep or not key.strip():
            raise FormatError(f"{path}:{number} 不是 key=value 格式: {raw!r}")
        entries[key.strip()] = value.strip()
    return entries
