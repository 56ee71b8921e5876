"""
运行清单
每个输出文件旁写出 <输出>.manifest.json，记录工具版本、命令行、解析后的参数以及输入输出摘要
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

logger = logging.getLogger(__name__)

DIGEST_ALGORITHM = "sha256"
CHUNK_SIZE = 1 << 20

MANIFEST_SUFFIX = ".manifest.json"

PathLike = Union[str, Path]


def file_digest(path: PathLike) -> str:
    """文件摘要，形如 sha256:<64 位十六进制>；按块读取，大文件不整体载入内存"""
    digest = hashlib.new(DIGEST_ALGORITHM)
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(CHUNK_SIZE), b''):
            digest.update(chunk)
    return f"{DIGEST_ALGORITHM}:{digest.hexdigest()}"


@dataclass
class RunManifest:
    """单次命令运行的清单"""
    tool_version: str
    command: List[str]
    params: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)

    def add_inputs(self, paths: Sequence[PathLike]) -> "RunManifest":
        for path in paths:
            self.inputs[str(path)] = file_digest(path)
        return self

    def add_outputs(self, paths: Sequence[PathLike]) -> "RunManifest":
        for path in paths:
            self.outputs[str(path)] = file_digest(path)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def save(self, path: PathLike) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), indent=2, ensure_ascii=False, sort_keys=True),
                        encoding='utf-8')
        logger.debug(f"清单已写出: {path}")
        return path

    @classmethod
    def load(cls, path: PathLike) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text(encoding='utf-8')))


def manifest_path(output: PathLike) -> Path:
    """输出文件对应的清单路径"""
    output = Path(output)
    return output.with_name(output.name + MANIFEST_SUFFIX)
