"""
命令行模块
"""

from .main import main, run
from .manifest import RunManifest, file_digest, manifest_path

__all__ = ['main', 'run', 'RunManifest', 'file_digest', 'manifest_path']
