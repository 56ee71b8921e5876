"""
报告格式化器
一致性报告导出为 CSV 与 JSON，两种格式都带格式版本号
"""

import io
import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, Union

import pandas as pd

from .consistency import ConsistencyReport

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['kind', 'variant', 'group', 'mean_ssim', 'n']


class ReportFormatter(ABC):
    """报告格式化器抽象基类"""

    suffix = ""

    @abstractmethod
    def format(self, report: ConsistencyReport, **kwargs) -> str:
        """格式化报告"""
        pass


class CSVFormatter(ReportFormatter):
    """
    CSV 格式化器

    首行为 "# format_version=N" 注释，随后是 kind,variant,group,mean_ssim,n 表格；
    读取时使用 pandas.read_csv(..., comment='#')。
    """

    suffix = ".csv"

    def format(self, report: ConsistencyReport, **kwargs) -> str:
        frame = pd.DataFrame([
            {'kind': e.kind, 'variant': e.variant, 'group': e.group,
             'mean_ssim': e.mean_ssim, 'n': e.n}
            for e in report.entries
        ], columns=CSV_COLUMNS)

        output = io.StringIO()
        output.write(f"# format_version={report.version}\n")
        frame.to_csv(output, index=False, float_format=kwargs.get('float_format'))
        return output.getvalue()


class JSONFormatter(ReportFormatter):
    """JSON 格式化器，结构与 ConsistencyReport 一致"""

    suffix = ".json"

    def format(self, report: ConsistencyReport, **kwargs) -> str:
        document = report.to_dict()
        tool_version = kwargs.get('tool_version')
        if tool_version:
            document['tool_version'] = tool_version
        return json.dumps(document, indent=kwargs.get('indent', 2), ensure_ascii=False)


FORMATTERS: Dict[str, ReportFormatter] = {
    'csv': CSVFormatter(),
    'json': JSONFormatter(),
}


def export_report(report: ConsistencyReport, out_dir: Union[str, Path],
                  stem: str = "report", **kwargs) -> Dict[str, Path]:
    """
    写出全部格式的报告

    Returns:
        {格式名: 文件路径}
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    written = {}
    for name, formatter in FORMATTERS.items():
        path = out_dir / f"{stem}{formatter.suffix}"
        path.write_text(formatter.format(report, **kwargs), encoding='utf-8')
        written[name] = path
        logger.info(f"报告已写出: {path}")
    return written
