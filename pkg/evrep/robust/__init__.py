"""
鲁棒性模块
SSIM 与表示一致性实验
"""

from .ssim import SsimParams, ssim, ssim_map
from .consistency import (
    StudyParams, ReportEntry, GroupEntry, ConsistencyReport, ConsistencyStudy,
    consistency_study, DEFAULT_KINDS, EXCLUDED_KINDS, REPORT_VERSION, STUDY_ALPHA,
)
from .formatters import ReportFormatter, CSVFormatter, JSONFormatter, export_report

__all__ = [
    'SsimParams', 'ssim', 'ssim_map',
    'StudyParams', 'ReportEntry', 'GroupEntry', 'ConsistencyReport', 'ConsistencyStudy',
    'consistency_study', 'DEFAULT_KINDS', 'EXCLUDED_KINDS', 'REPORT_VERSION', 'STUDY_ALPHA',
    'ReportFormatter', 'CSVFormatter', 'JSONFormatter', 'export_report',
]
