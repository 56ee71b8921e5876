"""
表示模块
邻域统计与九种事件表示
"""

from .grid import ReprKind, ReprGrid, polarity_channel
from .neighborhood import NeighborhoodStats, EMPTY, compute_stats, pixel_stats
from .representations import (
    binary_event_image, event_histogram, timestamp_image, event_image,
    time_surface, hats_surface, discount_grid, dit, dist, sorted_time_surface,
    DEFAULT_ALPHA, DEFAULT_RHO, DEFAULT_TAU, DEFAULT_CELL,
)
from .factory import RepresentationFactory

# 注册表示
RepresentationFactory.register_kind(ReprKind.BINARY, binary_event_image)
RepresentationFactory.register_kind(ReprKind.HISTOGRAM, event_histogram)
RepresentationFactory.register_kind(ReprKind.TIMESTAMP, timestamp_image)
RepresentationFactory.register_kind(ReprKind.EVENT_IMAGE, event_image)
RepresentationFactory.register_kind(ReprKind.TIME_SURFACE, time_surface, ('tau',))
RepresentationFactory.register_kind(ReprKind.HATS, hats_surface, ('cell', 'tau'))
RepresentationFactory.register_kind(ReprKind.SORTED_TS, sorted_time_surface, ('patch',))
RepresentationFactory.register_kind(ReprKind.DIT, dit, ('alpha', 'rho'))
RepresentationFactory.register_kind(ReprKind.DIST, dist, ('alpha', 'rho'))
RepresentationFactory.register_kind(ReprKind.DISCOUNT, discount_grid, ('rho',))

__all__ = [
    'ReprKind', 'ReprGrid', 'polarity_channel',
    'NeighborhoodStats', 'EMPTY', 'compute_stats', 'pixel_stats',
    'binary_event_image', 'event_histogram', 'timestamp_image', 'event_image',
    'time_surface', 'hats_surface', 'discount_grid', 'dit', 'dist', 'sorted_time_surface',
    'DEFAULT_ALPHA', 'DEFAULT_RHO', 'DEFAULT_TAU', 'DEFAULT_CELL',
    'RepresentationFactory',
]
