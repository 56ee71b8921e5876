"""
排序归一化
占用位置按键值升序获得秩 1..m，未占用位置为 0，结果除以 m

同值按 (p, y, x) 字典序（即通道优先的扁平下标）打破。浮点键先做一次排序，
相邻差值落在容差内的连续段再用精确有理数键重排，保证结果与时间轴仿射变换无关。
"""

from fractions import Fraction
from typing import Callable, List, Optional

import numpy as np

NEAR_TIE_TOLERANCE = 1e-12

ExactKey = Callable[[np.ndarray], List[Fraction]]


def _refine_near_ties(order: np.ndarray, sorted_keys: np.ndarray, exact_key: ExactKey,
                      sorted_groups: Optional[np.ndarray] = None) -> np.ndarray:
    """对浮点近似相等的连续段按精确键重排"""
    if len(order) < 2:
        return order

    scale = max(1.0, float(np.abs(sorted_keys).max()))
    close = np.diff(sorted_keys) <= NEAR_TIE_TOLERANCE * scale
    if sorted_groups is not None:
        close &= sorted_groups[1:] == sorted_groups[:-1]
    if not close.any():
        return order

    starts = np.flatnonzero(np.concatenate(([True], ~close)))
    ends = np.append(starts[1:], len(order))
    runs = (ends - starts) > 1

    order = order.copy()
    for start, end in zip(starts[runs].tolist(), ends[runs].tolist()):
        members = order[start:end]
        exact = exact_key(members)
        member_list = members.tolist()
        # 压缩下标升序即扁平下标升序
        ranked = sorted(range(len(member_list)), key=lambda i: (exact[i], member_list[i]))
        order[start:end] = members[ranked]
    return order


def rank_normalize(keys: np.ndarray, occupied: np.ndarray,
                   exact_key: Optional[ExactKey] = None,
                   groups: Optional[np.ndarray] = None) -> np.ndarray:
    """
    排序归一化

    Args:
        keys: C×H×W 键值网格
        occupied: C×H×W 布尔网格
        exact_key: 给定压缩下标返回精确有理数键，浮点键时用于重排近似并列
        groups: C×H×W 分组编号，给定时在组内分别排序归一化

    Returns:
        np.ndarray: C×H×W 的 [0, 1] 网格
    """
    flat_index = np.flatnonzero(occupied.ravel())
    values = np.zeros(keys.size, dtype=np.float64)
    m = len(flat_index)
    if m == 0:
        return values.reshape(keys.shape)

    compact_keys = keys.ravel()[flat_index]

    if groups is None:
        order = np.argsort(compact_keys, kind='stable')
        if exact_key is not None:
            order = _refine_near_ties(order, compact_keys[order], exact_key)
        values[flat_index[order]] = np.arange(1, m + 1, dtype=np.float64) / m
        return values.reshape(keys.shape)

    compact_groups = groups.ravel()[flat_index]
    order = np.lexsort((compact_keys, compact_groups))
    if exact_key is not None:
        order = _refine_near_ties(order, compact_keys[order], exact_key, compact_groups[order])

    sorted_groups = compact_groups[order]
    boundaries = np.flatnonzero(np.concatenate(([True], sorted_groups[1:] != sorted_groups[:-1])))
    sizes = np.diff(np.append(boundaries, m))
    group_start = np.repeat(boundaries, sizes)
    group_size = np.repeat(sizes, sizes)
    ranks = np.arange(m) - group_start + 1

    values[flat_index[order]] = ranks / group_size
    return values.reshape(keys.shape)
