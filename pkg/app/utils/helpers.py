"""
工具函数模块
提供通用的辅助函数
"""

import csv
import os
import uuid
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from ..core.errors import UsageError


def generate_run_id() -> str:
    """生成唯一运行ID"""
    return str(uuid.uuid4())[:8]


def format_duration(seconds: float) -> str:
    """格式化持续时间"""
    if seconds < 1:
        return f"{seconds * 1000:.1f}ms"
    elif seconds < 60:
        return f"{seconds:.2f}s"
    elif seconds < 3600:
        minutes = int(seconds // 60)
        remaining_seconds = seconds % 60
        return f"{minutes}m {remaining_seconds:.1f}s"
    else:
        hours = int(seconds // 3600)
        remaining_minutes = int((seconds % 3600) // 60)
        return f"{hours}h {remaining_minutes}m"


def format_float(value: float) -> str:
    """17 位有效数字，保证读回后逐位相同"""
    return f"{float(value):.17g}"


def log_grid(lo: float, hi: float, samples: int) -> np.ndarray:
    """[lo, hi] 上的对数等距网格，包含两端"""
    if samples < 1:
        raise UsageError(f"采样数必须 ≥ 1: {samples}")
    if not 0 < lo <= hi:
        raise UsageError(f"要求 0 < rmin ≤ rmax，实际为 [{lo}, {hi}]")
    if samples == 1:
        return np.array([hi])
    return np.geomspace(lo, hi, samples)


def parse_name_list(raw: str, allowed: Sequence[str], what: str = "名称") -> List[str]:
    """逗号分隔的名称列表，未知名称报 UsageError"""
    names = [name.strip() for name in raw.split(",") if name.strip()]
    if not names:
        raise UsageError(f"{what}列表为空")
    unknown = [name for name in names if name not in allowed]
    if unknown:
        raise UsageError(f"未知{what}: {unknown}", known=list(allowed))
    return names


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[float]]) -> int:
    """写入 UTF-8 CSV，'\\n' 换行，浮点数按 17 位有效数字；返回数据行数"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) for v in row])
            count += 1
    return count

