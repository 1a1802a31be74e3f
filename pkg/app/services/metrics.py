"""
指标统计服务
跟踪认证检查与随机试验的耗时和结论分布
"""

import time
from collections import defaultdict, deque
from dataclasses import dataclass
from threading import Lock
from typing import Dict, Optional


@dataclass
class CheckMetrics:
    """单次检查指标"""
    check_id: str
    kind: str
    start_time: float
    end_time: Optional[float] = None
    status: str = "pending"
    cells: int = 0

    @property
    def duration(self) -> float:
        """检查耗时"""
        if self.end_time is None:
            return time.time() - self.start_time
        return self.end_time - self.start_time


class MetricsCollector:
    """指标收集器"""

    def __init__(self, max_history: int = 10000):
        self.max_history = max_history
        self._lock = Lock()

        # 进行中的检查
        self._active: Dict[str, CheckMetrics] = {}

        # 已完成检查历史（使用deque限制大小）
        self._completed: deque = deque(maxlen=max_history)

        # 聚合统计
        self._total = 0
        self._total_duration = 0.0
        self._status_counts: Dict[str, int] = defaultdict(int)
        self._kind_counts: Dict[str, int] = defaultdict(int)
        self._started_at = time.time()

    def start_check(self, check_id: str, kind: str) -> CheckMetrics:
        """开始记录检查"""
        with self._lock:
            metrics = CheckMetrics(check_id=check_id, kind=kind, start_time=time.time())
            self._active[check_id] = metrics
            return metrics

    def complete_check(self, check_id: str, status: str, cells: int = 0) -> Optional[CheckMetrics]:
        """完成检查记录"""
        with self._lock:
            metrics = self._active.pop(check_id, None)
            if metrics is None:
                return None
            metrics.end_time = time.time()
            metrics.status = status
            metrics.cells = cells

            self._completed.append(metrics)
            self._total += 1
            self._total_duration += metrics.duration
            self._status_counts[status] += 1
            self._kind_counts[metrics.kind] += 1
            return metrics

    def get_current_stats(self) -> Dict:
        """获取当前统计数据"""
        with self._lock:
            return {
                "total_checks": self._total,
                "active_checks": len(self._active),
                "average_duration": self._total_duration / self._total if self._total else 0.0,
                "status_counts": dict(self._status_counts),
                "kinds": dict(self._kind_counts),
                "wall_time": time.time() - self._started_at,
            }

    def get_kind_stats(self) -> Dict[str, Dict]:
        """按检查类型分组的统计"""
        with self._lock:
            stats: Dict[str, Dict] = {}
            for item in self._completed:
                entry = stats.setdefault(item.kind, {"checks": 0, "total_duration": 0.0, "cells": 0})
                entry["checks"] += 1
                entry["total_duration"] += item.duration
                entry["cells"] += item.cells
            for entry in stats.values():
                entry["average_duration"] = entry["total_duration"] / entry["checks"]
            return stats

    def reset_stats(self) -> None:
        """重置所有统计数据"""
        with self._lock:
            self._active.clear()
            self._completed.clear()
            self._total = 0
            self._total_duration = 0.0
            self._status_counts.clear()
            self._kind_counts.clear()
            self._started_at = time.time()


# 全局指标收集器实例
metrics_collector = MetricsCollector()
