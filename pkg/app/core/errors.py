"""
错误类型模块
所有数值与几何前置条件失败都映射为带类型和退出码的异常
"""

from typing import Any, Dict, Optional


class WPBoundsError(ValueError):
    """基础错误"""

    error_type = "error"
    exit_code = 2

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        """标准错误载荷"""
        payload: Dict[str, Any] = {
            "message": self.message,
            "type": self.error_type,
            "code": self.exit_code,
        }
        if self.context:
            payload["context"] = self.context
        return {"error": payload}


class DomainError(WPBoundsError):
    """参数不在函数或区域的定义域内"""

    error_type = "domain_error"


class RangeError(WPBoundsError):
    """目标值不在函数值域内"""

    error_type = "range_error"


class InconclusiveError(WPBoundsError):
    """数值过程未能在预算内收敛"""

    error_type = "inconclusive"
    exit_code = 3

    def __init__(self, message: str, achieved: Optional[float] = None, **context: Any):
        super().__init__(message, achieved=achieved, **context)
        self.achieved = achieved


class InfiniteWeightError(WPBoundsError):
    """尖点上非正模式的 L2 权重为无穷"""

    error_type = "infinite_weight"


class HypothesisError(WPBoundsError):
    """定理假设不成立 (例如 systole 超过 2ε₂)"""

    error_type = "out_of_hypothesis"


class UsageError(WPBoundsError):
    """命令行参数错误"""

    error_type = "usage_error"
