"""
区间算术模块
端点运算 + 每个基本运算外扩若干 ulp，用于保守的函数值域包络
"""

import math
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

from ..core.config import settings
from ..core.errors import DomainError

Number = Union[int, float]


def _ulps() -> int:
    return settings.inflation_ulps


def round_down(x: float) -> float:
    """向下外扩"""
    if math.isinf(x) or math.isnan(x):
        return x
    return x - _ulps() * math.ulp(x)


def round_up(x: float) -> float:
    """向上外扩"""
    if math.isinf(x) or math.isnan(x):
        return x
    return x + _ulps() * math.ulp(x)


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class Interval:
    """闭区间 [lo, hi]"""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise DomainError("区间端点为 NaN", lo=self.lo, hi=self.hi)
        if self.lo > self.hi:
            raise DomainError(f"区间端点无序: [{self.lo}, {self.hi}]", lo=self.lo, hi=self.hi)

    @classmethod
    def point(cls, x: Number) -> "Interval":
        return cls(float(x), float(x))

    @classmethod
    def around(cls, x: float) -> "Interval":
        """包含一个已正确舍入的双精度常数的区间"""
        return cls(round_down(x), round_up(x))

    @classmethod
    def outward(cls, lo: float, hi: float) -> "Interval":
        return cls(round_down(lo), round_up(hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: Number) -> bool:
        return self.lo <= x <= self.hi

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def split(self) -> Tuple["Interval", "Interval"]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    def as_list(self) -> list:
        return [self.lo, self.hi]

    # 算术运算

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other: Union["Interval", Number]) -> "Interval":
        o = _coerce(other)
        return Interval.outward(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other: Union["Interval", Number]) -> "Interval":
        o = _coerce(other)
        return Interval.outward(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other: Number) -> "Interval":
        return _coerce(other) - self

    def __mul__(self, other: Union["Interval", Number]) -> "Interval":
        o = _coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        products = tuple(0.0 if math.isnan(p) else p for p in products)
        return Interval.outward(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: Union["Interval", Number]) -> "Interval":
        return self * reciprocal(_coerce(other))

    def __rtruediv__(self, other: Number) -> "Interval":
        return _coerce(other) * reciprocal(self)

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int) or k < 0:
            raise DomainError("只支持非负整数幂", exponent=k)
        if k == 0:
            return Interval.point(1.0)
        if k % 2 == 0:
            a = magnitude(self)
            return Interval.outward(a.lo ** k, a.hi ** k)
        return Interval.outward(self.lo ** k, self.hi ** k)


def _coerce(x: Union[Interval, Number]) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


def magnitude(x: Interval) -> Interval:
    """|x| 的值域"""
    if x.lo >= 0:
        return x
    if x.hi <= 0:
        return -x
    return Interval(0.0, max(-x.lo, x.hi))


def reciprocal(x: Interval) -> Interval:
    if x.lo <= 0 <= x.hi:
        raise DomainError(f"除数区间包含 0: [{x.lo}, {x.hi}]")
    return Interval.outward(1.0 / x.hi, 1.0 / x.lo)


def hull(intervals: Iterable[Interval]) -> Interval:
    items = list(intervals)
    return Interval(min(i.lo for i in items), max(i.hi for i in items))


def imin(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lo, b.lo), min(a.hi, b.hi))


def imax(a: Interval, b: Interval) -> Interval:
    return Interval(max(a.lo, b.lo), max(a.hi, b.hi))


# 单调初等函数

def exp(x: Interval) -> Interval:
    return Interval(max(0.0, round_down(math.exp(x.lo))) if x.lo > -745.0 else 0.0,
                    round_up(_safe_exp(x.hi)))


def log(x: Interval) -> Interval:
    if x.lo <= 0:
        raise DomainError(f"log 的参数区间必须为正: [{x.lo}, {x.hi}]")
    return Interval.outward(math.log(x.lo), math.log(x.hi))


def sqrt(x: Interval) -> Interval:
    if x.hi < 0:
        raise DomainError(f"sqrt 的参数区间为负: [{x.lo}, {x.hi}]")
    # 外扩带来的微小负下端按 0 处理
    return Interval(max(0.0, round_down(math.sqrt(max(x.lo, 0.0)))), round_up(math.sqrt(x.hi)))


def sinh(x: Interval) -> Interval:
    return Interval.outward(math.sinh(x.lo), math.sinh(x.hi))


def cosh(x: Interval) -> Interval:
    a = magnitude(x)
    return Interval(max(1.0, round_down(math.cosh(a.lo))), round_up(math.cosh(a.hi)))


def tanh(x: Interval) -> Interval:
    return Interval(max(-1.0, round_down(math.tanh(x.lo))), min(1.0, round_up(math.tanh(x.hi))))


def sech(x: Interval) -> Interval:
    r = reciprocal(cosh(x))
    return Interval(max(0.0, r.lo), min(1.0, r.hi))


def arcsinh(x: Interval) -> Interval:
    return Interval.outward(math.asinh(x.lo), math.asinh(x.hi))


def arccos(x: Interval) -> Interval:
    if x.lo > 1.0 or x.hi < -1.0:
        raise DomainError(f"arccos 的参数区间超出 [-1, 1]: [{x.lo}, {x.hi}]")
    lo, hi = max(x.lo, -1.0), min(x.hi, 1.0)
    return Interval(max(0.0, round_down(math.acos(hi))), round_up(math.acos(lo)))


def arctanh(x: Interval) -> Interval:
    if x.lo <= -1.0 or x.hi >= 1.0:
        raise DomainError(f"arctanh 的参数区间超出 (-1, 1): [{x.lo}, {x.hi}]")
    return Interval.outward(math.atanh(x.lo), math.atanh(x.hi))


def cos(x: Interval) -> Interval:
    """一般区间上的 cos，显式处理区间内的极值点 kπ"""
    if x.width >= 2 * math.pi:
        return Interval(-1.0, 1.0)
    lo_val, hi_val = math.cos(x.lo), math.cos(x.hi)
    lo, hi = min(lo_val, hi_val), max(lo_val, hi_val)
    k_start = math.ceil(round_down(x.lo) / math.pi)
    k_end = math.floor(round_up(x.hi) / math.pi)
    for k in range(k_start, k_end + 1):
        if k % 2 == 0:
            hi = 1.0
        else:
            lo = -1.0
    return Interval(max(-1.0, round_down(lo)), min(1.0, round_up(hi)))


def sin(x: Interval) -> Interval:
    return cos(x - half_pi())


# 常数

def pi() -> Interval:
    return Interval.around(math.pi)


def half_pi() -> Interval:
    return Interval.around(math.pi / 2)
