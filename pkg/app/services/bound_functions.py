"""
界函数服务
所有具名标量函数与常数的点值计算、区间包络以及导数包络

点值函数接受标量或 numpy 数组；区间包络函数接受 Interval。
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import optimize

from ..core.config import settings
from ..core.errors import DomainError, InconclusiveError, RangeError
from ..core.logging import system_logger
from ..utils import interval as iv
from ..utils.interval import Interval

ArrayLike = Union[float, np.ndarray]

# Margulis 常数 ε₂ = arcsinh(1) 与 ε̄₂ = log(3)/2
EPS2 = math.asinh(1.0)
EPS2_BAR = math.log(3.0) / 2.0

# 打印值：上确界界常数
M0 = 0.9137
MPRIME0 = 1.2333

SQRT3 = math.sqrt(3.0)
PI_SQRT3 = math.pi * SQRT3


@dataclass(frozen=True)
class PublishedConstants:
    """由界函数重新计算得到的常数表"""

    eps2: float
    eps2bar: float
    m0: float
    mprime0: float
    K0: float
    c_eps2: float
    c_eps2bar: float


@lru_cache(maxsize=1)
def published_constants() -> PublishedConstants:
    return PublishedConstants(
        eps2=EPS2,
        eps2bar=EPS2_BAR,
        m0=M0,
        mprime0=MPRIME0,
        K0=2.0 * M0 ** 2,
        c_eps2=c_teo(EPS2),
        c_eps2bar=c_teo(EPS2_BAR),
    )


def _domain(x: ArrayLike, name: str, lo: float = 0.0, hi: float = math.inf,
            lo_open: bool = True) -> np.ndarray:
    """检查定义域 (lo, hi] 或 [lo, hi]，返回 float 数组"""
    arr = np.asarray(x, dtype=float)
    below = arr <= lo if lo_open else arr < lo
    bad = below | (arr > hi) | np.isnan(arr)
    if np.any(bad):
        offending = arr[bad] if arr.ndim else arr
        left = "(" if lo_open else "["
        raise DomainError(f"{name} 的参数超出定义域 {left}{lo}, {hi}]: {np.ravel(offending)[:3].tolist()}")
    return arr


def _out(arr: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(arr) if np.ndim(like) == 0 else arr


def _sech6_complement(t: np.ndarray) -> np.ndarray:
    # 1 - sech⁶ = 1 - (1 - t)³ = t(3 - 3t + t²)，t = tanh²
    return t * (3.0 - 3.0 * t + t * t)


# 点值函数

def c_teo(r: ArrayLike) -> ArrayLike:
    """C(r) = (4π/3 · (1 − sech⁶(r/2)))^{-1/2}，严格递减，r→∞ 时趋于 √(3/4π)"""
    arr = _domain(r, "c_teo")
    t = np.tanh(arr / 2.0) ** 2
    return _out((4.0 * math.pi / 3.0 * _sech6_complement(t)) ** -0.5, r)


def h_collar(L: ArrayLike) -> ArrayLike:
    """h(L) = arccos(tanh(L/2))"""
    arr = _domain(L, "h_collar")
    return _out(np.arccos(np.tanh(arr / 2.0)), L)


def s_collar(L: ArrayLike) -> ArrayLike:
    """领圈环域的 log 模半宽 s(L) = 2π h(L)/L"""
    arr = _domain(L, "s_collar")
    return _out(2.0 * math.pi * np.arccos(np.tanh(arr / 2.0)) / arr, L)


def c0(L: ArrayLike) -> ArrayLike:
    """c₀(L) = h + ½ sin(2h)，其中 sin h cos h = sech(L/2) tanh(L/2)"""
    arr = _domain(L, "c0")
    half = arr / 2.0
    return _out(np.arccos(np.tanh(half)) + np.tanh(half) / np.cosh(half), L)


def kernel(r: ArrayLike) -> ArrayLike:
    """e^{−π/sinh r} / sinh² r"""
    arr = _domain(r, "kernel")
    sh = np.sinh(arr)
    return _out(np.exp(-math.pi / sh) / (sh * sh), r)


def f_tail(r: ArrayLike) -> ArrayLike:
    """F(r) = e^{π√3} C(ε̄₂) e^{−π/sinh r} / (3 sinh² r)，r ∈ (0, ε̄₂]"""
    arr = _domain(r, "f_tail", hi=EPS2_BAR)
    sh = np.sinh(arr)
    value = c_teo(EPS2_BAR) * np.exp(PI_SQRT3 - math.pi / sh) / (3.0 * sh * sh)
    return _out(value, r)


def two_f(r: ArrayLike) -> ArrayLike:
    return _out(2.0 * np.asarray(f_tail(r)), r)


def g_bound(r: ArrayLike) -> ArrayLike:
    """G(r) = 1/√(2r c₀(2r)) + 2F(r)"""
    arr = _domain(r, "g_bound", hi=EPS2_BAR)
    value = 1.0 / np.sqrt(2.0 * arr * np.asarray(c0(2.0 * arr))) + 2.0 * np.asarray(f_tail(arr))
    return _out(value, r)


def h_of_g(r: ArrayLike) -> ArrayLike:
    """H(r) = G(r)√r，按 1/√(2c₀(2r)) + 2√r F(r) 计算"""
    arr = _domain(r, "h_of_g", hi=EPS2_BAR)
    value = 1.0 / np.sqrt(2.0 * np.asarray(c0(2.0 * arr))) + 2.0 * np.sqrt(arr) * np.asarray(f_tail(arr))
    return _out(value, r)


def k_cusp(r: ArrayLike) -> ArrayLike:
    """K(r) = C(ε₂) e^π e^{−π/sinh r} / sinh² r，r ∈ (0, ε₂]"""
    arr = _domain(r, "k_cusp", hi=EPS2)
    sh = np.sinh(arr)
    value = c_teo(EPS2) * np.exp(math.pi - math.pi / sh) / (sh * sh)
    return _out(value, r)


def sqrt_r_c(r: ArrayLike) -> ArrayLike:
    arr = _domain(r, "sqrt_r_c")
    return _out(np.sqrt(arr) * np.asarray(c_teo(arr)), r)


def m_min(r: ArrayLike) -> ArrayLike:
    """m(r) = min(H(r), √r C(r))"""
    arr = _domain(r, "m_min", hi=EPS2_BAR)
    return _out(np.minimum(np.asarray(h_of_g(arr)), np.asarray(sqrt_r_c(arr))), r)


def m_prime_min(r: ArrayLike) -> ArrayLike:
    """m′(r) = min(2F(r), C(r))"""
    arr = _domain(r, "m_prime_min", hi=EPS2_BAR)
    return _out(np.minimum(2.0 * np.asarray(f_tail(arr)), np.asarray(c_teo(arr))), r)


def inj_sup_bound(r: ArrayLike) -> ArrayLike:
    """‖μ(z)‖ ≤ ‖μ‖₂/√inj(z) 的系数 1/√r"""
    arr = _domain(r, "inj_sup_bound")
    return _out(1.0 / np.sqrt(arr), r)


def wolpert_target(eps: float, L: ArrayLike) -> ArrayLike:
    """(1+ε)√(2/π)/√L"""
    if eps < 0:
        raise DomainError(f"eps 必须非负: {eps}")
    arr = _domain(L, "wolpert_target")
    return _out((1.0 + eps) * math.sqrt(2.0 / math.pi) / np.sqrt(arr), L)


def holk_gradient_asymptotic(L: ArrayLike) -> ArrayLike:
    """沿长度梯度方向全纯截面曲率的渐近值 −3/(πL)"""
    arr = _domain(L, "holk_gradient_asymptotic")
    return _out(-3.0 / (math.pi * arr), L)


def ball_radius_self_consistent(L: ArrayLike) -> ArrayLike:
    """满足 d(r) = r 的半径 atanh(cosh(L/2)/2)，要求 cosh(L/2) < 2"""
    arr = _domain(L, "ball_radius_self_consistent", hi=2.0 * math.acosh(2.0))
    ratio = np.cosh(arr / 2.0) / 2.0
    if np.any(ratio >= 1.0):
        raise DomainError("cosh(L/2) ≥ 2 时不存在自洽半径")
    return _out(np.arctanh(ratio), L)


def delta_of_eps(eps: float) -> float:
    """
    δ(ε) = min((2/π) H⁻¹((1+ε)/√π), 1/(2π))

    H⁻¹ 取 (0, ε̄₂] 中满足 H(r) = (1+ε)/√π 的最小根：先在对数网格上定位
    第一个变号区间，再二分。
    """
    if not eps > 0:
        raise DomainError(f"eps 必须为正: {eps}")
    target = (1.0 + eps) / math.sqrt(math.pi)
    top = h_of_g(EPS2_BAR)
    if target > top:
        raise RangeError(f"目标值 {target:.6g} 超出 H 在 (0, ε̄₂] 上的值域上端 {top:.6g}", eps=eps)

    grid = np.geomspace(1e-9, EPS2_BAR, 400)
    values = np.asarray(h_of_g(grid)) - target
    if values[0] >= 0:
        raise RangeError(f"eps = {eps:.3g} 低于双精度可分辨范围", eps=eps)
    first = int(np.argmax(values >= 0))
    lo, hi = float(grid[first - 1]), float(grid[first])

    for _ in range(settings.bisect_max_iter):
        mid = 0.5 * (lo + hi)
        if h_of_g(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= settings.bisect_tol:
            break
    else:
        raise InconclusiveError("H⁻¹ 二分未收敛", achieved=hi - lo, eps=eps)

    delta1 = 2.0 / math.pi * 0.5 * (lo + hi)
    result = min(delta1, 1.0 / (2.0 * math.pi))
    system_logger.debug(f"δ({eps:.3g}) = {result:.10g} (δ₁ = {delta1:.10g})")
    return result


# 区间包络

def _at(f: Callable[[Interval], Interval], x: float) -> Interval:
    return f(Interval.point(x))


def _monotone(f: Callable[[Interval], Interval], x: Interval, increasing: bool) -> Interval:
    """对初等单调函数只在端点处求包络"""
    left, right = _at(f, x.lo), _at(f, x.hi)
    if increasing:
        return Interval(left.lo, right.hi)
    return Interval(right.lo, left.hi)


def _require_positive(x: Interval, name: str, hi: float = math.inf) -> None:
    if x.lo <= 0 or x.hi > hi:
        raise DomainError(f"{name} 的包络区间超出定义域: [{x.lo}, {x.hi}]")


def _c_teo_chain(x: Interval) -> Interval:
    t = iv.tanh(x * 0.5) ** 2
    # t(3 − 3t + t²) 在 [0, 1] 上关于 t 递增
    poly = _monotone(lambda s: s * (3.0 - 3.0 * s + s * s), Interval(max(t.lo, 0.0), min(t.hi, 1.0)), True)
    d = 4.0 * iv.pi() / 3.0 * poly
    return iv.reciprocal(iv.sqrt(d))


def enclose_c_teo(x: Interval) -> Interval:
    _require_positive(x, "c_teo")
    return _monotone(_c_teo_chain, x, increasing=False)


def _h_collar_chain(x: Interval) -> Interval:
    return iv.arccos(iv.tanh(x * 0.5))


def enclose_h_collar(x: Interval) -> Interval:
    _require_positive(x, "h_collar")
    return _monotone(_h_collar_chain, x, increasing=False)


def _c0_chain(x: Interval) -> Interval:
    half = x * 0.5
    return _h_collar_chain(x) + iv.tanh(half) * iv.sech(half)


def enclose_c0(x: Interval) -> Interval:
    # c₀′(L) = −sech(L/2) tanh²(L/2) < 0
    _require_positive(x, "c0")
    return _monotone(_c0_chain, x, increasing=False)


def enclose_kernel(x: Interval) -> Interval:
    _require_positive(x, "kernel")
    sh = iv.sinh(x)
    return iv.exp(-(iv.pi() / sh)) / (sh * sh)


@lru_cache(maxsize=1)
def _c_eps2bar() -> Interval:
    return enclose_c_teo(Interval.around(EPS2_BAR))


@lru_cache(maxsize=1)
def _c_eps2() -> Interval:
    return enclose_c_teo(Interval.around(EPS2))


def enclose_f_tail(x: Interval) -> Interval:
    _require_positive(x, "f_tail", EPS2_BAR)
    sh = iv.sinh(x)
    exponent = iv.pi() * iv.sqrt(Interval.point(3.0)) - iv.pi() / sh
    return _c_eps2bar() * iv.exp(exponent) / (3.0 * sh * sh)


def enclose_two_f(x: Interval) -> Interval:
    return 2.0 * enclose_f_tail(x)


def enclose_g_bound(x: Interval) -> Interval:
    _require_positive(x, "g_bound", EPS2_BAR)
    return iv.reciprocal(iv.sqrt(2.0 * x * enclose_c0(2.0 * x))) + 2.0 * enclose_f_tail(x)


def enclose_h_of_g(x: Interval) -> Interval:
    _require_positive(x, "h_of_g", EPS2_BAR)
    return iv.reciprocal(iv.sqrt(2.0 * enclose_c0(2.0 * x))) + 2.0 * iv.sqrt(x) * enclose_f_tail(x)


def enclose_k_cusp(x: Interval) -> Interval:
    _require_positive(x, "k_cusp", EPS2)
    sh = iv.sinh(x)
    return _c_eps2() * iv.exp(iv.pi() - iv.pi() / sh) / (sh * sh)


def enclose_sqrt_r_c(x: Interval) -> Interval:
    _require_positive(x, "sqrt_r_c")
    return iv.sqrt(x) * enclose_c_teo(x)


def enclose_m_min(x: Interval) -> Interval:
    return iv.imin(enclose_h_of_g(x), enclose_sqrt_r_c(x))


def enclose_m_prime_min(x: Interval) -> Interval:
    return iv.imin(enclose_two_f(x), enclose_c_teo(x))


# 导数包络 (用于单调性认证)

def derivative_c_teo(x: Interval) -> Interval:
    """C′(r) = −2π sech⁶(r/2) tanh(r/2) D^{−3/2}，D = 4π/3 (1 − sech⁶(r/2))"""
    _require_positive(x, "c_teo")
    half = x * 0.5
    d = iv.reciprocal(enclose_c_teo(x) ** 2)
    return -(2.0 * iv.pi() * iv.sech(half) ** 6 * iv.tanh(half) * iv.reciprocal(d * iv.sqrt(d)))


def derivative_kernel(x: Interval) -> Interval:
    """k′ = k · coth r · (π/sinh r − 2)"""
    sh = iv.sinh(x)
    return enclose_kernel(x) * iv.cosh(x) / sh * (iv.pi() / sh - 2.0)


def derivative_f_tail(x: Interval) -> Interval:
    _require_positive(x, "f_tail", EPS2_BAR)
    factor = _c_eps2bar() * iv.exp(iv.pi() * iv.sqrt(Interval.point(3.0))) / 3.0
    return factor * derivative_kernel(x)


def derivative_k_cusp(x: Interval) -> Interval:
    _require_positive(x, "k_cusp", EPS2)
    return _c_eps2() * iv.exp(iv.pi()) * derivative_kernel(x)


def derivative_h_of_g(x: Interval) -> Interval:
    """H′ = 2 sech r tanh² r (2c₀(2r))^{−3/2} + F/√r + 2√r F′"""
    _require_positive(x, "h_of_g", EPS2_BAR)
    two_c0 = 2.0 * enclose_c0(2.0 * x)
    first = 2.0 * iv.sech(x) * iv.tanh(x) ** 2 * iv.reciprocal(two_c0 * iv.sqrt(two_c0))
    root = iv.sqrt(x)
    return first + enclose_f_tail(x) / root + 2.0 * root * derivative_f_tail(x)


def derivative_sqrt_r_c(x: Interval) -> Interval:
    root = iv.sqrt(x)
    return enclose_c_teo(x) / (2.0 * root) + root * derivative_c_teo(x)


def derivative_h_collar(x: Interval) -> Interval:
    _require_positive(x, "h_collar")
    return -(0.5 * iv.sech(x * 0.5))


def derivative_c0(x: Interval) -> Interval:
    _require_positive(x, "c0")
    half = x * 0.5
    return -(iv.sech(half) * iv.tanh(half) ** 2)


# 函数注册表

@dataclass(frozen=True)
class BoundFunction:
    """可认证函数：点值、包络、导数包络、定义域与左端尾部上界"""

    id: str
    label: str
    point: Callable[[ArrayLike], ArrayLike]
    enclose: Callable[[Interval], Interval]
    derivative: Optional[Callable[[Interval], Interval]]
    domain: Tuple[float, float]
    tail_sup: Optional[Callable[[float], Interval]] = None
    closed_lo: bool = False

    def in_domain(self, x: Interval) -> bool:
        above = self.domain[0] <= x.lo if self.closed_lo else self.domain[0] < x.lo
        return above and x.hi <= self.domain[1]


def _tail_from_increasing(enclose: Callable[[Interval], Interval]) -> Callable[[float], Interval]:
    """(0, r_min] 上递增函数的上确界不超过 r_min 处的值"""
    def tail(r_min: float) -> Interval:
        return Interval(0.0, enclose(Interval.point(r_min)).hi)
    return tail


def _h_tail(r_min: float) -> Interval:
    # 1/√(2c₀(2r)) 与 √r F(r) 在 (0, ε̄₂] 上分别递增
    return Interval(0.0, enclose_h_of_g(Interval.point(r_min)).hi)


FUNCTIONS: Dict[str, BoundFunction] = {
    "C": BoundFunction("C", "C(r)", c_teo, enclose_c_teo, derivative_c_teo, (0.0, math.inf)),
    "sqrtRC": BoundFunction("sqrtRC", "√r·C(r)", sqrt_r_c, enclose_sqrt_r_c, derivative_sqrt_r_c, (0.0, math.inf)),
    "F": BoundFunction("F", "F(r)", f_tail, enclose_f_tail, derivative_f_tail, (0.0, EPS2_BAR),
                       _tail_from_increasing(enclose_f_tail)),
    "twoF": BoundFunction("twoF", "2F(r)", two_f, enclose_two_f,
                          lambda x: 2.0 * derivative_f_tail(x), (0.0, EPS2_BAR),
                          _tail_from_increasing(enclose_two_f)),
    "G": BoundFunction("G", "G(r)", g_bound, enclose_g_bound, None, (0.0, EPS2_BAR)),
    "H": BoundFunction("H", "H(r)", h_of_g, enclose_h_of_g, derivative_h_of_g, (0.0, EPS2_BAR), _h_tail),
    "K": BoundFunction("K", "K(r)", k_cusp, enclose_k_cusp, derivative_k_cusp, (0.0, EPS2),
                       _tail_from_increasing(enclose_k_cusp)),
    "kernel": BoundFunction("kernel", "e^{−π/sinh r}/sinh² r", kernel, enclose_kernel, derivative_kernel,
                            (0.0, math.inf)),
    "m": BoundFunction("m", "m(r)", m_min, enclose_m_min, None, (0.0, EPS2_BAR), _h_tail),
    "mprime": BoundFunction("mprime", "m′(r)", m_prime_min, enclose_m_prime_min, None, (0.0, EPS2_BAR),
                            _tail_from_increasing(enclose_two_f)),
    "h": BoundFunction("h", "h(L)", h_collar, enclose_h_collar, derivative_h_collar, (0.0, math.inf)),
    "c0": BoundFunction("c0", "c₀(L)", c0, enclose_c0, derivative_c0, (0.0, math.inf)),
}


def get_function(function_id: str) -> BoundFunction:
    try:
        return FUNCTIONS[function_id]
    except KeyError:
        raise DomainError(f"未知函数: {function_id}", known=sorted(FUNCTIONS)) from None


def collar_profile(L: float) -> BoundFunction:
    """
    u(t) = e^{2πt/L} cos² t，t ∈ [−h(L), h(L)]

    u′(t) = e^{2πt/L} cos t (2π/L · cos t − 2 sin t)，tan t < π/L 时为正。
    """
    if not L > 0:
        raise DomainError(f"核心测地线长度必须为正: {L}")
    a = 2.0 * math.pi / L
    a_enclosure = 2.0 * iv.pi() / L
    extent = float(h_collar(L))

    def point(t: ArrayLike) -> ArrayLike:
        arr = np.asarray(t, dtype=float)
        return _out(np.exp(a * arr) * np.cos(arr) ** 2, t)

    def enclose(x: Interval) -> Interval:
        return iv.exp(a_enclosure * x) * iv.cos(x) ** 2

    def derivative(x: Interval) -> Interval:
        cos_x = iv.cos(x)
        return iv.exp(a_enclosure * x) * cos_x * (a_enclosure * cos_x - 2.0 * iv.sin(x))

    return BoundFunction(f"u[L={L:g}]", "e^{2πt/L}cos²t", point, enclose, derivative,
                         (-extent, extent), closed_lo=True)


def locate_crossings(first: str, second: str, lo: float, hi: float, samples: int = 2000) -> List[float]:
    """first − second 在 [lo, hi] 上的全部变号点，对数网格定位后用 brentq 细化"""
    f, g = get_function(first), get_function(second)
    grid = np.geomspace(lo, hi, samples)
    diff = np.asarray(f.point(grid)) - np.asarray(g.point(grid))
    roots = []
    for i in np.flatnonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0):
        root = optimize.brentq(lambda r: float(f.point(r)) - float(g.point(r)), grid[i], grid[i + 1],
                               xtol=settings.bisect_tol, maxiter=settings.bisect_max_iter)
        roots.append(float(root))
    roots.extend(float(grid[i]) for i in np.flatnonzero(diff == 0.0))
    return sorted(roots)
