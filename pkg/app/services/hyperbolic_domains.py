"""
双曲模型区域服务
领圈环域与尖点穿孔圆盘的度量密度、坐标变换和单射半径

点统一以 (log|z|, arg z) 存储，避免 |z| 在尖点附近下溢。
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from ..core.config import settings
from ..core.errors import DomainError, HypothesisError, InconclusiveError
from ..core.logging import system_logger
from .bound_functions import EPS2, h_collar, s_collar

TWO_PI = 2.0 * math.pi
CUSP_LOG_BOUNDARY = -math.pi


class RegionKind(str, Enum):
    """厚薄分解中的区域类型"""

    THICK = "thick"
    CUSP_THIN = "cusp-thin"
    COLLAR_THIN = "collar-thin"


@dataclass(frozen=True)
class CollarGeometry:
    """核心测地线长度为 L 的领圈"""

    core_length: float
    permissive: bool = False
    margin: float = 1.0

    def __post_init__(self):
        L = self.core_length
        if not (isinstance(L, (int, float)) and math.isfinite(L) and L > 0):
            raise DomainError(f"核心测地线长度必须为正有限数: {L}")
        limit = 2.0 * EPS2 + (self.margin if self.permissive else 0.0)
        if L > limit:
            raise HypothesisError(f"核心测地线长度 {L} 超过 2ε₂ = {2.0 * EPS2:.6f}", core_length=L)
        if self.permissive and L > 2.0 * EPS2:
            system_logger.warning(f"⚠️ 宽松模式领圈 L = {L}，结果不在认证范围内")

    @property
    def certified(self) -> bool:
        return self.core_length <= 2.0 * EPS2

    @property
    def h(self) -> float:
        return h_collar(self.core_length)

    @property
    def s(self) -> float:
        """领圈 C_γ 的 log 模半宽"""
        return s_collar(self.core_length)

    @property
    def ambient_extent(self) -> float:
        """外围环域 A 的 log 模半宽 π²/L"""
        return math.pi ** 2 / self.core_length

    @property
    def scale(self) -> float:
        """L/2π"""
        return self.core_length / TWO_PI

    def strip_y(self, log_modulus: float) -> float:
        return self.scale * log_modulus


@dataclass(frozen=True)
class CuspGeometry:
    """
    最大尖点区域 {0 < |z| < e^{−π}}

    点位于最大尖点内；L² 范数在整个尖点覆盖 {0 < |z| < 1} 上计算。
    """

    point_log_bound: float = CUSP_LOG_BOUNDARY
    norm_log_bound: float = 0.0


Domain = Union[CollarGeometry, CuspGeometry]


@dataclass(frozen=True)
class CollarPoint:
    """(log|z|, arg z) 坐标下的点，log 模的符号表示位于核心的哪一侧"""

    log_modulus: float
    argument: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.log_modulus) and math.isfinite(self.argument)):
            raise DomainError(f"点坐标必须有限: ({self.log_modulus}, {self.argument})")
        object.__setattr__(self, "argument", self.argument % TWO_PI)

    def to_complex(self) -> complex:
        if abs(self.log_modulus) > 700.0:
            raise DomainError(f"|z| = e^{self.log_modulus:.4g} 无法用双精度表示")
        return cmath.rect(math.exp(self.log_modulus), self.argument)

    @classmethod
    def from_complex(cls, z: complex) -> "CollarPoint":
        if z == 0:
            raise DomainError("z = 0 不在任何模型区域内")
        return cls(math.log(abs(z)), cmath.phase(z))

    def reflected(self) -> "CollarPoint":
        """z ↦ 1/z̄ 对应 log 模取反"""
        return CollarPoint(-self.log_modulus, self.argument)


# 尖点点与领圈点同构存储
CuspPoint = CollarPoint


@dataclass(frozen=True)
class StripPoint:
    """带状模型坐标 w = x + iy，覆盖映射 z = e^{2πi w/L}"""

    x: float
    y: float


def to_strip(geom: CollarGeometry, p: CollarPoint) -> StripPoint:
    return StripPoint(x=geom.scale * p.argument, y=-geom.scale * p.log_modulus)


def _check_ambient(geom: CollarGeometry, p: CollarPoint) -> None:
    if abs(p.log_modulus) >= geom.ambient_extent:
        raise DomainError(f"点 log|z| = {p.log_modulus} 超出外围环域 |log|z|| < π²/L = {geom.ambient_extent:.6g}")


def _check_collar(geom: CollarGeometry, p: CollarPoint) -> None:
    # 允许 1e-12 的相对舍入
    if abs(p.log_modulus) > geom.s * (1.0 + 1e-12):
        raise DomainError(f"点 log|z| = {p.log_modulus} 超出领圈 |log|z|| ≤ s(L) = {geom.s:.6g}")


def in_collar(geom: CollarGeometry, p: CollarPoint) -> bool:
    return abs(p.log_modulus) <= geom.s * (1.0 + 1e-12)


def collar_metric_density(geom: CollarGeometry, p: CollarPoint) -> float:
    """ρ(z) = (L/2π) / (|z| cos((L/2π) log|z|))，在外围环域 A 上有定义"""
    _check_ambient(geom, p)
    log_rho = math.log(geom.scale) - p.log_modulus - math.log(math.cos(geom.strip_y(p.log_modulus)))
    return math.exp(log_rho)


def inj_strip(geom: CollarGeometry, w: StripPoint) -> float:
    """带状模型中 sinh r = sinh(L/2)/cos y"""
    if abs(w.y) >= math.pi / 2:
        raise DomainError(f"带状坐标 y = {w.y} 超出 (−π/2, π/2)")
    return math.asinh(math.sinh(geom.core_length / 2.0) / math.cos(w.y))


def inj_ambient(geom: CollarGeometry, log_modulus: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """外围环域上的单射半径，可向量化"""
    u = np.asarray(log_modulus, dtype=float)
    if np.any(np.abs(u) >= geom.ambient_extent):
        raise DomainError("点超出外围环域")
    r = np.arcsinh(math.sinh(geom.core_length / 2.0) / np.cos(geom.scale * u))
    return float(r) if np.ndim(log_modulus) == 0 else r


def inj_collar(geom: CollarGeometry, p: CollarPoint) -> float:
    """sinh r(z) = sinh(L/2) / cos((L/2π) log|z|)"""
    _check_collar(geom, p)
    return inj_ambient(geom, p.log_modulus)


def inj_collar_from_complex(geom: CollarGeometry, z: complex) -> float:
    """由复坐标经 log|z| 计算，用于与带状公式对照"""
    p = CollarPoint.from_complex(z)
    _check_collar(geom, p)
    return math.asinh(math.sinh(geom.core_length / 2.0) / math.cos(geom.scale * math.log(abs(z))))


def inj_cusp(log_modulus: float) -> float:
    """sinh r(z) = −π / log|z|，要求 log|z| ≤ −π"""
    if not log_modulus <= CUSP_LOG_BOUNDARY:
        raise DomainError(f"log|z| = {log_modulus} 不在最大尖点 log|z| ≤ −π 内")
    return math.asinh(-math.pi / log_modulus)


def cusp_metric_density(log_modulus: float) -> float:
    """ρ(z) = −1/(|z| log|z|)"""
    if not log_modulus < 0:
        raise DomainError(f"尖点度量要求 log|z| < 0: {log_modulus}")
    return math.exp(-log_modulus) / (-log_modulus)


def collar_half_width(geom: CollarGeometry) -> float:
    """w(L) = arcsinh(1/sinh(L/2))"""
    return math.asinh(1.0 / math.sinh(geom.core_length / 2.0))


def collar_boundary_inj(geom: CollarGeometry) -> float:
    """sinh r_∂ = cosh(L/2)"""
    return math.asinh(math.cosh(geom.core_length / 2.0))


def dist_to_collar_boundary(geom: CollarGeometry, r: float) -> float:
    """
    求解 sinh r = cosh(L/2) cosh d − sinh d 中的 d ≥ 0

    右端在 [0, w(L)] 上从 cosh(L/2) 递减到 sinh(L/2)，用单调二分。
    """
    L = geom.core_length
    r_core, r_bdry = L / 2.0, collar_boundary_inj(geom)
    tol = 1e-12 * max(1.0, r_bdry)
    if not (r_core - tol <= r <= r_bdry + tol):
        raise DomainError(f"单射半径 r = {r} 超出 [L/2, r_∂] = [{r_core:.6g}, {r_bdry:.6g}]")

    target = math.sinh(min(max(r, r_core), r_bdry))
    ch = math.cosh(L / 2.0)
    lo, hi = 0.0, collar_half_width(geom)
    for _ in range(settings.bisect_max_iter):
        mid = 0.5 * (lo + hi)
        if ch * math.cosh(mid) - math.sinh(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= settings.bisect_tol:
            return 0.5 * (lo + hi)
    raise InconclusiveError("到领圈边界距离的二分未收敛", achieved=hi - lo)


def self_consistent_radius(geom: CollarGeometry) -> float:
    """数值求解 dist_to_collar_boundary(r) = r，与 atanh(cosh(L/2)/2) 对照"""
    lo, hi = geom.core_length / 2.0, collar_boundary_inj(geom)
    for _ in range(settings.bisect_max_iter):
        mid = 0.5 * (lo + hi)
        if dist_to_collar_boundary(geom, mid) > mid:
            lo = mid
        else:
            hi = mid
        if hi - lo <= settings.bisect_tol:
            return 0.5 * (lo + hi)
    raise InconclusiveError("自洽半径二分未收敛", achieved=hi - lo)


def subcollar_extent(geom: CollarGeometry, t: float) -> float:
    """
    子领圈 C_t = {r ≤ t} 在带状坐标中的半宽 h*：cos h* = sinh(L/2)/sinh t

    t 超过 r_∂ 时截断为整个领圈。
    """
    L = geom.core_length
    if t < L / 2.0:
        raise DomainError(f"截断半径 t = {t} 小于 L/2 = {L / 2.0}")
    if t >= collar_boundary_inj(geom):
        return geom.h
    return math.acos(min(1.0, math.sinh(L / 2.0) / math.sinh(t)))


def cusp_cutoff_log(t: float) -> float:
    """尖点中 {r ≤ t} 对应 log|z| ≤ −π/sinh t"""
    if not 0 < t <= EPS2:
        raise DomainError(f"尖点截断半径必须在 (0, ε₂]: {t}")
    return -math.pi / math.sinh(t)


def thick_thin_region(inj: float, in_cusp: bool = False) -> RegionKind:
    """按单射半径与 ε₂ 比较划分 X₁/X₂/X₃"""
    if inj >= EPS2:
        return RegionKind.THICK
    return RegionKind.CUSP_THIN if in_cusp else RegionKind.COLLAR_THIN
