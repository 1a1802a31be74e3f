"""
全纯二次微分引擎
领圈与尖点上有限 Laurent 模式的二次微分 φ = f(z) dz²/z²：
Parseval 分解、逐点范数、L² 范数 (闭式与数值积分对照)、Gardiner 配对、
极值比与正交模式族。

系数以 a_n = c_n · e^{λ_n} 存储，λ_n 为对数尺度；所有范数在对数空间中计算，
小 L 时 |z|^n 与 w_n 会超出双精度范围。
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, optimize
from scipy.special import logsumexp

from ..core.config import settings
from ..core.errors import DomainError, InconclusiveError, InfiniteWeightError
from ..core.logging import system_logger
from .bound_functions import c0, h_collar
from .hyperbolic_domains import (
    CollarGeometry,
    CollarPoint,
    CuspGeometry,
    Domain,
    TWO_PI,
    cusp_cutoff_log,
    subcollar_extent,
)

LOG_TWO_PI = math.log(TWO_PI)


@dataclass(frozen=True)
class Region:
    """
    积分区域

    full: 领圈上为 C_γ，尖点上为覆盖 {0 < |z| < 1}；collar: 领圈 C_γ；ambient: 外围环域 A；
    sub: 单射半径截断 {r ≤ t}；cusp-maximal: {|z| < e^{−π}}。
    """

    kind: str = "full"
    cutoff: Optional[float] = None

    @classmethod
    def full(cls) -> "Region":
        return cls("full")

    @classmethod
    def collar(cls) -> "Region":
        return cls("collar")

    @classmethod
    def ambient(cls) -> "Region":
        return cls("ambient")

    @classmethod
    def sub(cls, t: float) -> "Region":
        return cls("sub", t)

    @classmethod
    def maximal_cusp(cls) -> "Region":
        return cls("cusp-maximal")


def strip_extent(geom: CollarGeometry, region: Region) -> float:
    """领圈区域在带状坐标 y 中的半宽 h*"""
    if region.kind in ("full", "collar"):
        return geom.h
    if region.kind == "ambient":
        return math.pi / 2.0
    if region.kind == "sub":
        return subcollar_extent(geom, region.cutoff)
    raise DomainError(f"领圈上不支持区域类型 {region.kind}")


def cusp_upper_log(region: Region) -> float:
    """尖点区域的 log|z| 上界"""
    if region.kind in ("full", "cusp-cover"):
        return 0.0
    if region.kind == "cusp-maximal":
        return -math.pi
    if region.kind == "sub":
        return cusp_cutoff_log(region.cutoff)
    raise DomainError(f"尖点上不支持区域类型 {region.kind}")


@dataclass(frozen=True)
class LaurentQD:
    """φ(z) = (Σ a_n zⁿ) dz²/z²，a_n = coeffs[n] · exp(log_scale[n])"""

    domain: Domain
    coeffs: Mapping[int, complex]
    log_scale: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        coeffs = {int(n): complex(c) for n, c in self.coeffs.items() if complex(c) != 0}
        scales = {n: float(self.log_scale.get(n, 0.0)) for n in coeffs}
        if isinstance(self.domain, CuspGeometry):
            bad = [n for n in coeffs if n <= 0]
            if bad:
                raise DomainError(f"尖点上的二次微分要求 a_n = 0 (n ≤ 0)，但给出了模式 {bad}")
        for n, lam in scales.items():
            if not math.isfinite(lam):
                raise DomainError(f"模式 {n} 的对数尺度非有限: {lam}")
        object.__setattr__(self, "coeffs", MappingProxyType(coeffs))
        object.__setattr__(self, "log_scale", MappingProxyType(scales))

    @classmethod
    def zero(cls, domain: Domain) -> "LaurentQD":
        return cls(domain, {})

    @property
    def modes(self) -> List[int]:
        return sorted(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_collar(self) -> bool:
        return isinstance(self.domain, CollarGeometry)

    def log_abs_coefficient(self, n: int) -> float:
        if n not in self.coeffs:
            return -math.inf
        return math.log(abs(self.coeffs[n])) + self.log_scale[n]

    def coefficient(self, n: int) -> complex:
        """a_n；超出双精度范围时为 inf 或 0"""
        if n not in self.coeffs:
            return 0j
        lam = self.log_scale[n]
        return self.coeffs[n] * (math.exp(lam) if lam < 709.0 else math.inf)

    def scaled(self, factor: complex) -> "LaurentQD":
        return LaurentQD(self.domain, {n: c * factor for n, c in self.coeffs.items()}, dict(self.log_scale))

    def restricted(self, keep: Iterable[int]) -> "LaurentQD":
        keep = set(keep)
        return LaurentQD(self.domain, {n: c for n, c in self.coeffs.items() if n in keep},
                         {n: s for n, s in self.log_scale.items() if n in keep})

    def __add__(self, other: "LaurentQD") -> "LaurentQD":
        if other.domain != self.domain:
            raise DomainError("不同区域上的二次微分不能相加")
        coeffs: Dict[int, complex] = {}
        scales: Dict[int, float] = {}
        for n in set(self.coeffs) | set(other.coeffs):
            lam = max(self.log_scale.get(n, -math.inf), other.log_scale.get(n, -math.inf))
            total = 0j
            for part in (self, other):
                if n in part.coeffs:
                    total += part.coeffs[n] * math.exp(part.log_scale[n] - lam)
            coeffs[n], scales[n] = total, lam
        return LaurentQD(self.domain, coeffs, scales)

    def _arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        ns = np.array(self.modes, dtype=float)
        c = np.array([self.coeffs[n] for n in self.modes], dtype=complex)
        log_mag = np.log(np.abs(c)) + np.array([self.log_scale[n] for n in self.modes])
        return ns, log_mag, c / np.abs(c)


@dataclass(frozen=True)
class ModeWeight:
    """‖a_n zⁿ dz²/z²‖₂² = |a_n|² · w_n"""

    n: int
    weight: float
    log_weight: float


@dataclass(frozen=True)
class SupNormResult:
    """从下方逼近的上确界估计与采样分辨率"""

    value: float
    point: CollarPoint
    method: str
    samples: int
    refined: bool


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    subdivisions: int


# 向量化求值

def log_abs_f(phi: LaurentQD, u: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """log|f(z)|，z = e^{u + iθ}"""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    theta = np.broadcast_to(np.asarray(theta, dtype=float), u.shape)
    if phi.is_zero:
        return np.full(u.shape, -np.inf)
    ns, log_mag, unit = phi._arrays()
    exponent = log_mag[None, :] + ns[None, :] * u[:, None]
    top = exponent.max(axis=1)
    terms = unit[None, :] * np.exp(exponent - top[:, None] + 1j * ns[None, :] * theta[:, None])
    with np.errstate(divide="ignore"):
        return top + np.log(np.abs(terms.sum(axis=1)))


def f_values(phi: LaurentQD, u: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """f(z) 的复数值 (只用于数量级可表示的积分对照)"""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    theta = np.broadcast_to(np.asarray(theta, dtype=float), u.shape)
    if phi.is_zero:
        return np.zeros(u.shape, dtype=complex)
    ns, log_mag, unit = phi._arrays()
    exponent = log_mag[None, :] + ns[None, :] * u[:, None]
    return (unit[None, :] * np.exp(exponent + 1j * ns[None, :] * theta[:, None])).sum(axis=1)


def _log_prefactor(domain: Domain, u: np.ndarray) -> np.ndarray:
    """‖φ(z)‖ = |f(z)| · prefactor(z) 中的 log prefactor"""
    if isinstance(domain, CollarGeometry):
        y = domain.scale * u
        if np.any(np.abs(y) >= math.pi / 2):
            raise DomainError("点超出外围环域")
        return 2.0 * math.log(TWO_PI / domain.core_length) + 2.0 * np.log(np.cos(y))
    if np.any(u >= 0):
        raise DomainError("尖点上的点要求 log|z| < 0")
    return 2.0 * np.log(np.abs(u))


def log_pointwise_norm(phi: LaurentQD, u: np.ndarray, theta: np.ndarray) -> np.ndarray:
    u = np.atleast_1d(np.asarray(u, dtype=float))
    return log_abs_f(phi, u, theta) + _log_prefactor(phi.domain, u)


def pointwise_norm(phi: LaurentQD, p: CollarPoint) -> float:
    """‖φ(z)‖ = |φ(z)|/σ(z)，领圈上等于 |f(z)| (2π/L)² cos²((L/2π) log|z|)"""
    value = log_pointwise_norm(phi, np.array([p.log_modulus]), np.array([p.argument]))[0]
    return math.exp(value) if value > -math.inf else 0.0


# 模式权重

def _log_cos2_moment(b: float, h: float) -> float:
    """log ∫_{−h}^{h} e^{bt} cos² t dt，b ≥ 0，闭式原函数 e^{bt}((b cos t + sin t)² + 1 + cos² t)/(b(b²+4))"""
    if b == 0.0:
        return math.log(h + 0.5 * math.sin(2.0 * h))
    bh = b * h
    decay = math.exp(-2.0 * bh)
    inner = (-math.expm1(-2.0 * bh)) * (b * b * math.cos(h) ** 2 + 2.0) + (1.0 + decay) * b * math.sin(2.0 * h)
    return bh + math.log(inner) - math.log(b * (b * b + 4.0))


def _log_cusp_moment(n: int, upper: float) -> float:
    """log ∫_{−∞}^{U} e^{2nu} u² du，n ≥ 1，U ≤ 0"""
    c = 2.0 * n
    poly = upper * upper / c - 2.0 * upper / (c * c) + 2.0 / c ** 3
    return c * upper + math.log(poly)


@lru_cache(maxsize=65536)
def mode_weight(domain: Domain, n: int, region: Region = Region.full()) -> ModeWeight:
    """
    领圈：w_n = 2π (2π/L)³ ∫_{−h*}^{h*} e^{4πnt/L} cos² t dt
    尖点：w_n = 2π ∫_{−∞}^{U} e^{2nu} u² du，n ≤ 0 时为无穷
    """
    if isinstance(domain, CollarGeometry):
        L = domain.core_length
        extent = strip_extent(domain, region)
        b = 4.0 * math.pi * abs(n) / L
        log_w = LOG_TWO_PI + 3.0 * math.log(TWO_PI / L) + _log_cos2_moment(b, extent)
    else:
        if n <= 0:
            raise InfiniteWeightError(f"尖点上模式 n = {n} 的 L² 权重为无穷", n=n)
        log_w = LOG_TWO_PI + _log_cusp_moment(n, cusp_upper_log(region))
    weight = math.exp(log_w) if log_w < 709.0 else math.inf
    return ModeWeight(n=n, weight=weight, log_weight=log_w)


def _log_weights(domain: Domain, modes: Sequence[int], region: Region) -> np.ndarray:
    return np.array([mode_weight(domain, n, region).log_weight for n in modes])


def log_l2_norm(phi: LaurentQD, region: Region = Region.full()) -> float:
    if phi.is_zero:
        return -math.inf
    _, log_mag, _ = phi._arrays()
    return 0.5 * float(logsumexp(2.0 * log_mag + _log_weights(phi.domain, phi.modes, region)))


def l2_norm(phi: LaurentQD, region: Region = Region.full()) -> float:
    """‖φ‖₂ = (Σ |a_n|² w_n)^{1/2}"""
    value = log_l2_norm(phi, region)
    return math.exp(value) if value > -math.inf else 0.0


def inner_product(phi: LaurentQD, psi: LaurentQD, region: Region = Region.full()) -> complex:
    """⟨φ, ψ⟩ = Σ a_n conj(b_n) w_n"""
    if phi.domain != psi.domain:
        raise DomainError("不同区域上的二次微分没有内积")
    total = 0j
    for n in set(phi.coeffs) & set(psi.coeffs):
        log_mag = phi.log_scale[n] + psi.log_scale[n] + mode_weight(phi.domain, n, region).log_weight
        total += phi.coeffs[n] * psi.coeffs[n].conjugate() * math.exp(log_mag)
    return total


def normalized(phi: LaurentQD, region: Region = Region.full()) -> LaurentQD:
    """缩放到单位 L² 范数"""
    if phi.is_zero:
        raise DomainError("零微分无法归一化")
    shift = log_l2_norm(phi, region)
    return LaurentQD(phi.domain, dict(phi.coeffs), {n: s - shift for n, s in phi.log_scale.items()})


# 分解与配对

def decompose(phi: LaurentQD) -> Tuple[LaurentQD, LaurentQD, LaurentQD]:
    """φ = φ₋ + φ₀ + φ₊，按模式符号拆分"""
    if not phi.is_collar:
        zero = LaurentQD.zero(phi.domain)
        return zero, zero, phi
    return (phi.restricted(n for n in phi.modes if n < 0),
            phi.restricted([0]),
            phi.restricted(n for n in phi.modes if n > 0))


def gardiner_pairing(phi: LaurentQD) -> complex:
    """与核心测地线长度梯度的配对 a₀ · L"""
    if not phi.is_collar:
        raise DomainError("尖点没有核心测地线，Gardiner 配对无定义")
    return phi.coefficient(0) * phi.domain.core_length


def project_perp(phi: LaurentQD) -> LaurentQD:
    """令 a₀ = 0，得到 P(X)^⊥ 中的微分"""
    if not phi.is_collar:
        return phi
    return phi.restricted(n for n in phi.modes if n != 0)


# 极值比与正交模式族

def admissible_modes(domain: Domain, N: int, constraint: str = "all") -> List[int]:
    if N < 0:
        raise DomainError(f"模式截断必须非负: {N}")
    if constraint not in ("all", "perp"):
        raise DomainError(f"未知约束: {constraint}")
    if isinstance(domain, CuspGeometry):
        return list(range(1, N + 1))
    modes = list(range(-N, N + 1))
    if constraint == "perp":
        modes.remove(0)
    return modes


def log_extremal_ratio(domain: Domain, p: CollarPoint, N: int, constraint: str = "all",
                       region: Region = Region.full()) -> float:
    modes = admissible_modes(domain, N, constraint)
    if not modes:
        raise DomainError(f"没有可用模式 (N = {N}, 约束 {constraint})")
    u = p.log_modulus
    ns = np.array(modes, dtype=float)
    log_terms = 2.0 * ns * u - _log_weights(domain, modes, region)
    return float(_log_prefactor(domain, np.array([u]))[0]) + 0.5 * float(logsumexp(log_terms))


def extremal_ratio(domain: Domain, p: CollarPoint, N: int, constraint: str = "all",
                   region: Region = Region.full()) -> float:
    """
    sup_φ ‖φ(p)‖/‖φ‖₂ = prefactor(p) · (Σ |z|^{2n}/w_n)^{1/2}

    即点值泛函的范数 (Cauchy–Schwarz 取等)。
    """
    return math.exp(log_extremal_ratio(domain, p, N, constraint, region))


def extremal_coefficients(domain: Domain, p: CollarPoint, N: int, constraint: str = "all",
                          region: Region = Region.full()) -> LaurentQD:
    """达到极值比的微分：a_n ∝ conj(zⁿ)/w_n"""
    modes = admissible_modes(domain, N, constraint)
    coeffs = {n: complex(math.cos(n * p.argument), -math.sin(n * p.argument)) for n in modes}
    scales = {n: n * p.log_modulus - mode_weight(domain, n, region).log_weight for n in modes}
    return LaurentQD(domain, coeffs, scales)


def orthonormal_mode_family(domain: Domain, N: int, region: Region = Region.full()) -> List[LaurentQD]:
    """μ_n = (zⁿ dz²/z²)/√w_n"""
    return [LaurentQD(domain, {n: 1.0}, {n: -0.5 * mode_weight(domain, n, region).log_weight})
            for n in admissible_modes(domain, N, "all")]


def bromberg_sum(family: Sequence[LaurentQD], p: CollarPoint) -> float:
    """Σ_i ‖μ_i(p)‖²"""
    if not family:
        return 0.0
    logs = [2.0 * log_pointwise_norm(mu, np.array([p.log_modulus]), np.array([p.argument]))[0] for mu in family]
    return math.exp(float(logsumexp(logs)))


# 随机采样

def random_qd(domain: Domain, N: int, rng: np.random.Generator, region: Region = Region.full(),
              constraint: str = "all", modes: Optional[Sequence[int]] = None) -> LaurentQD:
    """系数为标准复高斯乘 w_n^{−1/2}，期望 L² 范数为 1"""
    modes = list(modes) if modes is not None else admissible_modes(domain, N, constraint)
    gauss = rng.standard_normal((len(modes), 2))
    coeffs = {n: complex(g[0], g[1]) / math.sqrt(2.0) for n, g in zip(modes, gauss)}
    scales = {n: -0.5 * mode_weight(domain, n, region).log_weight for n in modes}
    return LaurentQD(domain, coeffs, scales)


def adversarial_qds(domain: Domain, N: int, region: Region = Region.full()) -> List[LaurentQD]:
    """单模式、相邻双模式拍频、全同相位三类确定性用例"""
    modes = admissible_modes(domain, N, "all")
    if not modes:
        return []

    def unit(ns: Sequence[int]) -> LaurentQD:
        return normalized(LaurentQD(domain, {n: 1.0 for n in ns},
                                    {n: -0.5 * mode_weight(domain, n, region).log_weight for n in ns}), region)

    picks = sorted({modes[0], modes[-1], modes[len(modes) // 2]})
    cases = [unit([n]) for n in picks]
    cases += [unit([n, n + 1]) for n in picks if n + 1 in modes]
    cases.append(unit(modes))
    return cases


def random_collar_point(geom: CollarGeometry, rng: np.random.Generator, region: Region = Region.collar()) -> CollarPoint:
    extent = strip_extent(geom, region) / geom.scale
    return CollarPoint(float(rng.uniform(-extent, extent)), float(rng.uniform(0.0, TWO_PI)))


# 上确界搜索

def _u_extent(phi: LaurentQD, region: Region) -> float:
    if not phi.is_collar:
        raise DomainError("sup_norm 只支持领圈区域")
    return strip_extent(phi.domain, region) / phi.domain.scale


def _refine_on_circle(phi: LaurentQD, u: float, theta0: float, step: float) -> Tuple[float, float]:
    def objective(theta: float) -> float:
        return -float(log_pointwise_norm(phi, np.array([u]), np.array([theta]))[0])
    res = optimize.minimize_scalar(objective, bounds=(theta0 - step, theta0 + step), method="bounded",
                                   options={"xatol": 1e-12})
    best = -objective(theta0)
    if -res.fun > best:
        return -float(res.fun), float(res.x)
    return best, theta0


def boundary_sup(phi: LaurentQD, region: Region = Region.full(), samples: Optional[int] = None) -> SupNormResult:
    """只在区域两条边界圆上搜索 (最大值原理)"""
    extent = _u_extent(phi, region)
    width = max((abs(n) for n in phi.modes), default=0)
    count = samples or max(256, 32 * (width + 1))
    thetas = np.linspace(0.0, TWO_PI, count, endpoint=False)
    best = (-math.inf, 0.0, 0.0)
    for u in (extent, -extent):
        values = log_pointwise_norm(phi, np.full(count, u), thetas)
        k = int(np.argmax(values))
        value, theta = _refine_on_circle(phi, u, float(thetas[k]), TWO_PI / count)
        if value > best[0]:
            best = (value, u, theta)
    value = math.exp(best[0]) if best[0] > -math.inf else 0.0
    return SupNormResult(value, CollarPoint(best[1], best[2]), "boundary", 2 * count, True)


def grid_sup(phi: LaurentQD, region: Region = Region.full(), n_u: int = 201, n_theta: int = 256,
             interior_fraction: float = 1.0, refine: bool = True) -> SupNormResult:
    """二维网格采样加局部细化"""
    extent = _u_extent(phi, region) * interior_fraction
    us = np.linspace(-extent, extent, n_u)
    thetas = np.linspace(0.0, TWO_PI, n_theta, endpoint=False)
    uu, tt = np.meshgrid(us, thetas, indexing="ij")
    values = log_pointwise_norm(phi, uu.ravel(), tt.ravel())
    k = int(np.argmax(values))
    best_val, best_u, best_t = float(values[k]), float(uu.ravel()[k]), float(tt.ravel()[k])

    if refine and best_val > -math.inf:
        def objective(x: np.ndarray) -> float:
            return -float(log_pointwise_norm(phi, np.array([x[0]]), np.array([x[1]]))[0])
        du, dt = us[1] - us[0] if n_u > 1 else extent, thetas[1] - thetas[0]
        bounds = [(max(-extent, best_u - du), min(extent, best_u + du)), (best_t - dt, best_t + dt)]
        res = optimize.minimize(objective, np.array([best_u, best_t]), method="L-BFGS-B", bounds=bounds)
        if res.success and -res.fun > best_val:
            best_val, best_u, best_t = -float(res.fun), float(res.x[0]), float(res.x[1])

    value = math.exp(best_val) if best_val > -math.inf else 0.0
    return SupNormResult(value, CollarPoint(best_u, best_t), "grid", n_u * n_theta, refine)


def sup_norm(phi: LaurentQD, region: Region = Region.full()) -> SupNormResult:
    """纯 φ₊ 或纯 φ₋ 只搜索边界圆；混合微分做二维采样"""
    if phi.is_zero:
        return SupNormResult(0.0, CollarPoint(0.0, 0.0), "zero", 0, False)
    modes = phi.modes
    if all(n > 0 for n in modes) or all(n < 0 for n in modes):
        return boundary_sup(phi, region)
    return grid_sup(phi, region)


# 数值积分对照

def _cubature(func, a: Sequence[float], b: Sequence[float], rtol: float, label: str) -> QuadratureResult:
    res = integrate.cubature(func, a, b, rule="gk21", rtol=rtol, atol=0.0,
                             max_subdivisions=settings.quad_max_subdivisions)
    estimate = np.asarray(res.estimate)
    error = float(np.max(np.abs(res.error)))
    if res.status != "converged":
        system_logger.warning(f"⚠️ {label} 自适应积分未收敛，误差估计 {error:.3g}")
        raise InconclusiveError(f"{label} 自适应积分未收敛", achieved=error)
    value = float(estimate) if estimate.ndim == 0 else estimate
    return QuadratureResult(value=value, error=error, subdivisions=int(res.subdivisions))


def _cusp_lower_log(phi: LaurentQD, upper: float) -> float:
    # e^{2n(u−U)} 衰减到 e^{−60} 以下
    n_min = min(phi.modes)
    return upper - 30.0 / n_min


def l2_norm_quadrature(phi: LaurentQD, region: Region = Region.full(),
                       rtol: Optional[float] = None) -> QuadratureResult:
    """∫ ‖φ‖² σ dA 在 (y, θ) 或 (log|z|, θ) 矩形上的自适应积分，返回 ‖φ‖₂"""
    rtol = rtol or settings.quad_rtol_l2
    if phi.is_zero:
        return QuadratureResult(0.0, 0.0, 0)
    domain = phi.domain
    if isinstance(domain, CollarGeometry):
        extent = strip_extent(domain, region)
        log_const = 3.0 * math.log(TWO_PI / domain.core_length)

        def integrand(x: np.ndarray) -> np.ndarray:
            y = x[:, 0]
            return np.exp(2.0 * log_abs_f(phi, y / domain.scale, x[:, 1]) + log_const + 2.0 * np.log(np.cos(y)))

        res = _cubature(integrand, [-extent, 0.0], [extent, TWO_PI], rtol, "L² 范数")
    else:
        upper = cusp_upper_log(region)

        def integrand(x: np.ndarray) -> np.ndarray:
            u = x[:, 0]
            return np.exp(2.0 * log_abs_f(phi, u, x[:, 1])) * u * u

        res = _cubature(integrand, [_cusp_lower_log(phi, upper), 0.0], [upper, TWO_PI], rtol, "L² 范数")
    value = math.sqrt(res.value)
    return QuadratureResult(value, 0.5 * res.error / max(value, 1e-300), res.subdivisions)


def mode_weight_quadrature(domain: Domain, n: int, region: Region = Region.full()) -> float:
    """对一维 t 积分 (或尖点的 u 积分) 做自适应 Gauss–Kronrod 积分"""
    if isinstance(domain, CollarGeometry):
        L = domain.core_length
        extent = strip_extent(domain, region)
        b = 4.0 * math.pi * n / L
        value, _ = integrate.quad(lambda t: math.exp(b * t) * math.cos(t) ** 2, -extent, extent,
                                  epsabs=0.0, epsrel=1e-12, limit=200)
        return TWO_PI * (TWO_PI / L) ** 3 * value
    if n <= 0:
        raise InfiniteWeightError(f"尖点上模式 n = {n} 的 L² 权重为无穷", n=n)
    upper = cusp_upper_log(region)
    value, _ = integrate.quad(lambda u: math.exp(2.0 * n * u) * u * u, -np.inf, upper,
                              epsabs=0.0, epsrel=1e-12, limit=200)
    return TWO_PI * value


def gardiner_pairing_quadrature(phi: LaurentQD, rtol: float = 1e-10) -> complex:
    """
    (2/π) (L/2π)⁴ ∫_A f(z)/(|z|⁴ρ²) dx dy，核已归一化使 φ₀ 的配对为 a₀ L

    非零模式在 θ 方向积分为 0。
    """
    if not phi.is_collar:
        raise DomainError("尖点没有核心测地线，Gardiner 配对无定义")
    if phi.is_zero:
        return 0j
    geom = phi.domain
    scale = geom.scale
    # dx dy/(|z|⁴ρ²) = (2π/L)³ cos² y dy dθ
    factor = 2.0 / math.pi * scale ** 4 * (TWO_PI / geom.core_length) ** 3

    def integrand(x: np.ndarray) -> np.ndarray:
        y = x[:, 0]
        values = f_values(phi, y / scale, x[:, 1]) * np.cos(y) ** 2
        return np.stack([values.real, values.imag], axis=-1)

    half = math.pi / 2.0
    res = _cubature(integrand, [-half, 0.0], [half, TWO_PI], rtol, "Gardiner 配对")
    return factor * complex(res.value[0], res.value[1])


def region_area(domain: Domain, region: Region = Region.full()) -> float:
    """区域的双曲面积"""
    if isinstance(domain, CollarGeometry):
        return 2.0 * TWO_PI * domain.scale * math.tan(strip_extent(domain, region))
    upper = cusp_upper_log(region)
    if upper >= 0:
        return math.inf
    return TWO_PI / abs(upper)


def l4_integral(phi: LaurentQD, region: Region = Region.full(), rtol: Optional[float] = None) -> QuadratureResult:
    """∫ ‖φ(z)‖⁴ σ dA，二维自适应积分 (四次项混合各模式，无闭式)"""
    rtol = rtol or settings.quad_rtol_l4
    if phi.is_zero:
        return QuadratureResult(0.0, 0.0, 0)
    domain = phi.domain
    if isinstance(domain, CollarGeometry):
        extent = strip_extent(domain, region)
        log_scale = math.log(domain.scale)

        def integrand(x: np.ndarray) -> np.ndarray:
            y = x[:, 0]
            log_norm = log_pointwise_norm(phi, y / domain.scale, x[:, 1])
            return np.exp(4.0 * log_norm + log_scale - 2.0 * np.log(np.cos(y)))

        return _cubature(integrand, [-extent, 0.0], [extent, TWO_PI], rtol, "L⁴ 积分")

    upper = cusp_upper_log(region)

    def integrand(x: np.ndarray) -> np.ndarray:
        u = x[:, 0]
        return np.exp(4.0 * log_pointwise_norm(phi, u, x[:, 1])) / (u * u)

    return _cubature(integrand, [_cusp_lower_log(phi, upper), 0.0], [upper, TWO_PI], rtol, "L⁴ 积分")


def l4_integral_reduced(phi: LaurentQD, region: Region = Region.full()) -> float:
    """单模式微分的 θ 积分可直接完成，剩下一维积分"""
    if len(phi.modes) != 1 or not phi.is_collar:
        raise DomainError("降维积分只适用于领圈上的单模式微分")
    geom = phi.domain
    n = phi.modes[0]
    extent = strip_extent(geom, region)
    log_a = phi.log_abs_coefficient(n)
    log_const = 4.0 * log_a + 8.0 * math.log(TWO_PI / geom.core_length) + math.log(geom.scale) + LOG_TWO_PI

    def profile(y: float) -> float:
        return math.exp(log_const + 4.0 * n * y / geom.scale + 6.0 * math.log(math.cos(y)))

    value, _ = integrate.quad(profile, -extent, extent, epsabs=0.0, epsrel=1e-12, limit=400)
    return value


def density_square_integral(domain: CollarGeometry, N: int, region: Region = Region.full()) -> float:
    """
    ∫ (Σ_n ‖μ_n(z)‖²)² σ dA，μ_n 为正交模式族

    Σ_n ‖μ_n‖² 与 θ 无关，只需一维积分。
    """
    modes = admissible_modes(domain, N, "all")
    ns = np.array(modes, dtype=float)
    log_w = _log_weights(domain, modes, region)
    extent = strip_extent(domain, region)
    log_pref = 4.0 * math.log(TWO_PI / domain.core_length)

    def integrand(y: float) -> float:
        u = y / domain.scale
        log_b = log_pref + 4.0 * math.log(math.cos(y)) + float(logsumexp(2.0 * ns * u - log_w))
        return math.exp(2.0 * log_b) * domain.scale / math.cos(y) ** 2

    value, _ = integrate.quad(integrand, -extent, extent, epsabs=0.0, epsrel=1e-10, limit=400)
    return TWO_PI * value


def c0_quadrature(L: float) -> float:
    """∫_{−h}^{h} cos² t dt，与 c₀ 的闭式对照"""
    extent = float(h_collar(L))
    value, _ = integrate.quad(lambda t: math.cos(t) ** 2, -extent, extent, epsabs=0.0, epsrel=1e-13)
    return value


def w0_closed_form(geom: CollarGeometry) -> float:
    """w₀ = (16π⁴/L³) c₀(L)"""
    return 16.0 * math.pi ** 4 / geom.core_length ** 3 * float(c0(geom.core_length))
