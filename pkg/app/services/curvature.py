"""
Weil–Petersson 曲率界服务
由 systole、亏格与穿孔数汇总 Ricci、数量与截面曲率的上下界，每一项取所有适用来源中最紧的一个
"""

import math
from typing import Dict, List, Optional, Union

from ..core.errors import DomainError, HypothesisError
from ..core.logging import system_logger
from ..models.report_models import BoundSource, CurvatureBounds, CurvatureQuery
from ..utils.interval import Interval
from .bound_functions import EPS2, c_teo, holk_gradient_asymptotic, published_constants
from .hyperbolic_domains import RegionKind

THIN_LIMIT = 2.0 * EPS2


def _check_mode(mode: str) -> None:
    if mode not in ("rounded", "sharp"):
        raise DomainError(f"未知模式: {mode}，应为 rounded 或 sharp")


def regime(q: CurvatureQuery) -> str:
    return "thin" if q.systole <= THIN_LIMIT else "thick"


def _best(sources: List[BoundSource]) -> Optional[float]:
    return max((s.value for s in sources), default=None)


# Ricci 曲率

def ric_sources(q: CurvatureQuery, mode: str = "sharp") -> List[BoundSource]:
    _check_mode(mode)
    ell = q.systole
    sources = []
    if ell <= THIN_LIMIT:
        if mode == "sharp":
            sources.append(BoundSource(name="thin: −2K₀/ℓ", value=-2.0 * published_constants().K0 / ell, regime="thin"))
        else:
            sources.append(BoundSource(name="thin: −4/ℓ", value=-4.0 / ell, regime="thin"))
    sources.append(BoundSource(name="Teo: −2C(ℓ/2)²", value=-2.0 * float(c_teo(ell / 2.0)) ** 2,
                               regime="thick" if ell > THIN_LIMIT else "thin"))
    return sources


def ric_lower(q: CurvatureQuery, mode: str = "sharp") -> float:
    """Ric(μ) 的下界，取细部与 Teo 界中较大者"""
    return _best(ric_sources(q, mode))


# 数量曲率

def sca_sources(q: CurvatureQuery) -> List[BoundSource]:
    ell, g, n = q.systole, q.genus, q.punctures
    sources = []
    if ell <= THIN_LIMIT:
        sources.append(BoundSource(name="thin: −4(3g−3+n)/ℓ", value=-4.0 * q.dimension / ell, regime="thin"))
        if n == 0:
            sources.append(BoundSource(name="thin, n = 0: −11(g−1)/ℓ", value=-11.0 * (g - 1) / ell, regime="thin"))
    # 厚部界只对闭曲面成立
    if n == 0 and ell >= EPS2:
        sources.append(BoundSource(name="thick, n = 0: −(6g−6)C(ε₂)²",
                                   value=-(6.0 * g - 6.0) * published_constants().c_eps2 ** 2, regime="thick"))
    return sources


def sca_lower(q: CurvatureQuery) -> Optional[float]:
    """没有适用来源时返回 None"""
    return _best(sca_sources(q))


def sca_upper(q: CurvatureQuery) -> Optional[float]:
    """Tromba–Wolpert 上界 −3(3g−2)/(4π)，只对 n = 0"""
    if q.punctures != 0:
        return None
    return -3.0 * (3 * q.genus - 2) / (4.0 * math.pi)


def sca_lower_teo(q: CurvatureQuery) -> Optional[float]:
    """−(6g−6)C(ℓ/2)²，单独报告，不并入 sca_lower"""
    if q.punctures != 0:
        return None
    return -(6.0 * q.genus - 6.0) * float(c_teo(q.systole / 2.0)) ** 2


# 截面曲率

def sec_lower(q: CurvatureQuery, mode: str = "rounded") -> float:
    """K(μ, v) ≥ −4/ℓ；sharp 模式利用 K(μ, v) > max(Ric(μ), Ric(v)) 给出 −2K₀/ℓ"""
    _check_mode(mode)
    if q.systole > THIN_LIMIT:
        raise HypothesisError(f"截面曲率下界要求 ℓ ≤ 2ε₂ = {THIN_LIMIT:.6f}，实际 ℓ = {q.systole}",
                              systole=q.systole)
    if mode == "sharp":
        return -2.0 * published_constants().K0 / q.systole
    return -4.0 / q.systole


def sec_perp_lower() -> float:
    """P(X)^⊥ 方向上的截面曲率下界"""
    return -4.0


# 曲率包络

def holk_envelope(l4: float, wp_norm: float) -> Interval:
    """[−2 Q̂, −(2/3) Q̂]，Q̂ = ∫|μ|⁴ dA / ‖μ‖⁴"""
    if not wp_norm > 0:
        raise DomainError(f"Weil–Petersson 范数必须为正: {wp_norm}")
    if l4 < 0:
        raise DomainError(f"四次积分必须非负: {l4}")
    q_hat = l4 / wp_norm ** 4
    return Interval(-2.0 * q_hat, -2.0 * q_hat / 3.0)


def sca_envelope(density_square: float) -> Interval:
    """[−2Q, −Q/3]，Q = ∫(Σ|μᵢ|²)² dA，{μᵢ} 为正交基"""
    if density_square < 0:
        raise DomainError(f"密度平方积分必须非负: {density_square}")
    return Interval(-2.0 * density_square, -density_square / 3.0)


# 逐点密度界

def pointwise_density_bound(region: Union[RegionKind, str], ell: Optional[float] = None) -> float:
    """sup Σ|μᵢ|²：厚部与尖点细部为 C(ε₂)²，领圈细部为 K₀/ℓ"""
    region = RegionKind(region)
    if region in (RegionKind.THICK, RegionKind.CUSP_THIN):
        return published_constants().c_eps2 ** 2
    if ell is None or not ell > 0:
        raise DomainError(f"领圈细部需要正的 systole: {ell}")
    if ell > THIN_LIMIT:
        raise HypothesisError(f"领圈细部密度界要求 ℓ ≤ 2ε₂，实际 ℓ = {ell}", systole=ell)
    return published_constants().K0 / ell


def perp_sup_bound() -> float:
    return math.sqrt(2.0)


def systole_sup_bound(ell: float) -> float:
    """√(2/ℓ⁺)，ℓ⁺ = min(2ε₂, ℓ)"""
    if not ell > 0:
        raise DomainError(f"systole 必须为正: {ell}")
    return math.sqrt(2.0 / min(THIN_LIMIT, ell))


# 汇总

def assemble_bounds(q: CurvatureQuery, mode: str = "sharp") -> CurvatureBounds:
    """逐项取最紧的适用界并记录来源；细部定理在厚部给出提示而不是报错"""
    notices: List[str] = []
    provenance: Dict[str, List[BoundSource]] = {}

    provenance["ric_lo"] = ric_sources(q, mode)
    provenance["sca_lo"] = sca_sources(q)

    sca_hi = sca_upper(q)
    if sca_hi is not None:
        provenance["sca_hi"] = [BoundSource(name="Tromba–Wolpert: −3(3g−2)/(4π)", value=sca_hi, regime=regime(q))]
    else:
        notices.append("数量曲率上界 −3(3g−2)/(4π) 只对 n = 0 给出")

    sca_lo = sca_lower(q)
    if sca_lo is None:
        notices.append("没有适用于该 (g, n, ℓ) 的数量曲率下界")

    sec_lo = sec_perp_lo = None
    try:
        sec_lo = sec_lower(q, mode)
        sec_perp_lo = sec_perp_lower()
        provenance["sec_lo"] = [BoundSource(name="thin: K ≥ Ric 下界" if mode == "sharp" else "thin: −4/ℓ",
                                            value=sec_lo, regime="thin")]
        provenance["sec_perp_lo"] = [BoundSource(name="P(X)^⊥: −4", value=sec_perp_lo, regime="thin")]
    except HypothesisError as exc:
        notices.append(f"超出假设: {exc.message}")

    teo = sca_lower_teo(q)
    if teo is not None:
        provenance["sca_lo_teo"] = [BoundSource(name="Teo: −(6g−6)C(ℓ/2)²", value=teo, regime=regime(q))]

    if q.systole <= THIN_LIMIT:
        notices.append(f"沿长度梯度的全纯截面曲率渐近为 −3/(πℓ) = {float(holk_gradient_asymptotic(q.systole)):.6g}")

    bounds = CurvatureBounds(
        ric_lo=ric_lower(q, mode), sca_lo=sca_lo, sca_hi=sca_hi, sca_lo_teo=teo,
        sec_lo=sec_lo, sec_perp_lo=sec_perp_lo, regime=regime(q),
        constants_used=provenance, notices=notices,
    )
    system_logger.info(f"📐 曲率界 g={q.genus} n={q.punctures} ℓ={q.systole:g}: "
                       f"Ric ≥ {bounds.ric_lo:.6g}, Sca ∈ [{sca_lo}, {sca_hi}] ({bounds.regime})")
    return bounds
