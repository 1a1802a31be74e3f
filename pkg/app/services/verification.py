"""
随机验证服务
对随机与对抗性的有限模式二次微分逐点检验各条点态不等式，记录每个实例的余量

每个试验使用由 (seed, trial) 决定的独立随机流，并行执行时结果与顺序无关。
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional

import numpy as np

from ..core.config import settings
from ..core.errors import UsageError
from ..core.logging import system_logger
from ..models.report_models import CheckStatus, TrialRecord
from .bound_functions import (
    EPS2,
    EPS2_BAR,
    c0,
    c_teo,
    delta_of_eps,
    f_tail,
    g_bound,
    k_cusp,
    published_constants,
    wolpert_target,
)
from .hyperbolic_domains import CollarGeometry, CollarPoint, CuspGeometry, inj_collar, inj_cusp
from .metrics import metrics_collector
from .qd_engine import (
    Region,
    adversarial_qds,
    bromberg_sum,
    decompose,
    extremal_ratio,
    boundary_sup,
    grid_sup,
    l2_norm,
    orthonormal_mode_family,
    pointwise_norm,
    project_perp,
    random_qd,
)

# 相对误差预算
RELATIVE_BUDGET = 1e-9
# 最大值原理检查的试验间隔
MAX_PRINCIPLE_EVERY = 50
# Wolpert 渐近检查使用的 ε
WOLPERT_EPS = 0.5


@dataclass(frozen=True)
class VerifyConfig:
    """随机验证参数"""

    seed: int = 0
    trials: int = 1000
    modes: int = 64
    l_min: float = 0.01
    l_max: float = 2.0 * EPS2
    points: int = 4
    cusp_every: int = 4

    def validate(self) -> None:
        if self.trials < 1:
            raise UsageError(f"trials 必须 ≥ 1: {self.trials}")
        if self.modes < 0:
            raise UsageError(f"modes 必须 ≥ 0: {self.modes}")
        if not 0 < self.l_min <= self.l_max <= 2.0 * EPS2:
            raise UsageError(f"要求 0 < Lmin ≤ Lmax ≤ 2ε₂，实际为 [{self.l_min}, {self.l_max}]")
        if self.points < 1:
            raise UsageError(f"每个试验的点数必须 ≥ 1: {self.points}")


@lru_cache(maxsize=4)
def _wolpert_delta(eps: float) -> float:
    return delta_of_eps(eps)


class TrialRecorder:
    """收集单个试验中的不等式实例"""

    def __init__(self, trial: int, domain: str, core_length: Optional[float]):
        self.trial = trial
        self.domain = domain
        self.core_length = core_length
        self.records: List[TrialRecord] = []

    def check(self, check_id: str, lhs: float, rhs: float, norm: str, p: Optional[CollarPoint] = None) -> None:
        budget = RELATIVE_BUDGET * max(abs(lhs), abs(rhs)) + 1e-300
        margin = rhs - lhs
        status = CheckStatus.CERTIFIED if margin >= -budget else CheckStatus.VIOLATED
        if status == CheckStatus.VIOLATED:
            system_logger.error(f"❌ 试验 {self.trial} {check_id}: lhs = {lhs:.10g} > rhs = {rhs:.10g}")
        self.records.append(TrialRecord(
            trial=self.trial, check_id=check_id, domain=self.domain, core_length=self.core_length,
            point=[p.log_modulus, p.argument] if p is not None else None,
            lhs=lhs, rhs=rhs, margin=margin, budget=budget, norm=norm, status=status,
        ))


def _core_length(rng: np.random.Generator, config: VerifyConfig, trial: int) -> float:
    # 第 0 个试验固定在假设边界 Lmax
    if trial == 0:
        return config.l_max
    return float(math.exp(rng.uniform(math.log(config.l_min), math.log(config.l_max))))


def _collar_points(geom: CollarGeometry, rng: np.random.Generator, count: int) -> List[CollarPoint]:
    points = [CollarPoint(0.0, float(rng.uniform(0.0, 2.0 * math.pi)))]
    for _ in range(count - 1):
        u = float(rng.uniform(-geom.s, geom.s))
        points.append(CollarPoint(u, float(rng.uniform(0.0, 2.0 * math.pi))))
    return points


def _collar_trial(config: VerifyConfig, trial: int, rng: np.random.Generator) -> List[TrialRecord]:
    L = _core_length(rng, config, trial)
    geom = CollarGeometry(L)
    adversarial = adversarial_qds(geom, config.modes, Region.collar())
    if trial < len(adversarial):
        phi = adversarial[trial]
    else:
        phi = random_qd(geom, config.modes, rng, Region.collar())
    recorder = TrialRecorder(trial, "collar", L)

    minus, zero, plus = decompose(phi)
    norm_c = l2_norm(phi, Region.collar())
    norm_a = l2_norm(phi, Region.ambient())
    perp = project_perp(phi)
    perp_a = l2_norm(perp, Region.ambient())
    family = orthonormal_mode_family(geom, config.modes, Region.ambient())
    check_wolpert = L <= _wolpert_delta(WOLPERT_EPS)

    for p in _collar_points(geom, rng, config.points):
        r = inj_collar(geom, p)
        value = pointwise_norm(phi, p)

        # φ₀ 的剖面界，φ = φ₀ 时取等
        profile = math.sinh(L / 2.0) ** 2 / math.sinh(r) ** 2 / math.sqrt(L * float(c0(L)))
        recorder.check("phi0_profile", pointwise_norm(zero, p), profile * norm_c, "collar", p)

        if r <= EPS2_BAR:
            F = float(f_tail(r))
            recorder.check("phi_plus_tail", pointwise_norm(plus, p), F * norm_c, "collar", p)
            recorder.check("phi_minus_tail", pointwise_norm(minus, p), F * norm_c, "collar", p)
            recorder.check("G_bound", value, float(g_bound(r)) * norm_c, "collar", p)
            recorder.check("perp_twoF", pointwise_norm(perp, p), 2.0 * F * perp_a, "ambient", p)
        if r <= EPS2:
            recorder.check("inj_sqrt", value * math.sqrt(r), norm_a, "ambient", p)
            recorder.check("bromberg_density", bromberg_sum(family, p), published_constants().K0 / L, "ambient", p)

        recorder.check("systole_sup", value, math.sqrt(2.0 / min(2.0 * EPS2, L)) * norm_a, "ambient", p)
        recorder.check("perp_sqrt2", pointwise_norm(perp, p), math.sqrt(2.0) * perp_a, "ambient", p)
        if check_wolpert:
            ratio = extremal_ratio(geom, p, config.modes, "all", Region.ambient())
            recorder.check("wolpert_asymptotic", ratio, float(wolpert_target(WOLPERT_EPS, L)), "ambient", p)

    if trial % MAX_PRINCIPLE_EVERY == 0 and not plus.is_zero:
        boundary = boundary_sup(plus, Region.collar())
        interior = grid_sup(plus, Region.collar(), n_u=41, n_theta=64, interior_fraction=0.98, refine=False)
        recorder.check("max_principle", interior.value, boundary.value * (1.0 + 1e-9), "collar", interior.point)
    return recorder.records


def _cusp_trial(config: VerifyConfig, trial: int, rng: np.random.Generator) -> List[TrialRecord]:
    geom = CuspGeometry()
    phi = random_qd(geom, max(config.modes, 1), rng)
    norm = l2_norm(phi)
    recorder = TrialRecorder(trial, "cusp", None)
    c_eps2 = float(c_teo(EPS2))
    for _ in range(config.points):
        # log|z| 在 [−10π, −π] 上按对数均匀采样
        u = -math.pi * math.exp(rng.uniform(0.0, math.log(10.0)))
        p = CollarPoint(u, float(rng.uniform(0.0, 2.0 * math.pi)))
        r = inj_cusp(u)
        value = pointwise_norm(phi, p)
        K = float(k_cusp(r))
        recorder.check("cusp_K", value, K * norm, "cusp-cover", p)
        recorder.check("cusp_C", value, c_eps2 * norm, "cusp-cover", p)
    return recorder.records


def run_trial(config: VerifyConfig, trial: int) -> List[TrialRecord]:
    rng = np.random.default_rng([config.seed, trial])
    cusp = bool(config.cusp_every) and trial % config.cusp_every == config.cusp_every - 1
    check_id = f"trial-{config.seed}-{trial}"
    metrics_collector.start_check(check_id, "cusp_trial" if cusp else "collar_trial")
    records = _cusp_trial(config, trial, rng) if cusp else _collar_trial(config, trial, rng)
    violated = any(r.status == CheckStatus.VIOLATED for r in records)
    metrics_collector.complete_check(check_id, "violated" if violated else "certified", len(records))
    return records


def verify_random(config: VerifyConfig, threads: Optional[int] = None) -> List[TrialRecord]:
    """按试验编号顺序返回所有不等式实例"""
    config.validate()
    workers = max(1, min(threads or settings.threads, config.trials))
    system_logger.info(f"🎲 随机验证: {config.trials} 个试验, N = {config.modes}, "
                       f"L ∈ [{config.l_min:g}, {config.l_max:g}], seed = {config.seed}, 线程 {workers}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        batches = list(pool.map(lambda k: run_trial(config, k), range(config.trials)))
    records = [record for batch in batches for record in batch]
    violated = sum(1 for r in records if r.status == CheckStatus.VIOLATED)
    system_logger.info(f"📊 随机验证完成: {len(records)} 个实例, {violated} 个违反")
    return records
