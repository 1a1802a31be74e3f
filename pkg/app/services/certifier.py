"""
认证服务
用区间包络的自适应二分对上确界、单调性、成对不等式与打印常数给出结论

上确界检查是一个分支定界：堆中按包络上端排序，始终细分当前上界所在的子区间，
点包络的下端给出下界。单调性用导数包络的符号判定。
"""

import heapq
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from ..core.config import settings
from ..core.errors import DomainError, WPBoundsError
from ..core.logging import certification_logger, system_logger
from ..models.report_models import CertCheck, CheckStatus, Claim, ClaimKind, ConstantRow, MonotoneSegment
from ..utils import interval as iv
from ..utils.interval import Interval
from .bound_functions import (
    EPS2,
    EPS2_BAR,
    M0,
    MPRIME0,
    BoundFunction,
    collar_profile,
    enclose_c_teo,
    enclose_m_prime_min,
    enclose_two_f,
    get_function,
    h_collar,
)
from .metrics import metrics_collector

Bound = Union[float, Interval]

# 取等断言 (F ≤ C(ε̄₂)、K ≤ C(ε₂)) 的相对松弛
EQUALITY_SLACK = 1e-11
# 单个检查的子区间数上限
MAX_CELLS = 1 << 18
# 打印常数保留四位小数
PRINTED_TOL = 5e-5


@dataclass
class SearchResult:
    status: CheckStatus
    upper: float
    lower: float
    argmax: Optional[float]
    witness: Optional[float]
    cells: int


def _resolve(f: Union[str, BoundFunction]) -> BoundFunction:
    return get_function(f) if isinstance(f, str) else f


def _bound_hi(bound: Bound) -> float:
    return bound.hi if isinstance(bound, Interval) else float(bound)


def maximize_enclosure(enclose: Callable[[Interval], Interval], lo: float, hi: float, threshold: float,
                       depth: int, target_width: Optional[float] = None,
                       tail: Optional[Interval] = None) -> SearchResult:
    """
    在 [lo, hi] 上对 sup f 做分支定界

    certified：上界 ≤ threshold 且 (若给出 target_width) 上下界之差不超过它；
    violated：某点的包络下端 > threshold；inconclusive：深度或子区间数耗尽。
    """
    counter = 0
    heap: List[Tuple[float, int, float, float, int]] = []
    lower, argmax, witness = -math.inf, None, None

    def probe(x: float) -> None:
        nonlocal lower, argmax, witness
        value = enclose(Interval.point(x))
        if value.lo > lower:
            lower, argmax = value.lo, x
        if value.lo > threshold and witness is None:
            witness = x

    def push(a: float, b: float, level: int) -> None:
        nonlocal counter
        enc = enclose(Interval(a, b))
        heapq.heappush(heap, (-enc.hi, counter, a, b, level))
        counter += 1

    tail_hi = tail.hi if tail is not None else -math.inf
    probe(lo)
    probe(hi)
    probe(0.5 * (lo + hi))
    push(lo, hi, 0)

    while True:
        upper = max(-heap[0][0], tail_hi)
        if witness is not None:
            return SearchResult(CheckStatus.VIOLATED, upper, lower, argmax, witness, counter)
        if upper <= threshold and (target_width is None or upper - max(lower, -1e300) <= target_width):
            return SearchResult(CheckStatus.CERTIFIED, upper, lower, argmax, None, counter)
        _, _, a, b, level = heap[0]
        if tail_hi > threshold or counter >= MAX_CELLS:
            return SearchResult(CheckStatus.INCONCLUSIVE, upper, lower, argmax, None, counter)
        if level >= depth:
            status = CheckStatus.CERTIFIED if upper <= threshold else CheckStatus.INCONCLUSIVE
            return SearchResult(status, upper, lower, argmax, None, counter)
        heapq.heappop(heap)
        mid = 0.5 * (a + b)
        push(a, mid, level + 1)
        push(mid, b, level + 1)
        probe(0.5 * (a + mid))
        probe(0.5 * (mid + b))


def _split_tail(f: BoundFunction, I: Interval, rmin: float) -> Tuple[Interval, Optional[Interval]]:
    """左端贴近 0 的区间用解析尾部上界替代 (0, r_min]"""
    if I.lo >= rmin or f.closed_lo:
        if not f.in_domain(I):
            raise DomainError(f"{f.id} 的区间 [{I.lo}, {I.hi}] 超出定义域 {f.domain}")
        return I, None
    if f.tail_sup is None:
        raise DomainError(f"{f.id} 没有 (0, r_min] 上的尾部上界，区间左端必须 ≥ r_min")
    return Interval(rmin, I.hi), f.tail_sup(rmin)


def _run(check_id: str, kind: str, target: Dict, body: Callable[[], CertCheck]) -> CertCheck:
    """统一的检查生命周期：指标、认证记录日志与异常记录"""
    certification_logger.start_check(check_id, target)
    metrics_collector.start_check(check_id, kind)
    started = time.time()
    try:
        check = body()
    except WPBoundsError as exc:
        certification_logger.log_error_check(check_id, exc, kind)
        metrics_collector.complete_check(check_id, "error")
        raise
    elapsed = time.time() - started
    metrics_collector.complete_check(check_id, check.status.value, check.cells)
    certification_logger.complete_check(check_id, check.model_dump(mode="json"), elapsed)
    icon = "✅" if check.status in (CheckStatus.CERTIFIED, CheckStatus.DISCOVERED) else "⚠️"
    system_logger.info(f"{icon} {check_id}: {check.status.value} ({elapsed:.3f}s, {check.cells} 个子区间)")
    return check


# 上确界

def certify_sup(f: Union[str, BoundFunction], I: Interval, bound: Bound, depth: Optional[int] = None,
                rmin: Optional[float] = None, slack: float = 0.0, check_id: Optional[str] = None,
                target_width: Optional[float] = None) -> CertCheck:
    """sup_{r∈I} f(r) ≤ bound；区间左端小于 r_min 时使用尾部上界"""
    func = _resolve(f)
    depth = depth or settings.depth
    rmin = rmin or settings.rmin
    width = target_width if target_width is not None else settings.sup_width
    check_id = check_id or f"{func.id}_sup"
    threshold = _bound_hi(bound) * (1.0 + slack)

    def body() -> CertCheck:
        searched, tail = _split_tail(func, I, rmin)
        res = maximize_enclosure(func.enclose, searched.lo, searched.hi, threshold, depth, width, tail)
        note = None
        if tail is not None:
            note = f"(0, {rmin:g}] 上使用尾部上界 {tail.hi:.6g}"
        return CertCheck(
            check_id=check_id, target=func.id, interval=I.as_list(),
            claim=Claim(kind=ClaimKind.UPPER_BOUND, value=_bound_hi(bound), slack=slack),
            enclosure=[res.lower, res.upper], status=res.status, witness=res.witness,
            argmax=res.argmax, cells=res.cells, note=note,
        )

    return _run(check_id, "sup", {"function": func.id, "interval": I.as_list(), "bound": _bound_hi(bound)}, body)


# 单调性

def _derivative_cells(func: BoundFunction, I: Interval, depth: int) -> Tuple[List[Tuple[Interval, int]], int]:
    """从左到右细分，返回 (子区间, 符号) 列表，符号为 +1/−1/0"""
    cells: List[Tuple[Interval, int]] = []
    stack: List[Tuple[Interval, int]] = [(I, 0)]
    count = 0
    while stack:
        cell, level = stack.pop()
        count += 1
        try:
            d = func.derivative(cell)
            sign = 1 if d.lo > 0 else (-1 if d.hi < 0 else 0)
        except DomainError:
            sign = 0
        if sign != 0 or level >= depth or count >= MAX_CELLS:
            cells.append((cell, sign))
            continue
        left, right = cell.split()
        stack.append((right, level + 1))
        stack.append((left, level + 1))
    return cells, count


def _merge_segments(cells: Sequence[Tuple[Interval, int]]) -> List[MonotoneSegment]:
    segments: List[MonotoneSegment] = []
    for cell, sign in cells:
        if sign == 0:
            continue
        direction = "increasing" if sign > 0 else "decreasing"
        if segments and segments[-1].direction == direction and segments[-1].hi == cell.lo:
            segments[-1].hi = cell.hi
        else:
            segments.append(MonotoneSegment(lo=cell.lo, hi=cell.hi, direction=direction))
    return segments


def _mesh_monotone(func: BoundFunction, I: Interval, sign: int, nodes: int = 4097) -> Tuple[bool, Optional[float]]:
    """无导数包络时比较网格节点的点包络"""
    xs = [I.lo + (I.hi - I.lo) * k / (nodes - 1) for k in range(nodes)]
    values = [func.enclose(Interval.point(x)) for x in xs]
    for x, a, b in zip(xs, values, values[1:]):
        if (sign > 0 and not a.hi < b.lo) or (sign < 0 and not a.lo > b.hi):
            return False, x
    return True, None


def certify_monotone(f: Union[str, BoundFunction], I: Interval, direction: str,
                     depth: Optional[int] = None, check_id: Optional[str] = None) -> CertCheck:
    """按导数包络符号认证严格单调；失败时报告已认证的最大子区间"""
    func = _resolve(f)
    if direction not in ("increasing", "decreasing"):
        raise DomainError(f"未知单调方向: {direction}")
    depth = depth or settings.depth
    check_id = check_id or f"{func.id}_{direction}"
    want = 1 if direction == "increasing" else -1
    kind = ClaimKind.MONOTONE_INCREASING if want > 0 else ClaimKind.MONOTONE_DECREASING

    def body() -> CertCheck:
        if not func.in_domain(I):
            raise DomainError(f"{func.id} 的区间 [{I.lo}, {I.hi}] 超出定义域 {func.domain}")
        enc = func.enclose(I)
        if func.derivative is None:
            ok, where = _mesh_monotone(func, I, want)
            status = CheckStatus.INFORMATIONAL if ok else CheckStatus.INCONCLUSIVE
            return CertCheck(check_id=check_id, target=func.id, interval=I.as_list(), claim=Claim(kind=kind),
                             enclosure=enc.as_list(), status=status, witness=where, cells=0,
                             note="无导数包络，仅比较网格节点")

        cells, count = _derivative_cells(func, I, depth)
        segments = [s for s in _merge_segments(cells) if s.direction == direction]
        status, witness = CheckStatus.CERTIFIED, None
        for cell, sign in cells:
            if sign == -want:
                a, b = func.enclose(Interval.point(cell.lo)), func.enclose(Interval.point(cell.hi))
                if (want > 0 and a.lo > b.hi) or (want < 0 and a.hi < b.lo):
                    status, witness = CheckStatus.VIOLATED, cell.lo
                    break
                status = CheckStatus.INCONCLUSIVE
            elif sign == 0:
                status = CheckStatus.INCONCLUSIVE
        return CertCheck(check_id=check_id, target=func.id, interval=I.as_list(), claim=Claim(kind=kind),
                         enclosure=enc.as_list(), status=status, witness=witness,
                         segments=None if status == CheckStatus.CERTIFIED else segments, cells=count)

    return _run(check_id, "monotone", {"function": func.id, "interval": I.as_list(), "direction": direction}, body)


def discover_monotone(f: Union[str, BoundFunction], I: Interval, depth: Optional[int] = None,
                      check_id: Optional[str] = None) -> CertCheck:
    """不预设方向，返回导数符号已认证的最大单调子区间"""
    func = _resolve(f)
    if func.derivative is None:
        raise DomainError(f"{func.id} 没有导数包络，无法发现单调区间")
    depth = depth or settings.depth
    check_id = check_id or f"{func.id}_monotone"

    def body() -> CertCheck:
        if not func.in_domain(I):
            raise DomainError(f"{func.id} 的区间 [{I.lo}, {I.hi}] 超出定义域 {func.domain}")
        cells, count = _derivative_cells(func, I, depth)
        segments = _merge_segments(cells)
        unresolved = sum(c.width for c, s in cells if s == 0)
        return CertCheck(check_id=check_id, target=func.id, interval=I.as_list(),
                         claim=Claim(kind=ClaimKind.DISCOVER_MONOTONE), status=CheckStatus.DISCOVERED,
                         segments=segments, cells=count, note=f"未定号总长度 {unresolved:.3g}")

    return _run(check_id, "discover", {"function": func.id, "interval": I.as_list()}, body)


# 成对不等式

@dataclass(frozen=True)
class PairRule:
    """lhs ≤ rhs 改写为 gap ≤ 0；tail 给出 (0, r_min] 上 gap 的上界"""

    lhs: str
    rhs: str
    gap: Callable[[Interval], Interval]
    domain: Tuple[float, float]
    tail: Optional[Callable[[float], Interval]] = None
    note: str = ""


@lru_cache(maxsize=1)
def _k_over_two_f_log() -> Interval:
    # K/(2F) = 3 C(ε₂) e^π / (2 C(ε̄₂) e^{π√3})，与 r 无关
    c2 = enclose_c_teo(Interval.around(EPS2))
    c2bar = enclose_c_teo(Interval.around(EPS2_BAR))
    return iv.log(3.0 * c2 * iv.exp(iv.pi()) / (2.0 * c2bar * iv.exp(iv.pi() * iv.sqrt(Interval.point(3.0)))))


def _tan_h_gap(x: Interval) -> Interval:
    # L·tan h(L) − π = L/sinh(L/2) − π
    return x / iv.sinh(x * 0.5) - iv.pi()


PAIR_RULES: Dict[Tuple[str, str], PairRule] = {
    ("K", "twoF"): PairRule("K", "twoF", lambda x: _k_over_two_f_log(), (0.0, EPS2_BAR),
                            lambda rmin: _k_over_two_f_log(), "log(K/2F) 为常数"),
    # 领圈宽度 h(L) 满足 tan h(L) = 1/sinh(L/2)
    ("tan_h_collar", "pi_over_L"): PairRule("tan_h_collar", "pi_over_L", _tan_h_gap, (0.0, 2.0 * EPS2),
                                            lambda rmin: Interval(-math.inf, 2.0) - iv.pi(),
                                            "tan h(L) = 1/sinh(L/2)，L/sinh(L/2) 递减且趋于 2"),
    ("mprime", "sqrt2"): PairRule("mprime", "sqrt2",
                                  lambda x: enclose_m_prime_min(x) - iv.sqrt(Interval.point(2.0)), (0.0, EPS2_BAR),
                                  lambda rmin: Interval(0.0, enclose_two_f(Interval.point(rmin)).hi)
                                  - iv.sqrt(Interval.point(2.0)),
                                  "m′ ≤ 2F 且 2F 递增"),
}


def _pair_rule(lhs: str, rhs: str) -> PairRule:
    if (lhs, rhs) in PAIR_RULES:
        return PAIR_RULES[(lhs, rhs)]
    left, right = get_function(lhs), get_function(rhs)
    domain = (max(left.domain[0], right.domain[0]), min(left.domain[1], right.domain[1]))
    return PairRule(lhs, rhs, lambda x: left.enclose(x) - right.enclose(x), domain)


def check_inequality_pair(lhs: str, rhs: str, I: Interval, depth: Optional[int] = None,
                          rmin: Optional[float] = None, check_id: Optional[str] = None) -> CertCheck:
    """逐点认证 lhs ≤ rhs"""
    rule = _pair_rule(lhs, rhs)
    depth = depth or settings.depth
    rmin = rmin or settings.rmin
    check_id = check_id or f"{lhs}_le_{rhs}"

    def body() -> CertCheck:
        if I.lo < rule.domain[0] or I.hi > rule.domain[1]:
            raise DomainError(f"区间 [{I.lo}, {I.hi}] 超出 {lhs} ≤ {rhs} 的定义域 {rule.domain}")
        lo, tail = I.lo, None
        if lo < rmin:
            if rule.tail is None:
                raise DomainError(f"{lhs} ≤ {rhs} 没有尾部上界，区间左端必须 ≥ r_min")
            lo, tail = rmin, rule.tail(rmin)
        res = maximize_enclosure(rule.gap, lo, I.hi, 0.0, depth, None, tail)
        return CertCheck(check_id=check_id, target=f"{lhs}-{rhs}", interval=I.as_list(),
                         claim=Claim(kind=ClaimKind.PAIR_LE, value=0.0, rhs=rhs),
                         enclosure=[res.lower, res.upper], status=res.status, witness=res.witness,
                         argmax=res.argmax, cells=res.cells, note=rule.note or None)

    return _run(check_id, "pair", {"lhs": lhs, "rhs": rhs, "interval": I.as_list()}, body)


# 常数

@dataclass(frozen=True)
class ConstantSpec:
    name: str
    enclosure: Callable[[], Interval]
    printed: float
    inherited: Callable[[float], float] = lambda tol: 0.0
    upper_claim: bool = False


@lru_cache(maxsize=4)
def _sup_enclosure(function_id: str, bound: float, depth: int, rmin: float) -> Interval:
    check = certify_sup(function_id, Interval(0.0, EPS2_BAR), bound, depth=depth, rmin=rmin,
                        check_id=f"{function_id}_sup_constant")
    return Interval(check.enclosure[0], check.enclosure[1])


def _c(x: float) -> Interval:
    return enclose_c_teo(Interval.around(x))


CONSTANTS: List[ConstantSpec] = [
    ConstantSpec("eps2", lambda: iv.arcsinh(Interval.point(1.0)), 0.8814),
    ConstantSpec("eps2bar", lambda: iv.log(Interval.point(3.0)) * 0.5, 0.5493),
    ConstantSpec("C(eps2)", lambda: _c(EPS2), 0.7439),
    ConstantSpec("C(eps2bar)", lambda: _c(EPS2_BAR), 1.0917),
    # 打印值由四位小数的 C(ε₂) = .7439 推出，容差继承输入的舍入
    ConstantSpec("sqrt(2eps2)*C(eps2)", lambda: iv.sqrt(Interval.around(2.0 * EPS2)) * _c(EPS2), 0.9877,
                 lambda tol: math.sqrt(2.0 * EPS2) * tol),
    ConstantSpec("sqrt(eps2bar)*C(eps2bar)", lambda: iv.sqrt(Interval.around(EPS2_BAR)) * _c(EPS2_BAR), 0.8091),
    ConstantSpec("C(eps2)^2", lambda: _c(EPS2) ** 2, 0.5533),
    ConstantSpec("K0", lambda: 2.0 * Interval.point(M0) ** 2, 1.6697),
    ConstantSpec("2K0", lambda: 4.0 * Interval.point(M0) ** 2, 3.3394),
    # 由 m 上确界的认证包络重新计算 K₀ = 2m₀²
    ConstantSpec("2m0^2", lambda: 2.0 * _sup_enclosure("m", M0, settings.depth, settings.rmin) ** 2, 1.6697,
                 upper_claim=True),
    ConstantSpec("m0", lambda: _sup_enclosure("m", M0, settings.depth, settings.rmin), M0, upper_claim=True),
    ConstantSpec("mprime0", lambda: _sup_enclosure("mprime", MPRIME0, settings.depth, settings.rmin), MPRIME0,
                 upper_claim=True),
]


def _constant_spec(name: str) -> ConstantSpec:
    for spec in CONSTANTS:
        if spec.name == name:
            return spec
    raise DomainError(f"未知常数: {name}", known=[s.name for s in CONSTANTS])


def _judge_constant(spec: ConstantSpec, enc: Interval, printed: float, tol: float) -> Tuple[CheckStatus, float]:
    effective = tol + spec.inherited(PRINTED_TOL)
    if spec.upper_claim:
        if tol < PRINTED_TOL:
            return CheckStatus.INFORMATIONAL, effective
        if enc.hi <= printed:
            return CheckStatus.CERTIFIED, effective
        return (CheckStatus.VIOLATED if enc.lo > printed else CheckStatus.INCONCLUSIVE), effective
    if printed - effective <= enc.lo and enc.hi <= printed + effective:
        return CheckStatus.CERTIFIED, effective
    if enc.hi < printed - effective or enc.lo > printed + effective:
        return CheckStatus.VIOLATED, effective
    return CheckStatus.INCONCLUSIVE, effective


def certify_constant(name: str, printed: Optional[float] = None, tol: Optional[float] = None) -> CertCheck:
    """|computed − printed| ≤ tol；打印值为上界断言的常数比较包络上端"""
    spec = _constant_spec(name)
    printed = spec.printed if printed is None else printed
    tol = settings.tolerance if tol is None else tol
    check_id = f"const_{name}"

    def body() -> CertCheck:
        enc = spec.enclosure()
        status, effective = _judge_constant(spec, enc, printed, tol)
        kind = ClaimKind.UPPER_BOUND if spec.upper_claim else ClaimKind.EQUALS_CONSTANT
        return CertCheck(check_id=check_id, target=name, claim=Claim(kind=kind, value=printed, tol=effective),
                         enclosure=enc.as_list(), status=status)

    return _run(check_id, "constant", {"constant": name, "printed": printed, "tol": tol}, body)


def constant_row(check: CertCheck) -> ConstantRow:
    spec = _constant_spec(check.target)
    return ConstantRow(name=spec.name, computed=0.5 * (check.enclosure[0] + check.enclosure[1]),
                       enclosure=check.enclosure, printed=check.claim.value, tol=check.claim.tol,
                       upper_claim=spec.upper_claim, status=check.status)


def constants_table(tol: Optional[float] = None) -> List[ConstantRow]:
    return [constant_row(certify_constant(spec.name, tol=tol)) for spec in CONSTANTS]


# 检查套件

@dataclass(frozen=True)
class SuiteEntry:
    check_id: str
    description: str
    run: Callable[[float, int], CertCheck] = field(repr=False)


def _u_profile_check(rmin: float, depth: int) -> CertCheck:
    profile = collar_profile(1.0)
    extent = float(h_collar(1.0))
    return certify_monotone(profile, Interval(-extent, extent), "increasing", depth, check_id="u_monotone")


SUITE: Dict[str, SuiteEntry] = {entry.check_id: entry for entry in [
    SuiteEntry("m_sup", "m(r) ≤ m₀ 于 (0, ε̄₂]",
               lambda rmin, depth: certify_sup("m", Interval(0.0, EPS2_BAR), M0, depth, rmin, check_id="m_sup")),
    SuiteEntry("mprime_sup", "m′(r) ≤ m′₀ 于 (0, ε̄₂]",
               lambda rmin, depth: certify_sup("mprime", Interval(0.0, EPS2_BAR), MPRIME0, depth, rmin,
                                               check_id="mprime_sup")),
    SuiteEntry("F_sup", "F(r) ≤ C(ε̄₂) 于 (0, ε̄₂]",
               lambda rmin, depth: certify_sup("F", Interval(0.0, EPS2_BAR), _c(EPS2_BAR), depth, rmin,
                                               slack=EQUALITY_SLACK, check_id="F_sup")),
    SuiteEntry("K_sup", "K(r) ≤ C(ε₂) 于 (0, ε₂]",
               lambda rmin, depth: certify_sup("K", Interval(0.0, EPS2), _c(EPS2), depth, rmin,
                                               slack=EQUALITY_SLACK, check_id="K_sup")),
    SuiteEntry("kernel_monotone", "e^{−π/sinh r}/sinh² r 于 [0.01, ε₂] 递增",
               lambda rmin, depth: certify_monotone("kernel", Interval(0.01, EPS2), "increasing", depth,
                                                    check_id="kernel_monotone")),
    SuiteEntry("C_monotone", "C(r) 于 [0.01, 10] 递减",
               lambda rmin, depth: certify_monotone("C", Interval(0.01, 10.0), "decreasing", depth,
                                                    check_id="C_monotone")),
    SuiteEntry("u_monotone", "e^{2πt/L}cos² t 于 [−h(1), h(1)] 递增", _u_profile_check),
    SuiteEntry("sqrtRC_decreasing", "√r C(r) 于 [ε̄₂, ε₂] 递减",
               lambda rmin, depth: certify_monotone("sqrtRC", Interval(EPS2_BAR, EPS2), "decreasing", depth,
                                                    check_id="sqrtRC_decreasing")),
    SuiteEntry("H_monotone", "H 的单调子区间 (发现模式)",
               lambda rmin, depth: discover_monotone("H", Interval(rmin, EPS2_BAR), depth, check_id="H_monotone")),
    SuiteEntry("sqrtRC_monotone", "√r C(r) 的单调子区间 (发现模式)",
               lambda rmin, depth: discover_monotone("sqrtRC", Interval(rmin, EPS2), depth,
                                                     check_id="sqrtRC_monotone")),
    SuiteEntry("K_le_2F", "K ≤ 2F 于 (0, ε̄₂]",
               lambda rmin, depth: check_inequality_pair("K", "twoF", Interval(0.0, EPS2_BAR), depth, rmin,
                                                         check_id="K_le_2F")),
    SuiteEntry("tan_h_collar_le_pi_over_L", "tan h(L) ≤ π/L 于 (0, 2ε₂]",
               lambda rmin, depth: check_inequality_pair("tan_h_collar", "pi_over_L", Interval(0.0, 2.0 * EPS2),
                                                         depth, rmin, check_id="tan_h_collar_le_pi_over_L")),
    SuiteEntry("mprime_le_sqrt2", "m′ ≤ √2 于 (0, ε̄₂]",
               lambda rmin, depth: check_inequality_pair("mprime", "sqrt2", Interval(0.0, EPS2_BAR), depth, rmin,
                                                         check_id="mprime_le_sqrt2")),
]}


def run_suite(check_ids: Sequence[str], rmin: Optional[float] = None, depth: Optional[int] = None,
              threads: Optional[int] = None) -> List[CertCheck]:
    """检查彼此独立，并行执行；结果按请求顺序返回"""
    unknown = [c for c in check_ids if c not in SUITE]
    if unknown:
        raise DomainError(f"未知检查: {unknown}", known=sorted(SUITE))
    rmin = rmin or settings.rmin
    depth = depth or settings.depth
    workers = max(1, min(threads or settings.threads, len(check_ids) or 1))
    system_logger.info(f"🚀 运行 {len(check_ids)} 个认证检查 (线程 {workers}, r_min = {rmin:g}, 深度 {depth})")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda cid: SUITE[cid].run(rmin, depth), check_ids))
