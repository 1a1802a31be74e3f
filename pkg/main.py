#!/usr/bin/env python3
"""
WPBounds - 双曲领圈与尖点上二次微分一致界的认证数值工具

子命令：
- constants      重算常数表并与打印值比较
- certify        区间认证上确界、单调性与成对不等式
- verify-random  对随机有限模式二次微分逐点检验各条不等式
- plotdata       导出界函数曲线数据 (CSV)
- sharpness      极值比扫描 (CSV)
- curvature      汇总 Weil–Petersson 曲率界
- delta          计算 δ(ε)

报告写到 stdout，日志写到 stderr。退出码：0 全部通过，1 存在违反，2 用法错误，3 未决。
"""

import argparse
import json
import math
import sys
from collections import defaultdict
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import UsageError, WPBoundsError
from app.core.logging import system_logger
from app.models.report_models import CertCheck, CheckStatus, CurvatureQuery, Report, TrialRecord
from app.services import certifier
from app.services.bound_functions import (
    EPS2,
    EPS2_BAR,
    delta_of_eps,
    g_bound,
    get_function,
    locate_crossings,
    wolpert_target,
)
from app.services.curvature import assemble_bounds
from app.services.hyperbolic_domains import CollarGeometry, CollarPoint, inj_collar
from app.services.metrics import metrics_collector
from app.services.qd_engine import Region, extremal_ratio
from app.services.verification import WOLPERT_EPS, VerifyConfig, verify_random
from app.utils.helpers import format_duration, generate_run_id, log_grid, parse_name_list, write_csv

PLOT_FUNCTIONS = ("H", "sqrtRC", "twoF", "C", "K", "G", "m", "mprime")
SHARPNESS_HEADER = ["r", "extremal_ratio", "G", "sqrt(1/r)", "wolpert_target", "ratio"]


def _report(command: str, checks: Sequence[CertCheck] = (), trials: Sequence[TrialRecord] = (),
            data: Optional[Dict] = None, seed: int = 0) -> Report:
    checks, trials = list(checks), list(trials)
    return Report(
        tool_version=settings.app_version,
        command=command,
        seed=seed,
        checks=checks,
        trials=trials,
        data=data or {},
        summary=Report.tally(checks, trials).model_copy(update={"by_kind": metrics_collector.get_kind_stats()}),
        wall_time=metrics_collector.get_current_stats()["wall_time"],
    )


def _emit(report: Report, as_json: bool, lines: Sequence[str] = ()) -> int:
    if as_json:
        print(report.model_dump_json(indent=2))
    else:
        for line in lines:
            print(line)
        s = report.summary
        print(f"passed={s.passed} violated={s.violated} inconclusive={s.inconclusive} "
              f"informational={s.informational} wall_time={format_duration(report.wall_time)}")
    return report.summary.exit_code


def _check_line(check: CertCheck) -> str:
    enclosure = f"[{check.enclosure[0]:.10g}, {check.enclosure[1]:.10g}]" if check.enclosure else "-"
    return f"{check.check_id:<28} {check.status.value:<15} {enclosure}"


# === 子命令 ===

def cmd_constants(args: argparse.Namespace) -> int:
    checks = [certifier.certify_constant(spec.name, tol=args.tol) for spec in certifier.CONSTANTS]
    rows = [certifier.constant_row(check) for check in checks]
    report = _report("constants", checks, data={"table": [row.model_dump(mode="json") for row in rows]})
    lines = [f"{row.name:<28} {row.computed:.10f}  printed {row.printed}  tol {row.tol:.3g}  {row.status.value}"
             for row in rows]
    return _emit(report, args.json, lines)


def cmd_certify(args: argparse.Namespace) -> int:
    ids = list(certifier.SUITE) if args.check == "all" else parse_name_list(args.check, list(certifier.SUITE), "检查")
    checks = certifier.run_suite(ids, rmin=args.rmin, depth=args.depth, threads=args.threads)
    report = _report("certify", checks)
    lines = [_check_line(check) for check in checks]
    for check in checks:
        for seg in check.segments or []:
            lines.append(f"    {seg.direction:<11} [{seg.lo:.10g}, {seg.hi:.10g}]")
    return _emit(report, args.json, lines)


def _trial_summary(records: Sequence[TrialRecord]) -> Dict[str, Dict]:
    stats: Dict[str, Dict] = defaultdict(lambda: {"instances": 0, "violated": 0, "min_margin": math.inf})
    for record in records:
        entry = stats[record.check_id]
        entry["instances"] += 1
        entry["violated"] += int(record.status == CheckStatus.VIOLATED)
        entry["min_margin"] = min(entry["min_margin"], record.margin)
    return dict(sorted(stats.items()))


def cmd_verify_random(args: argparse.Namespace) -> int:
    config = VerifyConfig(seed=args.seed, trials=args.trials, modes=args.modes,
                          l_min=args.Lmin, l_max=args.Lmax, points=args.points)
    records = verify_random(config, threads=args.threads)
    summary = _trial_summary(records)
    report = _report("verify-random", trials=records, data={"by_check": summary}, seed=args.seed)
    lines = [f"{check_id:<20} {s['instances']:>7} 个实例  {s['violated']} 个违反  最小余量 {s['min_margin']:.6g}"
             for check_id, s in summary.items()]
    return _emit(report, args.json, lines)


def cmd_plotdata(args: argparse.Namespace) -> int:
    names = parse_name_list(args.functions, PLOT_FUNCTIONS, "函数")
    grid = log_grid(args.rmin, args.rmax, args.samples)
    columns = [get_function(name).point(grid) for name in names]
    rows = [[float(r)] + [float(col[i]) for col in columns] for i, r in enumerate(grid)]
    count = write_csv(args.out, ["r"] + names, rows)
    data: Dict = {"out": args.out, "rows": count, "functions": names}
    if len(names) == 2 and args.samples > 1:
        data["crossings"] = locate_crossings(names[0], names[1], args.rmin, args.rmax)
    system_logger.info(f"📈 已写入 {count} 行到 {args.out}")
    report = _report("plotdata", data=data)
    lines = [f"wrote {count} rows to {args.out}"]
    if "crossings" in data:
        lines.append(f"{names[0]} = {names[1]} at r = {data['crossings']}")
    return _emit(report, args.json, lines)


def cmd_sharpness(args: argparse.Namespace) -> int:
    geom = CollarGeometry(args.L)
    region = Region.ambient() if args.region == "ambient" else Region.collar()
    count = max(args.points, 1)
    # log|z| 从核心取到领圈边界
    us = [geom.s * k / (count - 1) for k in range(count)] if count > 1 else [0.0]
    target = float(wolpert_target(args.eps, args.L))
    rows: List[List[float]] = []
    for u in us:
        p = CollarPoint(u, 0.0)
        r = inj_collar(geom, p)
        ratio = extremal_ratio(geom, p, args.modes, args.constraint, region)
        G = float(g_bound(r)) if r <= EPS2_BAR else math.nan
        rows.append([r, ratio, G, 1.0 / math.sqrt(r), target, ratio / G])
    count = write_csv(args.out, SHARPNESS_HEADER, rows)
    normalized = max(row[1] for row in rows) * math.sqrt(args.L) / math.sqrt(2.0 / math.pi)
    data = {"out": args.out, "rows": count, "L": args.L, "constraint": args.constraint, "region": args.region,
            "max_normalized_ratio": normalized,
            "max_ratio_to_G": max((row[5] for row in rows if not math.isnan(row[5])), default=None)}
    system_logger.info(f"🔍 极值比扫描 L = {args.L:g}: max ratio·√L/√(2/π) = {normalized:.6f}")
    report = _report("sharpness", data=data)
    return _emit(report, args.json, [f"wrote {count} rows to {args.out}",
                                     f"max extremal_ratio·√L/√(2/π) = {normalized:.10g}"])


def cmd_curvature(args: argparse.Namespace) -> int:
    query = CurvatureQuery(genus=args.genus, punctures=args.punctures, systole=args.systole)
    bounds = assemble_bounds(query, args.mode)
    report = _report("curvature", data=bounds.model_dump(mode="json"))
    lines = [f"regime  {bounds.regime}", f"ric_lo  {bounds.ric_lo:.10g}"]
    for name in ("sca_lo", "sca_hi", "sca_lo_teo", "sec_lo", "sec_perp_lo"):
        value = getattr(bounds, name)
        lines.append(f"{name:<7} {'-' if value is None else f'{value:.10g}'}")
    lines.extend(f"notice  {notice}" for notice in bounds.notices)
    return _emit(report, args.json, lines)


def cmd_delta(args: argparse.Namespace) -> int:
    delta = delta_of_eps(args.eps)
    asymptotic = (12.0 * args.eps / math.pi ** 2) ** (1.0 / 3.0)
    report = _report("delta", data={"eps": args.eps, "delta": delta, "asymptotic": asymptotic,
                                    "ratio": delta / asymptotic})
    return _emit(report, args.json, [f"δ({args.eps:g}) = {delta:.12g}", f"δ/(12ε/π²)^(1/3) = {delta / asymptotic:.8f}"])


# === 参数解析 ===

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wpbounds", description=__doc__.splitlines()[1])
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="常数表")
    p.add_argument("--tol", type=float, default=None, help=f"比较容差 (默认 {settings.tolerance:g})")
    p.add_argument("--json", action="store_true", help="输出 JSON 报告")
    p.set_defaults(handler=cmd_constants)

    p = sub.add_parser("certify", help="区间认证检查套件")
    p.add_argument("--check", default="all", help="检查ID，逗号分隔，或 all")
    p.add_argument("--rmin", type=float, default=settings.rmin, help="尾部上界接管的左端点")
    p.add_argument("--depth", type=int, default=settings.depth, help="二分深度上限")
    p.add_argument("--threads", type=int, default=None, help="并行线程数 (默认 WPB_THREADS)")
    p.add_argument("--json", action="store_true", help="输出 JSON 报告")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("verify-random", help="随机二次微分验证")
    p.add_argument("--seed", type=int, default=settings.seed)
    p.add_argument("--trials", type=int, default=settings.trials)
    p.add_argument("--modes", type=int, default=settings.modes, help="Laurent 模式截断 N")
    p.add_argument("--Lmin", type=float, default=0.01, help="核心长度下限")
    p.add_argument("--Lmax", type=float, default=2.0 * EPS2, help="核心长度上限 (≤ 2ε₂)")
    p.add_argument("--points", type=int, default=4, help="每个试验的采样点数")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--json", action="store_true", help="输出 JSON 报告")
    p.set_defaults(handler=cmd_verify_random)

    p = sub.add_parser("plotdata", help="导出界函数曲线 CSV")
    p.add_argument("--functions", default="H,sqrtRC", help=f"逗号分隔，可选 {','.join(PLOT_FUNCTIONS)}")
    p.add_argument("--rmin", type=float, default=1e-3)
    p.add_argument("--rmax", type=float, default=EPS2_BAR)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--out", default="plotdata.csv")
    p.add_argument("--json", action="store_true", help="输出 JSON 报告")
    p.set_defaults(handler=cmd_plotdata)

    p = sub.add_parser("sharpness", help="极值比扫描 CSV")
    p.add_argument("--L", type=float, default=0.1, help="领圈核心长度")
    p.add_argument("--modes", type=int, default=settings.modes)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--constraint", choices=["all", "perp"], default="all")
    p.add_argument("--region", choices=["ambient", "collar"], default="ambient", help="L² 范数的区域")
    p.add_argument("--eps", type=float, default=WOLPERT_EPS, help="Wolpert 目标中的 ε")
    p.add_argument("--out", default="sharpness.csv")
    p.add_argument("--json", action="store_true", help="输出 JSON 报告")
    p.set_defaults(handler=cmd_sharpness)

    p = sub.add_parser("curvature", help="Weil–Petersson 曲率界")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--punctures", type=int, default=0)
    p.add_argument("--systole", type=float, required=True)
    p.add_argument("--mode", choices=["sharp", "rounded"], default="sharp")
    p.add_argument("--json", action="store_true", help="输出 JSON 报告")
    p.set_defaults(handler=cmd_curvature)

    p = sub.add_parser("delta", help="δ(ε) 计算")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--json", action="store_true", help="输出 JSON 报告")
    p.set_defaults(handler=cmd_delta)
    return parser


def _fail(payload: Dict, code: int) -> int:
    print(json.dumps(payload, ensure_ascii=False), file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse 对 --help/--version 以 0 退出，参数错误以 2 退出
        return exc.code if isinstance(exc.code, int) else 2

    run_id = generate_run_id()
    metrics_collector.reset_stats()
    system_logger.info(f"🚀 {settings.app_name} v{settings.app_version} {args.command} (运行 {run_id})")
    try:
        code = args.handler(args)
    except ValidationError as exc:
        system_logger.error(f"参数验证失败: {exc}")
        return _fail(UsageError(str(exc)).to_dict(), UsageError.exit_code)
    except WPBoundsError as exc:
        system_logger.error(f"❌ {exc.error_type}: {exc.message}")
        return _fail(exc.to_dict(), exc.exit_code)
    except OSError as exc:
        system_logger.error(f"❌ 写入输出文件失败: {exc}")
        return _fail(UsageError(f"无法写入输出文件: {exc}", path=exc.filename).to_dict(), UsageError.exit_code)
    system_logger.info(f"⏹️ {args.command} 完成，退出码 {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
