"""
报告数据模型定义
认证检查、随机试验、曲率查询与常数表的可序列化结构
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class CheckStatus(str, Enum):
    """检查结论"""

    CERTIFIED = "certified-true"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"
    INFORMATIONAL = "informational"
    DISCOVERED = "discovered"


class ClaimKind(str, Enum):
    UPPER_BOUND = "upper-bound"
    MONOTONE_INCREASING = "monotone-increasing"
    MONOTONE_DECREASING = "monotone-decreasing"
    EQUALS_CONSTANT = "equals-constant"
    PAIR_LE = "pair-le"
    DISCOVER_MONOTONE = "discover-monotone"
    INEQUALITY = "inequality"


class Claim(BaseModel):
    """
    被检查的断言

    ``value`` 对上界与常数断言有意义；``tol`` 只用于常数断言；
    ``slack`` 记录取等断言使用的相对松弛。
    """
    kind: ClaimKind = Field(..., description="断言类型")
    value: Optional[float] = Field(None, description="断言的数值 (上界或打印常数)")
    tol: Optional[float] = Field(None, description="常数断言容差")
    rhs: Optional[str] = Field(None, description="成对不等式的右端函数")
    slack: float = Field(0.0, description="相对松弛")


class MonotoneSegment(BaseModel):
    """发现模式下认证过的最大单调子区间"""
    lo: float = Field(..., description="左端点")
    hi: float = Field(..., description="右端点")
    direction: str = Field(..., description="increasing 或 decreasing")


class CertCheck(BaseModel):
    """单个认证检查记录"""
    check_id: str = Field(..., description="检查ID")
    target: str = Field(..., description="函数或表达式标识")
    interval: Optional[List[float]] = Field(None, description="检查区间 [lo, hi]")
    claim: Claim = Field(..., description="断言")
    enclosure: Optional[List[float]] = Field(None, description="达到的包络 [lo, hi]")
    status: CheckStatus = Field(..., description="结论")
    witness: Optional[float] = Field(None, description="违反断言的见证点")
    segments: Optional[List[MonotoneSegment]] = Field(None, description="发现模式的单调子区间")
    argmax: Optional[float] = Field(None, description="上确界的近似位置")
    cells: int = Field(0, description="处理过的子区间数")
    note: Optional[str] = Field(None, description="附加说明")


class TrialRecord(BaseModel):
    """随机验证中的一个不等式实例"""
    trial: int = Field(..., description="试验编号")
    check_id: str = Field(..., description="不等式标识")
    domain: str = Field(..., description="collar 或 cusp")
    core_length: Optional[float] = Field(None, description="领圈核心长度 L")
    point: Optional[List[float]] = Field(None, description="(log|z|, arg z)")
    lhs: float = Field(..., description="左端值")
    rhs: float = Field(..., description="右端值")
    margin: float = Field(..., description="rhs − lhs")
    budget: float = Field(..., description="数值误差预算")
    norm: str = Field(..., description="使用的 L² 范数区域")
    status: CheckStatus = Field(..., description="结论")


class ReportSummary(BaseModel):
    passed: int = Field(0, description="通过数")
    violated: int = Field(0, description="违反数")
    inconclusive: int = Field(0, description="未决数")
    informational: int = Field(0, description="仅供参考数")
    by_kind: Dict[str, Dict[str, float]] = Field(default_factory=dict, description="按检查类型的次数、耗时与单元数")

    @property
    def exit_code(self) -> int:
        """0 全部通过，1 存在违反，3 存在未决"""
        if self.violated:
            return 1
        if self.inconclusive:
            return 3
        return 0


class Report(BaseModel):
    """命令输出报告"""
    tool_version: str = Field(..., description="工具版本")
    command: str = Field(..., description="子命令")
    seed: int = Field(0, description="随机种子")
    checks: List[CertCheck] = Field(default_factory=list, description="认证检查")
    trials: List[TrialRecord] = Field(default_factory=list, description="随机试验记录")
    data: Dict[str, Any] = Field(default_factory=dict, description="命令特有的数据")
    summary: ReportSummary = Field(default_factory=ReportSummary, description="统计")
    wall_time: float = Field(0.0, description="耗时 (秒)")

    @classmethod
    def tally(cls, checks: List[CertCheck], trials: List[TrialRecord]) -> ReportSummary:
        summary = ReportSummary()
        for status in [c.status for c in checks] + [t.status for t in trials]:
            if status in (CheckStatus.CERTIFIED, CheckStatus.DISCOVERED):
                summary.passed += 1
            elif status == CheckStatus.VIOLATED:
                summary.violated += 1
            elif status == CheckStatus.INCONCLUSIVE:
                summary.inconclusive += 1
            else:
                summary.informational += 1
        return summary


class CurvatureQuery(BaseModel):
    """亏格 g、穿孔数 n 与 systole ℓ"""
    genus: int = Field(..., ge=0, description="亏格 g")
    punctures: int = Field(..., ge=0, description="穿孔数 n")
    systole: float = Field(..., gt=0, description="systole ℓ")

    @model_validator(mode="after")
    def check_hypothesis(self) -> "CurvatureQuery":
        if 3 * self.genus + self.punctures < 5:
            raise ValueError(f"要求 3g + n ≥ 5，实际为 {3 * self.genus + self.punctures}")
        return self

    @property
    def dimension(self) -> int:
        """复维数 3g − 3 + n"""
        return 3 * self.genus - 3 + self.punctures


class BoundSource(BaseModel):
    """单个来源界的数值与出处"""
    name: str = Field(..., description="来源名称")
    value: float = Field(..., description="数值")
    regime: str = Field(..., description="thin 或 thick")


class CurvatureBounds(BaseModel):
    """曲率界汇总，每一项都记录来源"""
    ric_lo: float = Field(..., description="Ricci 曲率下界")
    sca_lo: Optional[float] = Field(None, description="数量曲率下界，无适用来源时为空")
    sca_hi: Optional[float] = Field(None, description="数量曲率上界 (n = 0)")
    sca_lo_teo: Optional[float] = Field(None, description="以 C(ℓ/2)² 给出的数量曲率下界")
    sec_lo: Optional[float] = Field(None, description="截面曲率下界 (ℓ ≤ 2ε₂)")
    sec_perp_lo: Optional[float] = Field(None, description="正交方向截面曲率下界 (ℓ ≤ 2ε₂)")
    regime: str = Field(..., description="thin 或 thick")
    constants_used: Dict[str, List[BoundSource]] = Field(default_factory=dict, description="各项的来源")
    notices: List[str] = Field(default_factory=list, description="假设不成立等提示")


class ConstantRow(BaseModel):
    """常数表中的一行"""
    name: str = Field(..., description="常数名称")
    computed: float = Field(..., description="计算值")
    enclosure: List[float] = Field(..., description="区间包络")
    printed: Optional[float] = Field(None, description="打印值")
    tol: float = Field(..., description="有效容差")
    upper_claim: bool = Field(False, description="打印值是否为上界断言")
    status: CheckStatus = Field(..., description="结论")
