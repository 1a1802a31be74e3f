"""
配置管理模块
统一管理所有环境变量和数值计算配置
"""

import os
from pydantic import BaseModel, Field
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()


def _env_bool(key: str, default: str) -> bool:
    return os.getenv(key, default).lower() == "true"


class Settings(BaseModel):
    """应用配置"""

    # 基础配置
    app_name: str = Field(default="WPBounds", description="应用名称")
    app_version: str = Field(default="1.0.0", description="应用版本")
    debug: bool = Field(default=False, description="调试模式")

    # 并发配置
    threads: int = Field(default=4, ge=1, description="并行线程上限 (WPB_THREADS)")

    # 日志配置
    log_level: str = Field(default="INFO", description="日志级别")
    log_dir: str = Field(default="logs", description="日志目录")
    log_to_file: bool = Field(default=True, description="是否写入日志文件")
    log_rotation: str = Field(default="10 MB", description="日志轮转大小")
    log_retention: int = Field(default=7, description="日志保留天数")

    # 随机验证配置
    seed: int = Field(default=0, description="默认随机种子")
    trials: int = Field(default=1000, ge=1, description="默认随机试验次数")
    modes: int = Field(default=64, ge=0, description="Laurent 模式截断 N_max")

    # 区间认证配置
    rmin: float = Field(default=1e-6, gt=0, description="认证区间左端点 r_min")
    depth: int = Field(default=42, ge=1, description="二分细化深度上限")
    inflation_ulps: int = Field(default=4, ge=0, description="每个基本运算的外扩 ulp 数")
    tolerance: float = Field(default=5e-5, gt=0, description="常数打印精度容差")
    sup_width: float = Field(default=1e-4, gt=0, description="上确界包络的目标宽度")

    # 数值积分与求根配置
    quad_rtol_l2: float = Field(default=1e-9, gt=0, description="L2 积分相对容差")
    quad_rtol_l4: float = Field(default=1e-7, gt=0, description="L4 积分相对容差")
    quad_max_subdivisions: int = Field(default=20000, ge=1, description="自适应积分最大细分数")
    bisect_tol: float = Field(default=1e-12, gt=0, description="二分法绝对容差")
    bisect_max_iter: int = Field(default=200, ge=1, description="二分法最大迭代次数")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


def load_settings() -> Settings:
    """加载配置"""
    return Settings(
        # 基础配置
        debug=_env_bool("WPB_DEBUG", "false"),

        # 并发配置
        threads=int(os.getenv("WPB_THREADS", "4")),

        # 日志配置
        log_level=os.getenv("WPB_LOG_LEVEL", "INFO"),
        log_dir=os.getenv("WPB_LOG_DIR", "logs"),
        log_to_file=_env_bool("WPB_LOG_TO_FILE", "true"),
        log_rotation=os.getenv("WPB_LOG_ROTATION", "10 MB"),
        log_retention=int(os.getenv("WPB_LOG_RETENTION", "7")),

        # 随机验证配置
        seed=int(os.getenv("WPB_SEED", "0")),
        trials=int(os.getenv("WPB_TRIALS", "1000")),
        modes=int(os.getenv("WPB_MODES", "64")),

        # 区间认证配置
        rmin=float(os.getenv("WPB_RMIN", "1e-6")),
        depth=int(os.getenv("WPB_DEPTH", "42")),
        inflation_ulps=int(os.getenv("WPB_INFLATION_ULPS", "4")),
        tolerance=float(os.getenv("WPB_TOL", "5e-5")),

        # 数值积分与求根配置
        quad_rtol_l2=float(os.getenv("WPB_QUAD_RTOL_L2", "1e-9")),
        quad_rtol_l4=float(os.getenv("WPB_QUAD_RTOL_L4", "1e-7")),
        bisect_tol=float(os.getenv("WPB_BISECT_TOL", "1e-12")),
        bisect_max_iter=int(os.getenv("WPB_BISECT_MAX_ITER", "200")),
    )


# 全局配置实例
settings = load_settings()
