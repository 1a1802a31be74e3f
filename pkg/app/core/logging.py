"""
日志系统模块
分离系统日志和认证记录日志，提供可追踪的检查过程
"""

import json
import os
import sys
from datetime import datetime
from threading import Lock
from typing import Any, Dict, Optional
from loguru import logger

from .config import settings


class LoggerManager:
    """日志管理器"""

    def __init__(self):
        self.initialized = False
        self.setup_logger()

    def setup_logger(self) -> None:
        """配置loguru日志系统"""
        if self.initialized:
            return

        # 移除默认处理器
        logger.remove()

        base_format = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {name} | {message}"

        # 控制台处理器 (stdout 留给报告输出)
        logger.add(
            sys.stderr,
            format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level}</level> | <cyan>{name}</cyan> | {message}",
            level=settings.log_level,
            colorize=True,
        )

        if settings.log_to_file:
            os.makedirs(settings.log_dir, exist_ok=True)
            today = datetime.now().strftime('%Y-%m-%d')

            # 系统主日志文件
            logger.add(
                os.path.join(settings.log_dir, f'wpbounds_system_{today}.log'),
                format=base_format,
                level="INFO",
                rotation=settings.log_rotation,
                retention=f"{settings.log_retention} days",
                encoding="utf-8",
                enqueue=True,
            )

            # 错误日志文件
            logger.add(
                os.path.join(settings.log_dir, f'wpbounds_error_{today}.log'),
                format=base_format,
                level="ERROR",
                rotation="5 MB",
                retention=f"{settings.log_retention} days",
                encoding="utf-8",
                enqueue=True,
            )

            # 认证记录专用日志文件
            logger.add(
                os.path.join(settings.log_dir, f'wpbounds_certification_{today}.log'),
                format="{time:YYYY-MM-DD HH:mm:ss.SSS} | CERT | {message}",
                level="INFO",
                rotation="20 MB",
                retention=f"{settings.log_retention} days",
                encoding="utf-8",
                enqueue=True,
                filter=lambda record: record["extra"].get("log_type") == "certification"
            )

        self.initialized = True
        logger.debug(f"日志系统初始化完成 - 文件输出: {settings.log_to_file}")

    def get_system_logger(self) -> "logger":
        """获取系统日志记录器"""
        return logger.bind(log_type="system")

    def get_certification_logger(self) -> "logger":
        """获取认证记录日志记录器"""
        return logger.bind(log_type="certification")


class CertificationLogger:
    """
认证记录专用日志 - 每个检查从开始到结束输出一份结构化JSON
"""

    def __init__(self):
        self.cert_logger = log_manager.get_certification_logger()
        self.records: Dict[str, Dict[str, Any]] = {}
        self._lock = Lock()

    def start_check(self, check_id: str, target: Dict[str, Any]) -> None:
        """开始一个检查记录"""
        with self._lock:
            self.records[check_id] = {
                "timestamp": datetime.now().isoformat(),
                "check_id": check_id,
                "target": target,
                "outcome": None,
                "elapsed": None,
                "status": "pending",
                "error": None,
            }

    def complete_check(self, check_id: str, outcome: Dict[str, Any], elapsed: float,
                       success: bool = True, error: Optional[str] = None) -> None:
        """完成一个检查记录并输出JSON"""
        with self._lock:
            record = self.records.pop(check_id, None)
        if record is None:
            return

        record["outcome"] = outcome
        record["elapsed"] = round(elapsed, 6)
        record["status"] = "completed" if success else "error"
        if error:
            record["error"] = error

        self.cert_logger.info(json.dumps(record, ensure_ascii=False, indent=2, default=str))

    def log_error_check(self, check_id: str, error: Exception, context: str = "") -> None:
        """记录失败的检查"""
        with self._lock:
            started = check_id in self.records
        if started:
            self.complete_check(check_id, {"error_context": context}, 0.0, success=False, error=str(error))
            return

        error_log = {
            "timestamp": datetime.now().isoformat(),
            "check_id": check_id,
            "status": "error",
            "error": str(error),
            "context": context,
        }
        self.cert_logger.error(json.dumps(error_log, ensure_ascii=False, indent=2))


# 全局日志管理器实例
log_manager = LoggerManager()

# 导出日志记录器
system_logger = log_manager.get_system_logger()
certification_logger = CertificationLogger()

__all__ = ["system_logger", "certification_logger", "logger"]
