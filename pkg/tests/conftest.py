import os
import sys

import pytest

# 测试中不写日志文件；必须在导入 app 之前设置
os.environ.setdefault("WPB_LOG_TO_FILE", "false")
os.environ.setdefault("WPB_LOG_LEVEL", "WARNING")

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行完整规模的慢速测试")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 完整规模的验证测试，需要 --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
