#!/usr/bin/env python
"""
GroupcastBC 启动脚本
检查环境配置后依次运行所有打包的演示
"""

import sys
import logging
from pathlib import Path

# 添加项目根目录到 Python 路径
project_root = Path(__file__).parent.parent
sys.path.append(str(project_root))

from app.config.settings import get_settings
from app.core.utils.error_handler import EXIT_NEGATIVE, EXIT_OK, ErrorHandler
from app.core.utils.fixtures import FixtureManager
from app.core.utils.io_utils import write_json_atomic
from app.modules.demos import DEMOS, run_demo
from app.modules.reports import demo_report

# 配置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr
)
logger = logging.getLogger(__name__)

settings = get_settings()


def check_environment(fixtures: FixtureManager) -> bool:
    """检查 Python 版本与固定数据"""
    if sys.version_info < (3, 9):
        logger.error("需要 Python 3.9 或更高版本")
        return False
    if "demos" not in fixtures.list_fixtures():
        logger.error(f"缺少固定数据 {fixtures.path('demos')}，请运行 scripts/generate_fixtures.py")
        return False
    return True


def run_all(names=None) -> int:
    """运行演示；设置了 DEMO_OUTPUT_DIR 时把每个结果写成 JSON"""
    fixtures = FixtureManager()
    if not check_environment(fixtures):
        return 2
    handler = ErrorHandler()
    status = EXIT_OK
    for name in names or DEMOS:
        try:
            result = run_demo(name, fixtures=fixtures)
        except Exception as e:
            info = handler.handle_error(e, {"demo": name})
            logger.error(f"演示 {name} 失败: {info['message']}")
            status = max(status, info["exit_code"])
            continue
        print(demo_report(result.name, result.passed, result.summary))
        if settings.DEMO_OUTPUT_DIR is not None:
            path = write_json_atomic(Path(settings.DEMO_OUTPUT_DIR) / f"{name}.json", result.to_json())
            logger.info(f"已写入 {path}")
        if not result.passed:
            status = max(status, EXIT_NEGATIVE)
    return status


def main():
    """主函数"""
    logger.info("开始运行 GroupcastBC 演示...")
    sys.exit(run_all(sys.argv[1:] or None))


if __name__ == "__main__":
    main()
