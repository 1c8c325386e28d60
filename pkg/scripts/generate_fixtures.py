#!/usr/bin/env python
"""
GroupcastBC 固定数据生成脚本
把演示用的种子与参数写入 fixtures/demos.json
"""

import sys
import logging
from pathlib import Path

# 添加项目根目录到 Python 路径
project_root = Path(__file__).parent.parent
sys.path.append(str(project_root))

from app.core.utils.fixtures import FixtureManager

# 配置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr
)
logger = logging.getLogger(__name__)

DEMOS = {
    "combination3": {
        "K": 3,
        "capacities": {"1": 1, "2": 2, "3": 3, "12": 5, "13": 7, "23": 11, "123": 13},
        "expected_inequalities": 15,
    },
    "two_user": {"seed": 1501, "max_alphabet": 2, "q_size": 2},
    "korner_marton": {"seed": 1201, "max_alphabet": 2, "q_size": 1},
    "cover": {"seed": 1301, "max_alphabet": 2, "q_size": 2},
    "nair_elgamal": {"seed": 1601, "max_alphabet": 2, "directions": 12},
    "marton": {"seed": 2401, "max_alphabet": 2},
    "covering": {
        "seed": 700,
        "K": 2,
        "labels": ["1", "2"],
        "order": "discrete",
        "target": [[0.27, 0.23], [0.23, 0.27]],
        "margin": 0.2,
        "blocklengths": [50, 100, 200],
        "trials": 100,
        "epsilon": 0.1,
    },
}


def main():
    """主函数"""
    fixtures = FixtureManager(project_root / "fixtures")
    path = fixtures.save("demos", DEMOS)
    logger.info(f"已写入 {path}，共 {len(DEMOS)} 个演示")
    for name, count in fixtures.get_stats().items():
        logger.info(f"  {name}: {count} 条")


if __name__ == "__main__":
    main()
