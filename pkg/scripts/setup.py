#!/usr/bin/env python
"""
GroupcastBC 环境设置脚本
用于创建必要的目录结构和配置文件
"""

import sys
import shutil
from pathlib import Path
import logging

# 配置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr
)
logger = logging.getLogger(__name__)

project_root = Path(__file__).parent.parent


def create_directory_structure():
    """创建必要的目录结构"""
    directories = [
        'fixtures',
        'logs',
        'output',
    ]

    for directory in directories:
        (project_root / directory).mkdir(parents=True, exist_ok=True)
        logger.info(f"创建目录: {directory}")


def setup_environment():
    """复制 .env.example 到 .env"""
    env_file = project_root / '.env'
    example = project_root / '.env.example'
    if not env_file.exists() and example.exists():
        shutil.copy(example, env_file)
        logger.info("创建 .env 文件")


def check_dependencies():
    """检查必要的依赖是否已安装"""
    try:
        import numpy
        import pandas
        import scipy
        import pydantic_settings
        import docopt
        import tqdm
        logger.info("核心依赖检查通过")
    except ImportError as e:
        logger.error(f"缺少必要的依赖: {str(e)}")
        logger.info("请运行: pip install -r requirements.txt")
        sys.exit(1)


def main():
    """主函数"""
    logger.info("开始设置 GroupcastBC 环境...")
    create_directory_structure()
    setup_environment()
    check_dependencies()
    logger.info("环境设置完成")


if __name__ == "__main__":
    main()
