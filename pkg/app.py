import sys
from pathlib import Path

# 添加项目根目录到 Python 路径
project_root = Path(__file__).parent
sys.path.append(str(project_root))

from app.app import main

if __name__ == "__main__":
    sys.exit(main())
