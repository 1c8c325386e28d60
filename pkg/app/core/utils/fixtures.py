"""打包的固定数据：演示用的种子、问题规格与实验参数"""

from pathlib import Path
from typing import Any, Dict, List, Optional
import logging

from app.config.settings import get_settings
from app.core.utils.error_handler import InputError
from app.core.utils.io_utils import load_json, write_json_atomic

logger = logging.getLogger(__name__)
settings = get_settings()


class FixtureManager:
    def __init__(self, root: Optional[Path] = None):
        self.root = Path(root) if root else Path(settings.FIXTURES_PATH)
        self._cache: Dict[str, Any] = {}

    def path(self, name: str) -> Path:
        return self.root / f"{name}.json"

    def list_fixtures(self) -> List[str]:
        """列出所有固定数据文件名（不含扩展名）"""
        if not self.root.exists():
            return []
        return sorted(p.stem for p in self.root.glob("*.json"))

    def load(self, name: str) -> Any:
        """读取固定数据，结果按名称缓存"""
        if name not in self._cache:
            path = self.path(name)
            if not path.exists():
                raise InputError(f"找不到固定数据 {name!r}（{path}），可运行 scripts/generate_fixtures.py 重新生成")
            self._cache[name] = load_json(path)
            logger.debug(f"已加载固定数据 {name}")
        return self._cache[name]

    def section(self, name: str, key: str) -> Dict[str, Any]:
        data = self.load(name)
        try:
            return data[key]
        except (KeyError, TypeError):
            raise InputError(f"固定数据 {name!r} 中没有 {key!r}") from None

    def save(self, name: str, payload: Any) -> Path:
        self._cache.pop(name, None)
        return write_json_atomic(self.path(name), payload)

    def get_stats(self) -> Dict[str, int]:
        """每个文件的顶层条目数"""
        stats = {}
        for name in self.list_fixtures():
            data = self.load(name)
            stats[name] = len(data) if isinstance(data, (dict, list)) else 1
        return stats
