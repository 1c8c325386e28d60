from typing import Dict, Any, Optional
import logging
import traceback
from datetime import datetime
import json
import uuid
from pathlib import Path

from app.config.settings import get_settings

logger = logging.getLogger(__name__)
settings = get_settings()

# 退出码
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


class GroupcastError(Exception):
    """所有领域错误的基类"""


class DomainError(GroupcastError, ValueError):
    """参数超出定义域：接收端下标越界、标签不在族中、非上集等"""


class OrderLawError(DomainError):
    """偏序不满足叠加序定律或反对称性"""


class DimensionMismatchError(GroupcastError, ValueError):
    """生成向量、字母表或数组形状不匹配"""


class EvaluationError(GroupcastError, KeyError):
    """求值时缺少熵符号或坐标"""

    def __str__(self) -> str:
        # KeyError 默认会给消息加引号
        return str(self.args[0]) if self.args else ""


class InputError(GroupcastError, ValueError):
    """输入文件无法解析或名称未知"""


class ResourceCapError(GroupcastError, RuntimeError):
    """超出表格、码本或元组数量上限"""


class ErrorHandler:
    """统一的错误处理类"""

    def __init__(self, log_dir: Optional[str] = None, persist: Optional[bool] = None):
        self.log_dir = Path(log_dir) if log_dir else Path(settings.LOG_DIR)
        self.persist = settings.PERSIST_ERRORS if persist is None else persist

    def handle_error(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        处理错误并返回用户友好的错误信息

        Args:
            error: 异常对象
            context: 错误发生的上下文信息（命令、输入路径等）

        Returns:
            错误处理结果，包含 exit_code
        """
        error_id = self._generate_error_id()
        error_details = {
            'error_id': error_id,
            'timestamp': datetime.now().isoformat(),
            'error_type': type(error).__name__,
            'error_message': str(error),
            'traceback': traceback.format_exc(),
            'context': context or {}
        }

        # 预期内的错误只记一行；未知错误带上堆栈
        if isinstance(error, GroupcastError):
            logger.error(f"[{error_id}] {error_details['error_type']}: {error}")
        else:
            logger.error(
                f"Error ID: {error_id}\n"
                f"Type: {error_details['error_type']}\n"
                f"Message: {error_details['error_message']}\n"
                f"Context: {json.dumps(context, ensure_ascii=False, default=str) if context else 'None'}\n"
                f"Traceback:\n{error_details['traceback']}"
            )

        if self.persist:
            self._save_error_details(error_details)

        return self._get_user_friendly_error(error, error_id)

    def exit_code(self, error: Exception) -> int:
        """把异常映射为命令行退出码"""
        if isinstance(error, ResourceCapError):
            return EXIT_RESOURCE
        return EXIT_INPUT

    def _generate_error_id(self) -> str:
        """生成唯一的错误ID"""
        return f"ERR-{datetime.now().strftime('%Y%m%d-%H%M%S')}-{uuid.uuid4().hex[:8]}"

    def _save_error_details(self, error_details: Dict[str, Any]):
        """保存错误详情到文件"""
        self.log_dir.mkdir(parents=True, exist_ok=True)
        error_file = self.log_dir / f"error_{error_details['error_id']}.json"
        with open(error_file, 'w', encoding='utf-8') as f:
            json.dump(error_details, f, ensure_ascii=False, indent=2, default=str)

    def _get_user_friendly_error(self, error: Exception, error_id: str) -> Dict[str, Any]:
        """生成用户友好的错误信息"""
        if isinstance(error, ResourceCapError):
            suggestion = '请减小问题规模，或通过 GROUPCAST_* 环境变量调高上限'
            message = str(error)
        elif isinstance(error, OrderLawError):
            suggestion = '叠加序只允许 S <= S\' 且 S 真包含于 S\''
            message = str(error)
        elif isinstance(error, EvaluationError):
            suggestion = '请检查熵赋值是否覆盖了所有符号'
            message = str(error)
        elif isinstance(error, (GroupcastError, ValueError)):
            suggestion = '请检查输入是否正确'
            message = str(error)
        elif isinstance(error, FileNotFoundError):
            suggestion = '请确认文件路径是否正确'
            message = '找不到指定的文件'
        else:
            suggestion = '请查看日志中的堆栈信息'
            message = '发生未知错误'
        return {
            'success': False,
            'error_id': error_id,
            'message': message,
            'suggestion': suggestion,
            'exit_code': self.exit_code(error)
        }

    def get_error_details(self, error_id: str) -> Optional[Dict[str, Any]]:
        """获取指定错误ID的详细信息"""
        error_file = self.log_dir / f"error_{error_id}.json"
        if error_file.exists():
            with open(error_file, 'r', encoding='utf-8') as f:
                return json.load(f)
        return None
