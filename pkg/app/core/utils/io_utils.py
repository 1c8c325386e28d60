"""JSON 读写与有理数序列化工具"""

from typing import Any, Union
from fractions import Fraction
from pathlib import Path
import json
import logging
import os
import tempfile

from app.core.utils.error_handler import InputError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def fraction_to_json(value: Fraction) -> str:
    """有理数统一写成 "p/q"，整数也不例外"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def fraction_from_json(value: Any) -> Fraction:
    """解析 "p/q"、整数或十进制字符串"""
    if isinstance(value, bool):
        raise InputError(f"不是有理数: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"不是有理数: {value!r}") from e


def load_json(path: PathLike) -> Any:
    """
    读取 JSON 文件

    Args:
        path: 文件路径

    Returns:
        解析后的对象
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"文件不存在: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"JSON 解析失败 {path}: {e}") from e


def write_json_atomic(path: PathLike, payload: Any) -> Path:
    """先写临时文件再 rename，避免留下半截输出"""
    return write_text_atomic(path, json.dumps(payload, ensure_ascii=False, indent=2))


def write_text_atomic(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(text)
            if not text.endswith("\n"):
                f.write("\n")
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug(f"已写入 {path}")
    return path
