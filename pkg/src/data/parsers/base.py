"""
TipTrait Base Parser

基础解析器类，定义通用的解析接口
"""
import io
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Generic, Optional, TypeVar

import pandas as pd

from src.core import get_logger

logger = get_logger(__name__)

T = TypeVar("T")

# Plain decimal or scientific notation, ASCII digits and '.' as the only decimal separator
_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?", re.ASCII)


@dataclass(frozen=True)
class ParseWarning:
    """可恢复的解析警告（行号从 1 开始）"""

    line: int
    message: str
    source: Optional[str] = None

    def format(self) -> str:
        """`WARN <file>:<line>: <message>` 形式"""
        return f"WARN {self.source or '<input>'}:{self.line}: {self.message}"


@dataclass
class ParseResult(Generic[T]):
    """解析结果数据类"""

    data: T
    warnings: list[ParseWarning] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)


class BaseParser(ABC, Generic[T]):
    """
    基础解析器类

    解析必须与区域设置无关：只接受小数点，不接受千位分隔符
    """

    def __init__(self):
        """初始化解析器"""
        self.logger = get_logger(self.__class__.__name__)

    @abstractmethod
    def parse(self, content: str, **kwargs) -> ParseResult[T]:
        """
        解析内容

        Args:
            content: 待解析的文本
            **kwargs: 额外参数

        Returns:
            ParseResult: 解析结果
        """

    @staticmethod
    def _strip_bom(text: str) -> str:
        return text[1:] if text.startswith("\ufeff") else text

    @staticmethod
    def _read_table(content: str) -> tuple[list[str], list[tuple[int, dict[str, str]]]]:
        """
        读取带表头的 CSV，返回 (表头列名, [(文件行号, 行字典)])

        空行被跳过但仍计入行号；表头所在行为第 1 个非空行
        """
        lines = content.splitlines()
        header_line = 0
        while header_line < len(lines) and not lines[header_line].strip():
            header_line += 1
        frame = pd.read_csv(
            io.StringIO("\n".join(lines[header_line:]) + "\n"),
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        ).fillna("")
        columns = [str(c).strip() for c in frame.columns]
        frame.columns = columns
        # Data row i sits on physical line header_line + 2 + i (1-based)
        rows = [
            (header_line + 2 + index, record)
            for index, record in enumerate(frame.to_dict(orient="records"))
            if any(str(value).strip() for value in record.values())
        ]
        return columns, rows

    @staticmethod
    def _parse_int(token: str) -> int:
        """严格整数解析（允许前后空白，不允许小数或千位分隔符）"""
        token = token.strip()
        if not token or not token.lstrip("+-").isdigit() or not token.isascii():
            raise ValueError(f"not an integer: {token!r}")
        return int(token)

    @staticmethod
    def _parse_float(token: str) -> float:
        """严格十进制解析（ASCII 数字，只接受小数点，不接受下划线或千位分隔符）"""
        token = token.strip()
        if not _DECIMAL.fullmatch(token):
            raise ValueError(f"not a decimal number: {token!r}")
        return float(token)
