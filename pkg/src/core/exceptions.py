"""
TipTrait Exceptions

库代码只抛出异常，由 CLI 统一转换为退出码
"""
from pathlib import Path
from typing import Optional, Union


class TipTraitError(Exception):
    """所有领域错误的基类"""


class DetectionParseError(TipTraitError):
    """检测文件中某一行无法解析"""

    def __init__(self, line: int, message: str, source: Optional[Union[str, Path]] = None):
        self.line = line
        self.message = message
        self.source = str(source) if source is not None else None
        where = f"{self.source}:{line}" if self.source else f"line {line}"
        super().__init__(f"{where}: {message}")


class ManifestError(TipTraitError):
    """清单文件错误，携带行号（表头为第 1 行）和列名"""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        self.message = message
        parts = []
        if row is not None:
            parts.append(f"row {row}")
        if column is not None:
            parts.append(f"column '{column}'")
        prefix = ", ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class MissingColumnError(ManifestError):
    """缺少必需列"""


class DuplicateKeyError(ManifestError):
    """(plant_id, dat) 重复"""


class UnknownTreatmentError(ManifestError):
    """处理方式不是 control/drought"""


class InvalidIntegerError(ManifestError):
    """整数字段无法解析"""


class InvalidValueError(ManifestError):
    """字段值超出允许范围或为空"""


class DatasetLoadError(TipTraitError):
    """数据集加载失败，指明出错文件"""

    def __init__(self, path: Union[str, Path], message: str):
        self.path = str(path)
        self.message = message
        super().__init__(f"{self.path}: {message}")


class GeometryError(TipTraitError):
    """几何计算输入无效"""


class AggregationError(TipTraitError):
    """特征聚合或标准化失败"""

    def __init__(self, message: str, genotype: Optional[str] = None, cell: Optional[str] = None):
        self.genotype = genotype
        self.cell = cell
        super().__init__(message)


class ClusteringError(TipTraitError):
    """聚类输入或结果无效"""


class RenderError(TipTraitError):
    """树状图渲染参数无效"""


class SynthConfigError(TipTraitError):
    """合成数据配置无效"""
