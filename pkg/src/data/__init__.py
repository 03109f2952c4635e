"""
TipTrait Data Layer

数据接入：解析器与数据集加载
"""
from .parsers import parse_detection_file, parse_manifest, parse_traits_csv
from .processors import DatasetLoader, load_dataset

__all__ = [
    "parse_detection_file",
    "parse_manifest",
    "parse_traits_csv",
    "DatasetLoader",
    "load_dataset",
]
