"""
TipTrait Data Parsers

检测文件、实验清单与性状表的解析
"""

from .base import BaseParser, ParseResult, ParseWarning
from .detection_parser import DetectionParser, format_detection_line, parse_detection_file
from .manifest_parser import (
    MANIFEST_COLUMNS,
    REQUIRED_COLUMNS,
    Manifest,
    ManifestParser,
    ManifestRow,
    format_manifest,
    parse_manifest,
)
from .trait_table_parser import TraitTableParser, parse_traits_csv, trait_columns

__all__ = [
    "BaseParser",
    "ParseResult",
    "ParseWarning",
    "DetectionParser",
    "parse_detection_file",
    "format_detection_line",
    "Manifest",
    "ManifestRow",
    "ManifestParser",
    "parse_manifest",
    "format_manifest",
    "MANIFEST_COLUMNS",
    "REQUIRED_COLUMNS",
    "TraitTableParser",
    "parse_traits_csv",
    "trait_columns",
]
