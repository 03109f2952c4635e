"""核心服务模块"""

from .config import AppSettings, SynthDefaults, get_config
from .exceptions import (
    AggregationError,
    ClusteringError,
    DatasetLoadError,
    DetectionParseError,
    DuplicateKeyError,
    GeometryError,
    InvalidIntegerError,
    InvalidValueError,
    ManifestError,
    MissingColumnError,
    RenderError,
    SynthConfigError,
    TipTraitError,
    UnknownTreatmentError,
)
from .logging import get_logger, setup_logging

__all__ = [
    "AppSettings",
    "SynthDefaults",
    "get_config",
    "setup_logging",
    "get_logger",
    "TipTraitError",
    "DetectionParseError",
    "ManifestError",
    "MissingColumnError",
    "DuplicateKeyError",
    "UnknownTreatmentError",
    "InvalidIntegerError",
    "InvalidValueError",
    "DatasetLoadError",
    "GeometryError",
    "AggregationError",
    "ClusteringError",
    "RenderError",
    "SynthConfigError",
]
