"""
TipTrait Feature Models

聚合方案与基因型 × 特征矩阵
"""
from dataclasses import dataclass, field
from enum import Enum as PyEnum
from typing import Optional

import numpy as np
import pandas as pd

from .plant import Treatment
from .trait import TRAIT_NAMES


class Statistic(str, PyEnum):
    """Aggregation statistic"""
    MEAN = "mean"


@dataclass(frozen=True)
class AggregationScheme:
    """
    聚合方案

    features 与 treatments 按规范顺序保存（去重），dat_range 为闭区间
    """

    features: tuple[str, ...] = TRAIT_NAMES
    treatments: tuple[Treatment, ...] = (Treatment.CONTROL, Treatment.DROUGHT)
    statistic: Statistic = Statistic.MEAN
    dat_range: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        if not self.features:
            raise ValueError("features must not be empty")
        if not self.treatments:
            raise ValueError("treatments must not be empty")
        unknown = [f for f in self.features if f not in TRAIT_NAMES]
        if unknown:
            raise ValueError(f"unknown features: {', '.join(unknown)}")
        treatments = tuple(Treatment(t) for t in self.treatments)
        object.__setattr__(self, "features", tuple(f for f in TRAIT_NAMES if f in self.features))
        object.__setattr__(self, "treatments", tuple(t for t in Treatment if t in treatments))
        object.__setattr__(self, "statistic", Statistic(self.statistic))
        if self.dat_range is not None:
            low, high = self.dat_range
            if low > high:
                raise ValueError(f"dat_range is empty: {self.dat_range}")

    @classmethod
    def all_features(cls, **kwargs) -> "AggregationScheme":
        """全部五项性状 × 两种处理"""
        return cls(features=TRAIT_NAMES, **kwargs)

    @classmethod
    def leaf_count_only(cls, **kwargs) -> "AggregationScheme":
        """只用叶片数"""
        return cls(features=("n_leaves",), **kwargs)

    def column_names(self) -> list[str]:
        return [
            f"{feature}.{treatment.value}.{self.statistic.value}"
            for feature in self.features
            for treatment in self.treatments
        ]


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """基因型 × 特征矩阵（行标签为基因型）"""

    row_labels: tuple[str, ...]
    column_labels: tuple[str, ...]
    values: np.ndarray = field(repr=False)
    standardized: bool = False

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-D, got shape {values.shape}")
        rows, cols = values.shape
        if len(self.row_labels) != rows or len(self.column_labels) != cols:
            raise ValueError(
                f"label counts ({len(self.row_labels)}, {len(self.column_labels)}) "
                f"do not match matrix shape {values.shape}"
            )
        if len(set(self.row_labels)) != rows:
            raise ValueError("row labels must be unique")
        if len(set(self.column_labels)) != cols:
            raise ValueError("column labels must be unique")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature matrix contains non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "column_labels", tuple(self.column_labels))
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def column(self, label: str) -> np.ndarray:
        return self.values[:, self.column_labels.index(label)]

    def with_values(self, values: np.ndarray, standardized: bool) -> "FeatureMatrix":
        return FeatureMatrix(self.row_labels, self.column_labels, values, standardized)

    def to_frame(self) -> pd.DataFrame:
        """转换为 DataFrame（索引名 genotype）"""
        frame = pd.DataFrame(self.values, index=list(self.row_labels), columns=list(self.column_labels))
        frame.index.name = "genotype"
        return frame

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, standardized: bool = False) -> "FeatureMatrix":
        return cls(
            tuple(str(i) for i in frame.index),
            tuple(str(c) for c in frame.columns),
            frame.to_numpy(dtype=float),
            standardized,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.column_labels == other.column_labels
            and self.standardized == other.standardized
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

