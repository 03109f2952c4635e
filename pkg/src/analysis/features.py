"""
TipTrait Feature Aggregation

性状记录 → 基因型特征矩阵，以及聚类前的 z-score 标准化

重复与日期合并为单一均值（不做嵌套平均）
"""
from typing import Sequence

import numpy as np
import pandas as pd

from src.core import AggregationError, get_logger
from src.domain import TRAIT_NAMES, AggregationScheme, FeatureMatrix, TraitRecord, Treatment

from .traits import records_frame

logger = get_logger(__name__)


def _select(records: Sequence[TraitRecord], scheme: AggregationScheme) -> pd.DataFrame:
    frame = records_frame(records)
    if frame.empty:
        return frame
    mask = frame["treatment"].isin([t.value for t in scheme.treatments])
    if scheme.dat_range is not None:
        low, high = scheme.dat_range
        mask &= frame["dat"].between(low, high, inclusive="both")
    return frame[mask]


def aggregate(records: Sequence[TraitRecord], scheme: AggregationScheme) -> FeatureMatrix:
    """
    按方案聚合为特征矩阵

    Args:
        records: 性状记录
        scheme: 聚合方案

    Returns:
        行 = 基因型（字典序），列 = `<feature>.<treatment>.mean`

    Raises:
        AggregationError: 某基因型在某个 (feature, treatment) 单元没有可用记录
    """
    genotypes = sorted({r.genotype for r in records})
    if not genotypes:
        raise AggregationError("no trait records to aggregate")

    selected = _select(records, scheme)
    # NaN ratios (degenerate hulls) drop out of that feature's mean only
    means = (
        selected.groupby(["genotype", "treatment"])[list(scheme.features)].mean()
        if not selected.empty
        else pd.DataFrame(columns=list(scheme.features))
    )

    values = np.empty((len(genotypes), len(scheme.features) * len(scheme.treatments)), dtype=float)
    columns = scheme.column_names()
    for i, genotype in enumerate(genotypes):
        j = 0
        for feature in scheme.features:
            for treatment in scheme.treatments:
                key = (genotype, treatment.value)
                value = means.at[key, feature] if key in means.index else np.nan
                if pd.isna(value):
                    raise AggregationError(
                        f"genotype {genotype!r} has no usable records for {columns[j]}",
                        genotype=genotype,
                        cell=columns[j],
                    )
                values[i, j] = float(value)
                j += 1

    logger.debug(f"Aggregated {len(records)} record(s) into {len(genotypes)}x{len(columns)} matrix")
    return FeatureMatrix(tuple(genotypes), tuple(columns), values, standardized=False)


def standardize(m: FeatureMatrix) -> FeatureMatrix:
    """
    列 z-score（样本标准差）

    常数列映射为全 0
    """
    if m.standardized:
        raise AggregationError("feature matrix is already standardized")
    rows = m.shape[0]
    if rows < 2:
        raise AggregationError(f"standardization needs at least 2 rows, got {rows}")

    values = np.zeros_like(m.values)
    for j in range(m.shape[1]):
        column = m.values[:, j]
        if np.ptp(column) == 0:
            continue
        values[:, j] = (column - column.mean()) / column.std(ddof=1)
    return m.with_values(values, standardized=True)


def treatment_response(records: Sequence[TraitRecord], traits: Sequence[str] = TRAIT_NAMES) -> pd.DataFrame:
    """
    胁迫响应表

    每个基因型 × 性状：对照均值、干旱均值、干旱/对照比值。
    比值越接近 1 表示受干旱影响越小；缺少任一处理时比值为空
    """
    unknown = [t for t in traits if t not in TRAIT_NAMES]
    if unknown:
        raise ValueError(f"unknown traits: {', '.join(unknown)}")
    columns = ["genotype", "trait", "control_mean", "drought_mean", "drought_to_control"]
    frame = records_frame(records)
    if frame.empty:
        return pd.DataFrame(columns=columns)

    means = frame.groupby(["genotype", "treatment"])[list(traits)].mean()
    rows = []
    for genotype in sorted(frame["genotype"].unique()):
        for trait in traits:
            control = means[trait].get((genotype, Treatment.CONTROL.value), np.nan)
            drought = means[trait].get((genotype, Treatment.DROUGHT.value), np.nan)
            ratio = drought / control if pd.notna(control) and pd.notna(drought) and control != 0 else np.nan
            rows.append(
                {
                    "genotype": genotype,
                    "trait": trait,
                    "control_mean": control,
                    "drought_mean": drought,
                    "drought_to_control": ratio,
                }
            )
    return pd.DataFrame(rows, columns=columns)
