"""
TipTrait Trait Extraction

由一株植物的叶尖计算五项性状

- 叶片数 = 叶尖数（重复坐标也计数）
- 凸包面积、单位凸包面积叶片数、水平/垂直冠幅
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import pandas as pd

from src.core import get_logger
from src.domain import AREA_EPSILON, TRAIT_NAMES, PlantObservation, TraitRecord

from .geometry import convex_hull, polygon_area, spreads

logger = get_logger(__name__)


def compute_traits(obs: PlantObservation, area_epsilon: float = AREA_EPSILON) -> TraitRecord:
    """
    计算单株性状

    叶尖为空时各项为 0 且 leaves_per_hull 缺失；
    凸包面积 < area_epsilon 时 leaves_per_hull 缺失（不报错）
    """
    n_leaves = len(obs.tips)
    if n_leaves == 0:
        hull_area, h_spread, v_spread = 0.0, 0.0, 0.0
    else:
        hull_area = polygon_area(convex_hull(obs.tips))
        h_spread, v_spread = spreads(obs.tips)

    leaves_per_hull: Optional[float] = n_leaves / hull_area if hull_area >= area_epsilon else None

    return TraitRecord(
        plant_id=obs.plant_id,
        genotype=obs.genotype,
        treatment=obs.treatment,
        dat=obs.dat,
        n_leaves=n_leaves,
        hull_area=hull_area,
        leaves_per_hull=leaves_per_hull,
        h_spread=h_spread,
        v_spread=v_spread,
    )


def traits_table(
    dataset: Sequence[PlantObservation],
    jobs: int = 1,
    area_epsilon: float = AREA_EPSILON,
) -> list[TraitRecord]:
    """
    批量计算性状

    jobs > 1 时使用进程池；输出顺序与输入一致，与 worker 数无关
    """
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1, got {jobs}")
    if jobs == 1 or len(dataset) < 2:
        records = [compute_traits(obs, area_epsilon) for obs in dataset]
    else:
        chunksize = max(1, len(dataset) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(
                pool.map(compute_traits, dataset, [area_epsilon] * len(dataset), chunksize=chunksize)
            )
    degenerate = sum(1 for r in records if r.leaves_per_hull is None)
    logger.info(f"Computed traits for {len(records)} observation(s) ({degenerate} degenerate hull(s))")
    return records


def records_frame(records: Sequence[TraitRecord]) -> pd.DataFrame:
    """性状记录转 DataFrame（leaves_per_hull 缺失为 NaN）"""
    columns = ["plant_id", "genotype", "treatment", "dat", *TRAIT_NAMES]
    return pd.DataFrame(
        [
            {
                "plant_id": r.plant_id,
                "genotype": r.genotype,
                "treatment": r.treatment.value,
                "dat": r.dat,
                "n_leaves": float(r.n_leaves),
                "hull_area": r.hull_area,
                "leaves_per_hull": float("nan") if r.leaves_per_hull is None else r.leaves_per_hull,
                "h_spread": r.h_spread,
                "v_spread": r.v_spread,
            }
            for r in records
        ],
        columns=columns,
    )


def trait_series(records: Sequence[TraitRecord], trait: str = "n_leaves") -> pd.DataFrame:
    """
    性状时间序列

    按 genotype × treatment × dat 汇总均值、标准差和记录数，
    用于观察胁迫期内叶片数等性状的变化
    """
    if trait not in TRAIT_NAMES:
        raise ValueError(f"unknown trait {trait!r}")
    frame = records_frame(records)
    columns = ["genotype", "treatment", "dat", "mean", "sd", "count"]
    if frame.empty:
        return pd.DataFrame(columns=columns)
    grouped = (
        frame.groupby(["genotype", "treatment", "dat"], sort=True)[trait]
        .agg(mean="mean", sd="std", count="count")
        .reset_index()
    )
    return grouped[columns]
