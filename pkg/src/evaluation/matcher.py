"""
TipTrait Tip Matcher

检测叶尖 vs 真值叶尖：按距离升序贪心匹配，计算 precision / recall / F1
"""
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from src.core import get_config, get_logger
from src.domain import EvalReport, PlantObservation, TipPoint

logger = get_logger(__name__)


def _coords(points: Sequence[TipPoint]) -> np.ndarray:
    return np.array([p.as_tuple() for p in points], dtype=float).reshape(-1, 2)


def match_tips(predicted: Sequence[TipPoint], truth: Sequence[TipPoint], radius: float) -> EvalReport:
    """
    贪心匹配

    候选对按 (距离, 预测下标, 真值下标) 升序处理；距离 ≤ radius 且两端都未匹配时成对

    Args:
        predicted: 检测叶尖
        truth: 真值叶尖
        radius: 匹配半径（px，> 0）

    Returns:
        EvalReport
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if not predicted or not truth:
        return EvalReport(0, len(predicted), len(truth))

    distances = cdist(_coords(predicted), _coords(truth))
    pred_idx, truth_idx = np.nonzero(distances <= radius)
    candidate = distances[pred_idx, truth_idx]
    # lexsort: last key is primary
    order = np.lexsort((truth_idx, pred_idx, candidate))

    used_pred: set[int] = set()
    used_truth: set[int] = set()
    matches = []
    for k in order:
        i, j = int(pred_idx[k]), int(truth_idx[k])
        if i in used_pred or j in used_truth:
            continue
        used_pred.add(i)
        used_truth.add(j)
        matches.append((i, j, float(candidate[k])))

    tp = len(matches)
    return EvalReport(tp, len(predicted) - tp, len(truth) - tp, tuple(matches))


def default_radius(image_width: int, image_height: int) -> float:
    """默认匹配半径：图像对角线 × match_radius_fraction（默认 2%）"""
    return get_config().match_radius_fraction * math.hypot(image_width, image_height)


@dataclass(frozen=True)
class PlantEvaluation:
    """单株评估结果"""

    plant_id: str
    dat: int
    radius: float
    report: EvalReport

    def to_dict(self) -> dict:
        return {"plant_id": self.plant_id, "dat": self.dat, "radius": self.radius, **self.report.to_dict()}


def evaluate_dataset(
    pairs: Iterable[tuple[PlantObservation, PlantObservation]],
    radius: Optional[float] = None,
) -> tuple[list[PlantEvaluation], EvalReport]:
    """
    逐株评估并汇总

    Args:
        pairs: (检测, 真值) 观测对
        radius: 匹配半径；None 时按每株图像对角线取默认值

    Returns:
        (逐株结果, 汇总报告)
    """
    results = []
    for predicted, truth in pairs:
        r = radius if radius is not None else default_radius(truth.image_width, truth.image_height)
        report = match_tips(predicted.tips, truth.tips, r)
        results.append(PlantEvaluation(truth.plant_id, truth.dat, r, report))
        logger.debug(
            f"{truth.plant_id} d{truth.dat}: TP={report.true_positives} "
            f"FP={report.false_positives} FN={report.false_negatives}"
        )
    pooled = EvalReport.combine(r.report for r in results)
    logger.info(f"Evaluated {len(results)} plant(s): precision={pooled.precision:.4f} recall={pooled.recall:.4f}")
    return results, pooled
