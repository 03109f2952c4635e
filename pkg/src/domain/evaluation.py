"""
TipTrait Evaluation Report
"""
from dataclasses import dataclass, field
from typing import Any, Iterable


def _ratio(numerator: int, denominator: int) -> float:
    # 0/0 counts as perfect
    return 1.0 if denominator == 0 else numerator / denominator


@dataclass(frozen=True)
class EvalReport:
    """叶尖检测评估结果"""

    true_positives: int
    false_positives: int
    false_negatives: int
    matches: tuple[tuple[int, int, float], ...] = field(default=())

    @property
    def precision(self) -> float:
        return _ratio(self.true_positives, self.true_positives + self.false_positives)

    @property
    def recall(self) -> float:
        return _ratio(self.true_positives, self.true_positives + self.false_negatives)

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 0.0 if p + r == 0 else 2 * p * r / (p + r)

    @classmethod
    def combine(cls, reports: Iterable["EvalReport"]) -> "EvalReport":
        """汇总多株的计数（不保留逐点匹配）"""
        tp = fp = fn = 0
        for report in reports:
            tp += report.true_positives
            fp += report.false_positives
            fn += report.false_negatives
        return cls(tp, fp, fn)

    def to_dict(self, include_matches: bool = False) -> dict[str, Any]:
        result: dict[str, Any] = {
            "true_positives": self.true_positives,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }
        if include_matches:
            result["matches"] = [
                {"predicted": p, "truth": t, "distance": d} for p, t, d in self.matches
            ]
        return result
