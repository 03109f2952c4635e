"""检测评估模块"""

from .matcher import PlantEvaluation, default_radius, evaluate_dataset, match_tips

__all__ = ["match_tips", "evaluate_dataset", "default_radius", "PlantEvaluation"]
