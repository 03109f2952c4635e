"""
TipTrait Domain Models

领域模型导出（不可变值类型，无 I/O）
"""
from .clustering import DistanceMatrix, MergeStep
from .detection import TipDetection, TipPoint
from .evaluation import EvalReport
from .feature import AggregationScheme, FeatureMatrix, Statistic
from .hull import ConvexHull
from .plant import REFERENCE_GENOTYPES, PlantObservation, Treatment
from .trait import AREA_EPSILON, TRAIT_NAMES, TraitRecord

__all__ = [
    # Detection
    "TipDetection",
    "TipPoint",
    # Plant
    "PlantObservation",
    "Treatment",
    "REFERENCE_GENOTYPES",
    # Geometry
    "ConvexHull",
    # Traits
    "TraitRecord",
    "TRAIT_NAMES",
    "AREA_EPSILON",
    # Features
    "AggregationScheme",
    "FeatureMatrix",
    "Statistic",
    # Clustering
    "MergeStep",
    "DistanceMatrix",
    # Evaluation
    "EvalReport",
]
