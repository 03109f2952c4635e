"""
TipTrait Analysis

几何、性状、特征聚合与聚类
"""
from .clustering import (
    cophenetic_correlation,
    cophenetic_distances,
    cut_tree,
    distance_matrix,
    leaf_order,
    ordered_children,
    ward_linkage,
)
from .features import aggregate, standardize, treatment_response
from .geometry import contains, convex_hull, orientation, polygon_area, spreads
from .traits import compute_traits, records_frame, trait_series, traits_table

__all__ = [
    "convex_hull",
    "polygon_area",
    "spreads",
    "orientation",
    "contains",
    "compute_traits",
    "traits_table",
    "trait_series",
    "records_frame",
    "aggregate",
    "standardize",
    "treatment_response",
    "distance_matrix",
    "ward_linkage",
    "cut_tree",
    "cophenetic_distances",
    "cophenetic_correlation",
    "leaf_order",
    "ordered_children",
]
