"""
TipTrait Trait Record

单株五项性状：叶片数、凸包面积、单位凸包面积叶片数、水平/垂直冠幅
"""
from dataclasses import dataclass
from typing import Optional

from .plant import Treatment

# Degeneracy threshold (px²) below which leaves_per_hull is absent
AREA_EPSILON = 1e-9

TRAIT_NAMES: tuple[str, ...] = (
    "n_leaves",
    "hull_area",
    "leaves_per_hull",
    "h_spread",
    "v_spread",
)


@dataclass(frozen=True)
class TraitRecord:
    """一条 (plant, dat) 的性状记录，几何量单位为像素"""

    plant_id: str
    genotype: str
    treatment: Treatment
    dat: int
    n_leaves: int
    hull_area: float
    leaves_per_hull: Optional[float]
    h_spread: float
    v_spread: float

    def __post_init__(self) -> None:
        if self.n_leaves < 0:
            raise ValueError(f"n_leaves must be non-negative, got {self.n_leaves}")
        for name in ("hull_area", "h_spread", "v_spread"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")

    def value(self, trait: str) -> Optional[float]:
        """按名称取性状值（leaves_per_hull 可能缺失）"""
        if trait not in TRAIT_NAMES:
            raise KeyError(f"unknown trait {trait!r}")
        value = getattr(self, trait)
        return None if value is None else float(value)
