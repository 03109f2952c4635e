"""
TipTrait Convex Hull Model
"""
from dataclasses import dataclass

from .detection import TipPoint


@dataclass(frozen=True)
class ConvexHull:
    """
    叶尖凸包

    vertices 在 y 轴翻转后的数学平面中按逆时针排列，且严格凸；
    不足 3 个不共线点时 degenerate=True，vertices 为极值点
    """

    vertices: tuple[TipPoint, ...]
    degenerate: bool

    def __len__(self) -> int:
        return len(self.vertices)
