"""
TipTrait Clustering Models

合并步骤与压缩距离矩阵
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import squareform


@dataclass(frozen=True)
class MergeStep:
    """
    一次合并

    left/right 为簇编号：0..n-1 为原始行，n, n+1, ... 为第 0, 1, ... 次合并产生的簇
    """

    left: int
    right: int
    height: float
    size: int

    def to_dict(self) -> dict:
        return {"left": self.left, "right": self.right, "height": self.height, "size": self.size}


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """压缩形式（上三角按行展开）的成对距离"""

    n: int
    condensed: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        condensed = np.array(self.condensed, dtype=float, copy=True).ravel()
        expected = self.n * (self.n - 1) // 2
        if self.n < 1 or condensed.size != expected:
            raise ValueError(f"condensed size {condensed.size} does not match n={self.n}")
        if not np.all(np.isfinite(condensed)) or np.any(condensed < 0):
            raise ValueError("distances must be finite and non-negative")
        condensed.setflags(write=False)
        object.__setattr__(self, "condensed", condensed)

    def index(self, i: int, j: int) -> int:
        """(i, j) 在压缩向量中的位置（i != j）"""
        if i == j:
            raise ValueError("diagonal has no condensed index")
        if i > j:
            i, j = j, i
        return self.n * i - i * (i + 1) // 2 + (j - i - 1)

    def __getitem__(self, pair: tuple[int, int]) -> float:
        i, j = pair
        if i == j:
            return 0.0
        return float(self.condensed[self.index(i, j)])

    def square(self) -> np.ndarray:
        return squareform(self.condensed, checks=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.condensed, other.condensed)

    __hash__ = None  # type: ignore[assignment]
