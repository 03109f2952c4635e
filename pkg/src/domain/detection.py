"""
TipTrait Detection Models

检测框与叶尖坐标：检测器输出的归一化框，以及换算后的像素坐标
"""
import math
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class TipPoint:
    """叶尖像素坐标（原点左上，x 向右，y 向下）"""

    x: float
    y: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class TipDetection:
    """
    一个叶尖候选框

    cx/cy/w/h 均为相对图像宽高的归一化值，confidence 可选
    """

    class_id: int
    cx: float
    cy: float
    w: float
    h: float
    confidence: Optional[float] = None

    def __post_init__(self) -> None:
        if self.class_id < 0:
            raise ValueError(f"class_id must be non-negative, got {self.class_id}")
        for name in ("cx", "cy", "w", "h"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        if not (0.0 <= self.cx <= 1.0 and 0.0 <= self.cy <= 1.0):
            raise ValueError(f"center ({self.cx}, {self.cy}) outside [0, 1]")
        if not (0.0 < self.w <= 1.0 and 0.0 < self.h <= 1.0):
            raise ValueError(f"box extent ({self.w}, {self.h}) outside (0, 1]")
        if self.confidence is not None and not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")

    def center(self, image_width: int, image_height: int) -> TipPoint:
        """框中心作为叶尖位置（像素）"""
        return TipPoint(self.cx * image_width, self.cy * image_height)
