"""
TipTrait Planar Geometry

叶尖点集的凸包、多边形面积与冠幅

所有计算使用像素坐标。图像坐标 y 向下，方向判断在 y 翻转后的数学平面中进行，
因此 "逆时针" 指翻转后的逆时针。方向谓词用双精度叉积，恰好为 0 视为共线；
检测器坐标是量化值，不做精确算术（已知限制）。
"""
import math
from typing import Iterable, Sequence

import numpy as np

from src.core import GeometryError
from src.domain import ConvexHull, TipPoint


def orientation(o: TipPoint, a: TipPoint, b: TipPoint) -> float:
    """
    y 翻转平面中 (o→a) × (o→b) 的叉积

    > 0: o→a→b 左转（逆时针）；< 0: 右转；= 0: 共线
    """
    return (a.x - o.x) * (o.y - b.y) - (o.y - a.y) * (b.x - o.x)


def _check_finite(points: Sequence[TipPoint]) -> None:
    for p in points:
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise GeometryError(f"non-finite coordinate in point {p}")


def convex_hull(points: Iterable[TipPoint]) -> ConvexHull:
    """
    Andrew 单调链凸包

    重复点先去重；共线的边界点被丢弃（严格凸）。
    少于 3 个不同点或全部共线时返回 degenerate=True，顶点为极值点。
    起点为 (x, -y) 字典序最小的点，故对顶点序列再求凸包得到相同序列。
    """
    points = list(points)
    _check_finite(points)

    # Sort in the y-up frame: x ascending, then flipped y ascending
    unique = sorted({(p.x, p.y) for p in points}, key=lambda xy: (xy[0], -xy[1]))
    pts = [TipPoint(x, y) for x, y in unique]

    if len(pts) <= 2:
        return ConvexHull(vertices=tuple(pts), degenerate=True)

    lower: list[TipPoint] = []
    for p in pts:
        while len(lower) >= 2 and orientation(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)

    upper: list[TipPoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orientation(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)

    vertices = lower[:-1] + upper[:-1]
    if len(vertices) < 3:
        # All collinear: the chain collapses onto the two extreme points
        return ConvexHull(vertices=(pts[0], pts[-1]), degenerate=True)
    return ConvexHull(vertices=tuple(vertices), degenerate=False)


def polygon_area(hull: ConvexHull) -> float:
    """鞋带公式面积（px²）；退化凸包为 0.0"""
    if hull.degenerate or len(hull.vertices) < 3:
        return 0.0
    xs = np.fromiter((v.x for v in hull.vertices), dtype=float, count=len(hull.vertices))
    # Flip y so CCW vertices give a positive signed area
    ys = -np.fromiter((v.y for v in hull.vertices), dtype=float, count=len(hull.vertices))
    signed = 0.5 * float(np.dot(xs, np.roll(ys, -1)) - np.dot(np.roll(xs, -1), ys))
    return abs(signed)


def spreads(points: Iterable[TipPoint]) -> tuple[float, float]:
    """
    水平与垂直冠幅（px）

    h_spread = max x − min x，v_spread = max y − min y（均为俯视图）
    """
    points = list(points)
    if not points:
        raise GeometryError("spreads of an empty point set are undefined")
    _check_finite(points)
    coords = np.array([(p.x, p.y) for p in points], dtype=float)
    extent = np.ptp(coords, axis=0)
    return float(extent[0]), float(extent[1])


def contains(hull: ConvexHull, point: TipPoint, tolerance: float = 0.0) -> bool:
    """
    点在凸包内或边界上

    tolerance 为叉积允许的负偏差（px²）；退化凸包按线段/点判断
    """
    vertices = hull.vertices
    if not vertices:
        return False
    if len(vertices) == 1:
        v = vertices[0]
        return math.hypot(point.x - v.x, point.y - v.y) ** 2 <= tolerance
    if hull.degenerate:
        a, b = vertices[0], vertices[-1]
        if abs(orientation(a, b, point)) > tolerance:
            return False
        dot = (point.x - a.x) * (b.x - a.x) + (point.y - a.y) * (b.y - a.y)
        length2 = (b.x - a.x) ** 2 + (b.y - a.y) ** 2
        return -tolerance <= dot <= length2 + tolerance
    n = len(vertices)
    return all(
        orientation(vertices[i], vertices[(i + 1) % n], point) >= -tolerance for i in range(n)
    )
