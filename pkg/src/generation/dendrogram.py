"""
TipTrait Dendrogram Renderers

树状图导出：Newick 文本、SVG 文档（Jinja2 模板，手工 XML，无绘图引擎）、等宽 ASCII

叶序统一使用 clustering.leaf_order（中序遍历，含较小行编号的子簇在前）
"""
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, select_autoescape

from src.analysis.clustering import leaf_order, ordered_children
from src.core import RenderError, get_config, get_logger
from src.domain import MergeStep

logger = get_logger(__name__)

Orientation = Literal["top", "left"]

_NEWICK_RESERVED = set(",:;()[]'")


def _check_labels(merges: Sequence[MergeStep], labels: Sequence[str]) -> int:
    n = len(merges) + 1
    if len(labels) != n:
        raise RenderError(f"{len(labels)} label(s) for a tree with {n} leaves")
    return n


def _length(value: float) -> str:
    return f"{value:.15g}"


def quote_newick_label(label: str) -> str:
    """含保留字符或空白的标签用单引号包裹（内部单引号写两次）"""
    if label and not any(c in _NEWICK_RESERVED or c.isspace() for c in label):
        return label
    return "'" + label.replace("'", "''") + "'"


def to_newick(merges: Sequence[MergeStep], labels: Sequence[str]) -> str:
    """
    Newick 文本

    分支长度 = 父节点高度 − 子节点高度（叶高度为 0），以 ";" 结尾
    """
    n = _check_labels(merges, labels)
    if n == 1:
        return f"{quote_newick_label(labels[0])};"

    heights = {i: 0.0 for i in range(n)}
    for step, merge in enumerate(merges):
        heights[n + step] = merge.height
    children = ordered_children(merges)

    def render(node: int, parent_height: float) -> str:
        length = _length(parent_height - heights[node])
        if node < n:
            return f"{quote_newick_label(labels[node])}:{length}"
        left, right = children[node]
        inner = f"{render(left, heights[node])},{render(right, heights[node])}"
        return f"({inner}):{length}"

    root = n + len(merges) - 1
    left, right = children[root]
    return f"({render(left, heights[root])},{render(right, heights[root])});"


@dataclass(frozen=True)
class SvgOptions:
    """SVG 画布参数"""

    width: Optional[int] = None
    height: Optional[int] = None
    orientation: Orientation = "top"
    title: str = "Ward dendrogram"


def _nice_ticks(maximum: float, target: int = 5) -> list[float]:
    if maximum <= 0:
        return [0.0, 1.0]
    raw = maximum / target
    magnitude = 10 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1, 2, 5, 10) if m * magnitude >= raw)
    count = int(math.ceil(maximum / step - 1e-9))
    return [round(i * step, 12) for i in range(count + 1)]


class DendrogramRenderer:
    """
    SVG 树状图渲染器

    每次合并画 3 条线段（U 形连接），叶标签按叶序排列，高度轴线性带刻度
    """

    margin = {"left": 70, "right": 30, "top": 40, "bottom": 30}
    label_space = 150

    def __init__(self, template_dir: Optional[Path] = None):
        if template_dir is None:
            template_dir = Path(__file__).parent / "templates"
        self.jinja_env = Environment(
            loader=FileSystemLoader(str(template_dir)),
            autoescape=select_autoescape(["html", "xml", "svg"]),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )

    def render(self, merges: Sequence[MergeStep], labels: Sequence[str], options: SvgOptions) -> str:
        config = get_config()
        width = options.width if options.width is not None else config.svg_width
        height = options.height if options.height is not None else config.svg_height
        if width <= 0 or height <= 0:
            raise RenderError(f"canvas must be positive, got {width}x{height}")
        if options.orientation not in ("top", "left"):
            raise RenderError(f"unknown orientation {options.orientation!r}")
        n = _check_labels(merges, labels)

        order = leaf_order(merges)
        position = {leaf: float(i) for i, leaf in enumerate(order)}
        node_height = {i: 0.0 for i in range(n)}
        for step, merge in enumerate(merges):
            position[n + step] = (position[merge.left] + position[merge.right]) / 2
            node_height[n + step] = merge.height

        ticks = _nice_ticks(max((m.height for m in merges), default=0.0))
        axis_max = ticks[-1]

        m = self.margin
        if options.orientation == "top":
            plot = (m["left"], m["top"], width - m["right"], height - m["bottom"] - self.label_space)
        else:
            plot = (m["left"], m["top"], width - m["right"] - self.label_space, height - m["bottom"] - 30)
        x0, y0, x1, y1 = plot
        if x1 <= x0 or y1 <= y0:
            raise RenderError(f"canvas {width}x{height} too small for the dendrogram")

        def to_xy(pos: float, h: float) -> tuple[float, float]:
            if options.orientation == "top":
                x = x0 + (pos + 0.5) * (x1 - x0) / n
                y = y1 - h / axis_max * (y1 - y0)
            else:
                y = y0 + (pos + 0.5) * (y1 - y0) / n
                x = x1 - h / axis_max * (x1 - x0)
            return round(x, 2), round(y, 2)

        links = []
        for step, merge in enumerate(merges):
            top = merge.height
            for child in (merge.left, merge.right):
                links.append((*to_xy(position[child], node_height[child]), *to_xy(position[child], top)))
            links.append((*to_xy(position[merge.left], top), *to_xy(position[merge.right], top)))

        leaves = []
        for leaf in order:
            x, y = to_xy(position[leaf], 0.0)
            if options.orientation == "top":
                leaves.append({"x": x, "y": round(y + 8, 2), "text": labels[leaf], "rotate": -90, "anchor": "end"})
            else:
                leaves.append({"x": round(x + 6, 2), "y": round(y + 4, 2), "text": labels[leaf], "rotate": 0, "anchor": "start"})

        tick_marks = []
        for value in ticks:
            if options.orientation == "top":
                _, y = to_xy(0, value)
                tick_marks.append({"x1": x0 - 10, "y1": y, "x2": x0 - 4, "y2": y,
                                   "tx": x0 - 12, "ty": round(y + 4, 2), "anchor": "end", "text": f"{value:g}"})
            else:
                x, _ = to_xy(0, value)
                tick_marks.append({"x1": x, "y1": y1 + 4, "x2": x, "y2": y1 + 10,
                                   "tx": x, "ty": y1 + 24, "anchor": "middle", "text": f"{value:g}"})
        if options.orientation == "top":
            axis = (x0 - 4, y0, x0 - 4, y1)
        else:
            axis = (x0, y1 + 4, x1, y1 + 4)

        template = self.jinja_env.get_template("dendrogram.svg")
        document = template.render(
            width=width,
            height=height,
            title=options.title,
            links=links,
            leaves=leaves,
            axis=axis,
            ticks=tick_marks,
            title_x=round(width / 2, 2),
        )
        logger.debug(f"Rendered SVG dendrogram with {n} leaves ({options.orientation})")
        return document


def render_svg(
    merges: Sequence[MergeStep],
    labels: Sequence[str],
    options: Optional[SvgOptions] = None,
) -> str:
    """SVG 1.1 独立文档"""
    return DendrogramRenderer().render(merges, labels, options or SvgOptions())


def render_ascii(merges: Sequence[MergeStep], labels: Sequence[str], width: int = 40) -> str:
    """
    等宽文本树状图

    每个叶子一行（与 SVG 相同叶序），根在右侧，末行为高度刻度
    """
    n = _check_labels(merges, labels)
    if n == 1:
        return f"{labels[0]}\n"

    order = leaf_order(merges)
    label_width = max(len(label) for label in labels)
    max_height = max(m.height for m in merges)

    def column(h: float) -> int:
        return 0 if max_height <= 0 else int(round(h / max_height * (width - 1)))

    rows = 2 * n - 1
    grid = [[" "] * width for _ in range(rows)]
    row = {leaf: 2 * i for i, leaf in enumerate(order)}
    col = {i: 0 for i in range(n)}

    for step, merge in enumerate(merges):
        node = n + step
        cp = column(merge.height)
        rl, rr = row[merge.left], row[merge.right]
        for child, r in ((merge.left, rl), (merge.right, rr)):
            start = 0 if child < n else col[child] + 1
            for c in range(start, cp):
                grid[r][c] = "-"
        top, bottom = min(rl, rr), max(rl, rr)
        for r in range(top + 1, bottom):
            grid[r][cp] = "|"
        grid[rl][cp] = "+"
        grid[rr][cp] = "+"
        row[node] = (rl + rr) // 2
        col[node] = cp

    lines = []
    label_at_row = {row[leaf]: labels[leaf] for leaf in order}
    for r in range(rows):
        text = label_at_row.get(r, "")
        lines.append(f"{text:<{label_width}} {''.join(grid[r])}".rstrip())
    scale_left = "0"
    scale_right = f"{max_height:.4g}"
    padding = max(1, width - len(scale_left) - len(scale_right))
    lines.append(f"{'':<{label_width}} {scale_left}{' ' * padding}{scale_right}")
    return "\n".join(lines) + "\n"
