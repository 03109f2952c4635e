"""
TipTrait Output Generation Module

导出器与树状图渲染
"""
from .data_exporter import (
    DataExporter,
    atomic_write_many,
    atomic_write_text,
    format_feature_matrix_csv,
    format_labels_csv,
    format_traits_csv,
    merges_from_json,
    merges_to_json,
    write_dataset,
)
from .dendrogram import DendrogramRenderer, SvgOptions, render_ascii, render_svg, to_newick

__all__ = [
    "DataExporter",
    "atomic_write_many",
    "atomic_write_text",
    "format_traits_csv",
    "format_feature_matrix_csv",
    "format_labels_csv",
    "merges_to_json",
    "merges_from_json",
    "write_dataset",
    "DendrogramRenderer",
    "SvgOptions",
    "to_newick",
    "render_svg",
    "render_ascii",
]
