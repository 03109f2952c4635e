"""
TipTrait CLI - 命令行接口

流水线各阶段只通过文件交互：

    synth   → 检测文件 + 真值文件 + 清单
    traits  → 性状表 CSV
    cluster → merges JSON / Newick / SVG / 簇标签 / 特征矩阵 / ASCII
    summary → 时间序列与胁迫响应表
    eval    → 检测评估 JSON

退出码：0 成功，1 数据或运行错误，2 用法错误
"""
import json
import os
from pathlib import Path
from typing import NoReturn, Optional

import pandas as pd
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

from src.core import TipTraitError, get_config, setup_logging
from src.domain import TRAIT_NAMES, AggregationScheme, Treatment

app = typer.Typer(
    name="tiptrait",
    help="TipTrait - 叶尖检测 → 表型性状 → Ward 聚类",
    add_completion=False,
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)


@app.callback()
def main() -> None:
    """日志级别由环境变量 TIPTRAIT_LOG 控制（error/warn/info/debug）"""
    try:
        setup_logging(force=True)
    except ValidationError as e:
        messages = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        err_console.print(f"[bold red]Invalid configuration:[/bold red] {escape(messages)}", highlight=False, soft_wrap=True)
        raise typer.Exit(2)


def _fail(error: Exception) -> NoReturn:
    err_console.print(f"[bold red]Error:[/bold red] {error}", highlight=False, soft_wrap=True)
    raise typer.Exit(1)


def _print_warning(warning) -> None:
    err_console.print(warning.format(), markup=False, highlight=False, soft_wrap=True)


def _default_jobs(jobs: Optional[int]) -> int:
    return jobs or get_config().jobs or os.cpu_count() or 1


def _with_suffix(prefix: Path, suffix: str) -> Path:
    return prefix.with_name(prefix.name + suffix)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise TipTraitError(f"{path}: file not found") from None
    except (OSError, UnicodeDecodeError) as e:
        raise TipTraitError(f"{path}: cannot read file: {e}") from e


def _parse_features(value: str) -> tuple[str, ...]:
    if value.strip().lower() == "all":
        return TRAIT_NAMES
    features = tuple(f.strip() for f in value.split(",") if f.strip())
    unknown = [f for f in features if f not in TRAIT_NAMES]
    if not features or unknown:
        raise typer.BadParameter(
            f"expected 'all' or a comma list of {', '.join(TRAIT_NAMES)}", param_hint="--features"
        )
    return features


def _parse_treatments(value: str) -> tuple[Treatment, ...]:
    try:
        treatments = tuple(Treatment.parse(t) for t in value.split(",") if t.strip())
    except ValueError:
        treatments = ()
    if not treatments:
        raise typer.BadParameter("expected a comma list of control, drought", param_hint="--treatments")
    return treatments


@app.command()
def version():
    """显示版本信息"""
    from src import __version__
    console.print(f"[bold cyan]TipTrait[/bold cyan] [green]v{__version__}[/green]")


@app.command()
def traits(
    manifest: Path = typer.Option(..., "--manifest", help="Manifest CSV"),
    out: Path = typer.Option(..., "--out", help="Traits CSV to write"),
    min_confidence: Optional[float] = typer.Option(
        None, "--min-confidence", min=0.0, max=1.0, help="Drop detections below this confidence"
    ),
    scale: Optional[float] = typer.Option(None, "--scale", help="Millimetres per pixel for the output"),
    jobs: Optional[int] = typer.Option(None, "--jobs", min=1, help="Worker count (default: CPU count)"),
):
    """
    计算每株性状并写出 traits CSV

    叶片数、凸包面积、单位凸包面积叶片数、水平/垂直冠幅
    """
    from src.analysis import traits_table
    from src.data.processors import load_dataset
    from src.generation import atomic_write_text, format_traits_csv

    if scale is not None and not scale > 0:
        raise typer.BadParameter("must be positive", param_hint="--scale")
    workers = _default_jobs(jobs)

    try:
        observations = load_dataset(
            manifest, min_confidence=min_confidence, jobs=workers, on_warning=_print_warning
        )
        records = traits_table(observations, jobs=workers, area_epsilon=get_config().area_epsilon)
        text = format_traits_csv(records, scale=scale)
        atomic_write_text(out, text)
    except (TipTraitError, OSError) as e:
        _fail(e)

    console.print(f"[green]✓[/green] {len(records)} trait record(s) → {out}", highlight=False, soft_wrap=True)


@app.command()
def cluster(
    traits_csv: Path = typer.Option(..., "--traits", help="Traits CSV"),
    features: str = typer.Option("all", "--features", help="'all' or comma list, e.g. n_leaves"),
    treatments: str = typer.Option("control,drought", "--treatments", help="Comma list of treatments"),
    standardize_features: bool = typer.Option(
        True, "--standardize/--no-standardize", help="Z-score feature columns before clustering"
    ),
    k: int = typer.Option(..., "--k", min=1, help="Number of clusters to cut"),
    out_prefix: Path = typer.Option(..., "--out-prefix", help="Prefix for output files"),
    dat_min: Optional[int] = typer.Option(None, "--dat-min", help="First DAT to include"),
    dat_max: Optional[int] = typer.Option(None, "--dat-max", help="Last DAT to include"),
    orientation: str = typer.Option("top", "--orientation", help="SVG orientation: top or left"),
    width: Optional[int] = typer.Option(None, "--width", min=1, help="SVG width (px)"),
    height: Optional[int] = typer.Option(None, "--height", min=1, help="SVG height (px)"),
):
    """
    Ward 聚类基因型

    两种常用模式：--features all（全部性状）与 --features n_leaves（仅叶片数）
    """
    from src.analysis import (
        aggregate,
        cophenetic_correlation,
        cophenetic_distances,
        cut_tree,
        distance_matrix,
        standardize,
        ward_linkage,
    )
    from src.data.parsers import parse_traits_csv
    from src.generation import (
        DataExporter,
        SvgOptions,
        format_feature_matrix_csv,
        format_labels_csv,
        merges_to_json,
        render_ascii,
        render_svg,
        to_newick,
    )

    if orientation not in ("top", "left"):
        raise typer.BadParameter("expected top or left", param_hint="--orientation")
    feature_names = _parse_features(features)
    treatment_values = _parse_treatments(treatments)

    try:
        records = parse_traits_csv(_read(traits_csv))
        dat_range = None
        if records and (dat_min is not None or dat_max is not None):
            dat_range = (
                dat_min if dat_min is not None else min(r.dat for r in records),
                dat_max if dat_max is not None else max(r.dat for r in records),
            )
        try:
            scheme = AggregationScheme(features=feature_names, treatments=treatment_values, dat_range=dat_range)
        except ValueError as e:
            raise typer.BadParameter(str(e), param_hint="--dat-min/--dat-max") from None

        matrix = aggregate(records, scheme)
        if standardize_features:
            matrix = standardize(matrix)
        distances = distance_matrix(matrix)
        merges = ward_linkage(distances)
        clusters = cut_tree(merges, k)
        labels = list(matrix.row_labels)
        correlation = cophenetic_correlation(distances, cophenetic_distances(merges))
        ascii_tree = render_ascii(merges, labels)

        files = {
            _with_suffix(out_prefix, ".merges.json"): merges_to_json(merges, labels, matrix.standardized),
            _with_suffix(out_prefix, ".newick"): to_newick(merges, labels) + "\n",
            _with_suffix(out_prefix, ".svg"): render_svg(
                merges, labels, SvgOptions(width=width, height=height, orientation=orientation)
            ),
            _with_suffix(out_prefix, ".labels.csv"): format_labels_csv(labels, clusters),
            _with_suffix(out_prefix, ".features.csv"): format_feature_matrix_csv(matrix),
            _with_suffix(out_prefix, ".txt"): ascii_tree,
        }
        DataExporter().write_all(files)
    except (TipTraitError, OSError) as e:
        _fail(e)

    typer.echo(ascii_tree, nl=False)
    console.print(
        f"[green]✓[/green] {matrix.shape[0]} genotype(s) × {matrix.shape[1]} feature(s), "
        f"k={k}, cophenetic correlation {correlation:.4f} → {out_prefix}.*",
        highlight=False,
        soft_wrap=True,
    )


@app.command()
def summary(
    traits_csv: Path = typer.Option(..., "--traits", help="Traits CSV"),
    out_prefix: Path = typer.Option(..., "--out-prefix", help="Prefix for output files"),
):
    """
    性状汇总：按 DAT 的时间序列与干旱/对照响应比
    """
    from src.analysis import trait_series, treatment_response
    from src.data.parsers import parse_traits_csv
    from src.generation import DataExporter

    digits = get_config().float_digits
    try:
        records = parse_traits_csv(_read(traits_csv))
        series = pd.concat(
            [trait_series(records, trait).assign(trait=trait) for trait in TRAIT_NAMES],
            ignore_index=True,
        )[["trait", "genotype", "treatment", "dat", "mean", "sd", "count"]]
        response = treatment_response(records)
        DataExporter().write_all(
            {
                _with_suffix(out_prefix, ".series.csv"): series.to_csv(
                    index=False, float_format=f"%.{digits}g", lineterminator="\n"
                ),
                _with_suffix(out_prefix, ".response.csv"): response.to_csv(
                    index=False, float_format=f"%.{digits}g", lineterminator="\n"
                ),
            }
        )
    except (TipTraitError, OSError) as e:
        _fail(e)

    console.print(f"[green]✓[/green] {len(records)} record(s) summarised → {out_prefix}.*", highlight=False, soft_wrap=True)


@app.command()
def synth(
    config: Path = typer.Option(..., "--config", help="Synthetic dataset YAML"),
    out: Path = typer.Option(..., "--out", help="Output directory"),
):
    """生成合成数据集（检测文件、真值文件与清单）"""
    from src.synthesis import generate_dataset, load_synth_config

    try:
        cfg = load_synth_config(config)
        manifest_path = generate_dataset(cfg, out)
    except (TipTraitError, OSError) as e:
        _fail(e)

    console.print(f"[green]✓[/green] manifest → {manifest_path}", highlight=False, soft_wrap=True)


@app.command(name="eval")
def evaluate(
    manifest: Path = typer.Option(..., "--manifest", help="Manifest CSV with ground_truth_path"),
    radius: Optional[float] = typer.Option(
        None, "--radius", help="Match radius in px (default: 2% of the image diagonal)"
    ),
    min_confidence: Optional[float] = typer.Option(
        None, "--min-confidence", min=0.0, max=1.0, help="Drop detections below this confidence"
    ),
):
    """
    检测评估：逐株与汇总的 precision / recall / F1（JSON 输出到 stdout）
    """
    from src.data.processors import DatasetLoader
    from src.evaluation import evaluate_dataset

    if radius is not None and not radius > 0:
        raise typer.BadParameter("must be positive", param_hint="--radius")

    try:
        loader = DatasetLoader(min_confidence=min_confidence, on_warning=_print_warning)
        pairs = loader.load_ground_truth(loader.load_manifest(manifest))
        if not pairs:
            raise TipTraitError(f"{manifest}: no rows carry a ground_truth_path")
        plants, pooled = evaluate_dataset(pairs, radius)
    except (TipTraitError, OSError) as e:
        _fail(e)

    payload = {
        "radius": radius,
        "plants": [p.to_dict() for p in plants],
        "aggregate": pooled.to_dict(),
    }
    typer.echo(json.dumps(payload, indent=2, ensure_ascii=False))


if __name__ == "__main__":
    app()
