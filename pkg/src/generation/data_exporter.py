"""
TipTrait Data Exporter

数据导出器：性状表、特征矩阵、合并记录、簇标签、检测文件与清单

所有文件先写临时文件再原子替换，失败时不留下半成品
"""
import json
import os
import re
import tempfile
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.core import get_config, get_logger
from src.data.parsers import ManifestRow, format_detection_line, format_manifest, trait_columns
from src.domain import FeatureMatrix, MergeStep, PlantObservation, TraitRecord

logger = get_logger(__name__)

_UNSAFE = re.compile(r"[^A-Za-z0-9._-]+")


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """写入 UTF-8 文本：同目录临时文件 + os.replace"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return path


def atomic_write_many(files: dict[Union[str, Path], str]) -> list[Path]:
    """
    成组写入：全部内容先写入临时文件，再逐个替换

    任一步失败时删除临时文件，已替换的文件恢复原状（新文件删除），不留下部分输出
    """
    staged: list[tuple[Path, str]] = []
    try:
        for name, text in files.items():
            path = Path(name)
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
            staged.append((path, tmp_name))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)

        committed: list[tuple[Path, Optional[str]]] = []
        try:
            for path, tmp_name in staged:
                backup = None
                if path.exists():
                    fd, backup = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".bak", dir=path.parent)
                    os.close(fd)
                    os.replace(path, backup)
                committed.append((path, backup))
                os.replace(tmp_name, path)
        except BaseException:
            for path, backup in reversed(committed):
                if backup is None:
                    path.unlink(missing_ok=True)
                else:
                    os.replace(backup, path)
            logger.error(f"Write failed; rolled back {len(committed)} file(s)")
            raise
        for _, backup in committed:
            if backup is not None:
                Path(backup).unlink(missing_ok=True)
    finally:
        for _, tmp_name in staged:
            Path(tmp_name).unlink(missing_ok=True)
    return [path for path, _ in staged]


def format_traits_csv(
    records: Sequence[TraitRecord],
    scale: Optional[float] = None,
    digits: Optional[int] = None,
) -> str:
    """
    性状表 CSV

    Args:
        records: 性状记录
        scale: 每像素毫米数；给定时面积乘 s²、冠幅乘 s、比值除以 s²，表头改为 mm 单位
        digits: 浮点有效位数（默认取配置，9 位）
    """
    if scale is not None and not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    digits = digits or get_config().float_digits
    s = 1.0 if scale is None else scale
    columns = trait_columns("px" if scale is None else "mm")
    frame = pd.DataFrame(
        [
            (
                r.plant_id,
                r.genotype,
                r.treatment.value,
                r.dat,
                r.n_leaves,
                r.hull_area * s * s,
                np.nan if r.leaves_per_hull is None else r.leaves_per_hull / (s * s),
                r.h_spread * s,
                r.v_spread * s,
            )
            for r in records
        ],
        columns=columns,
    )
    frame = frame.astype({"dat": "int64", "n_leaves": "int64"})
    return frame.to_csv(index=False, float_format=f"%.{digits}g", na_rep="", lineterminator="\n")


def format_feature_matrix_csv(m: FeatureMatrix) -> str:
    """特征矩阵 CSV：首列 genotype"""
    return m.to_frame().to_csv(float_format="%.17g", lineterminator="\n")


def merges_to_json(merges: Sequence[MergeStep], labels: Sequence[str], standardized: bool = True) -> str:
    """合并记录 JSON（含行标签；高度为 Ward 距离）"""
    payload = {
        "labels": list(labels),
        "linkage": "ward",
        "height": "ward_distance",
        "standardized": standardized,
        "merges": [m.to_dict() for m in merges],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def merges_from_json(text: str) -> tuple[list[MergeStep], list[str]]:
    """读取 merges_to_json 的输出"""
    payload = json.loads(text)
    merges = [
        MergeStep(left=int(m["left"]), right=int(m["right"]), height=float(m["height"]), size=int(m["size"]))
        for m in payload["merges"]
    ]
    return merges, [str(label) for label in payload["labels"]]


def format_labels_csv(row_labels: Sequence[str], clusters: Sequence[int]) -> str:
    """簇标签 CSV：genotype,cluster"""
    frame = pd.DataFrame({"genotype": list(row_labels), "cluster": list(clusters)})
    return frame.to_csv(index=False, lineterminator="\n")


def _file_stem(index: int, observation: PlantObservation) -> str:
    safe = _UNSAFE.sub("_", observation.plant_id).strip("_") or "plant"
    return f"{index:04d}_{safe}_d{observation.dat}"


def _detection_text(observation: PlantObservation) -> str:
    return "".join(format_detection_line(d) + "\n" for d in observation.detections)


class DataExporter:
    """
    数据导出器

    支持的输出：
    - 性状表 CSV
    - 聚类结果（merges JSON / Newick / SVG / labels CSV / 特征矩阵 CSV / ASCII）
    - 检测文件 + 清单（可被 load_dataset 重新加载）
    """

    def __init__(self, output_dir: Optional[Union[str, Path]] = None):
        """
        初始化导出器

        Args:
            output_dir: 输出目录
        """
        self.output_dir = Path(output_dir or ".")
        logger.debug(f"DataExporter initialized: {self.output_dir}")

    def _resolve(self, name: Union[str, Path]) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.output_dir / path

    def write_all(self, files: dict[Union[str, Path], str]) -> list[Path]:
        """成组原子写入：任一文件失败时全部回滚"""
        written = atomic_write_many({self._resolve(name): text for name, text in files.items()})
        logger.info(f"Exported {len(written)} file(s)")
        return written

    def export_dataset(
        self,
        observations: Sequence[PlantObservation],
        ground_truth: Optional[Sequence[PlantObservation]] = None,
        manifest_name: str = "manifest.csv",
    ) -> Path:
        """
        写出检测文件、可选真值文件与清单

        观测必须带有 detections（由检测框构造），以保证重新加载后坐标逐位一致
        """
        if ground_truth is not None and len(ground_truth) != len(observations):
            raise ValueError("ground_truth must align one-to-one with observations")

        files: dict[Union[str, Path], str] = {}
        rows: list[ManifestRow] = []
        for index, obs in enumerate(observations):
            if len(obs.detections) != len(obs.tips):
                raise ValueError(f"observation {obs.plant_id} has no source detections to serialize")
            stem = _file_stem(index, obs)
            detection_path = f"detections/{stem}.txt"
            files[detection_path] = _detection_text(obs)
            truth_path = None
            if ground_truth is not None:
                truth = ground_truth[index]
                if truth.key != obs.key or len(truth.detections) != len(truth.tips):
                    raise ValueError(f"ground truth for {obs.plant_id} does not match its observation")
                truth_path = f"truth/{stem}.txt"
                files[truth_path] = _detection_text(truth)
            rows.append(
                ManifestRow(
                    plant_id=obs.plant_id,
                    genotype=obs.genotype,
                    treatment=obs.treatment,
                    dat=obs.dat,
                    replicate=obs.replicate,
                    image_width=obs.image_width,
                    image_height=obs.image_height,
                    detection_path=detection_path,
                    ground_truth_path=truth_path,
                )
            )
        files[manifest_name] = format_manifest(rows)
        self.write_all(files)
        return self.output_dir / manifest_name


def write_dataset(
    observations: Sequence[PlantObservation],
    out_dir: Union[str, Path],
    ground_truth: Optional[Sequence[PlantObservation]] = None,
) -> Path:
    """写出数据集，返回清单路径"""
    return DataExporter(out_dir).export_dataset(observations, ground_truth)
