"""
TipTrait Dataset Loader

数据集加载器：清单 + 检测文件 → PlantObservation 列表
"""
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Optional, Union

from src.core import DatasetLoadError, TipTraitError, get_logger
from src.data.parsers import (
    Manifest,
    ManifestRow,
    ParseWarning,
    parse_detection_file,
    parse_manifest,
)
from src.domain import PlantObservation, TipDetection

logger = get_logger(__name__)

WarningCallback = Callable[[ParseWarning], None]


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DatasetLoadError(path, "file not found") from None
    except (OSError, UnicodeDecodeError) as e:
        raise DatasetLoadError(path, f"cannot read file: {e}") from e


class DatasetLoader:
    """
    数据集加载器

    负责：
    1. 解析清单
    2. 预先检查所有引用路径
    3. 并行解析检测文件（线程池），按清单行序还原结果
    4. 汇总可恢复警告

    任何失败都会中止加载，不返回部分数据集
    """

    def __init__(
        self,
        min_confidence: Optional[float] = None,
        jobs: int = 1,
        on_warning: Optional[WarningCallback] = None,
    ):
        """
        初始化加载器

        Args:
            min_confidence: 检测置信度阈值（默认全部保留）
            jobs: 解析线程数
            on_warning: 警告回调（默认写入日志）
        """
        if jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {jobs}")
        self.min_confidence = min_confidence
        self.jobs = jobs
        self.on_warning = on_warning
        self.warnings: list[ParseWarning] = []

    def load_manifest(self, manifest_path: Union[str, Path]) -> Manifest:
        """读取并解析清单，相对路径以清单所在目录为基准"""
        manifest_path = Path(manifest_path)
        text = _read_text(manifest_path)
        try:
            manifest = parse_manifest(text, base_dir=manifest_path.parent)
        except TipTraitError as e:
            raise DatasetLoadError(manifest_path, str(e)) from e

        for row in manifest:
            for relative in (row.detection_path, row.ground_truth_path):
                if relative is None:
                    continue
                path = manifest.resolve(relative)
                if not path.is_file():
                    raise DatasetLoadError(path, f"referenced by manifest row {row.row} but not found")
        return manifest

    def load(self, manifest_path: Union[str, Path]) -> list[PlantObservation]:
        """加载整个数据集"""
        manifest = self.load_manifest(manifest_path)
        logger.info(f"Loading {len(manifest)} observation(s) from {manifest_path} (jobs={self.jobs})")

        def task(row: ManifestRow) -> tuple[PlantObservation, list[ParseWarning]]:
            return self._load_row(manifest, row, row.detection_path, self.min_confidence)

        if self.jobs == 1 or len(manifest) <= 1:
            results = [task(row) for row in manifest]
        else:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(task, manifest.rows))

        observations = []
        for observation, warnings in results:
            observations.append(observation)
            for warning in warnings:
                self._emit(warning)

        logger.info(f"Loaded {len(observations)} observation(s), {len(self.warnings)} warning(s)")
        return observations

    def load_ground_truth(self, manifest: Manifest) -> list[tuple[PlantObservation, PlantObservation]]:
        """
        加载 (检测, 真值) 对

        只包含带 ground_truth_path 的行；真值文件不做置信度过滤
        """
        pairs = []
        for row in manifest:
            if row.ground_truth_path is None:
                continue
            predicted, warnings = self._load_row(manifest, row, row.detection_path, self.min_confidence)
            truth, truth_warnings = self._load_row(manifest, row, row.ground_truth_path, None)
            for warning in warnings + truth_warnings:
                self._emit(warning)
            pairs.append((predicted, truth))
        return pairs

    def _load_row(
        self,
        manifest: Manifest,
        row: ManifestRow,
        relative: str,
        min_confidence: Optional[float],
    ) -> tuple[PlantObservation, list[ParseWarning]]:
        path = manifest.resolve(relative)
        text = _read_text(path)
        try:
            result = parse_detection_file(
                text,
                row.image_width,
                row.image_height,
                min_confidence=min_confidence,
                source=path,
            )
        except TipTraitError as e:
            raise DatasetLoadError(path, str(e)) from e
        return self._to_observation(row, result.data), result.warnings

    @staticmethod
    def _to_observation(row: ManifestRow, detections: list[TipDetection]) -> PlantObservation:
        return PlantObservation.from_detections(
            plant_id=row.plant_id,
            genotype=row.genotype,
            treatment=row.treatment,
            dat=row.dat,
            replicate=row.replicate,
            image_width=row.image_width,
            image_height=row.image_height,
            detections=detections,
        )

    def _emit(self, warning: ParseWarning) -> None:
        self.warnings.append(warning)
        if self.on_warning is not None:
            self.on_warning(warning)
        else:
            logger.warning(warning.format())


def load_dataset(
    manifest_path: Union[str, Path],
    *,
    min_confidence: Optional[float] = None,
    jobs: int = 1,
    on_warning: Optional[WarningCallback] = None,
) -> list[PlantObservation]:
    """
    加载数据集

    Args:
        manifest_path: 清单 CSV 路径
        min_confidence: 检测置信度阈值
        jobs: 并行解析线程数
        on_warning: 警告回调

    Returns:
        PlantObservation 列表（清单行序）
    """
    loader = DatasetLoader(min_confidence=min_confidence, jobs=jobs, on_warning=on_warning)
    return loader.load(manifest_path)
