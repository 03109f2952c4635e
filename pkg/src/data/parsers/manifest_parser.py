"""
TipTrait Manifest Parser

解析实验清单 CSV：每行一个 (plant, dat)，指向对应的检测文件
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import pandas as pd

from src.core import (
    DuplicateKeyError,
    InvalidIntegerError,
    InvalidValueError,
    ManifestError,
    MissingColumnError,
    UnknownTreatmentError,
)
from src.domain import Treatment

from .base import BaseParser, ParseResult

REQUIRED_COLUMNS: tuple[str, ...] = (
    "plant_id",
    "genotype",
    "treatment",
    "dat",
    "replicate",
    "image_width",
    "image_height",
    "detection_path",
)
OPTIONAL_COLUMNS: tuple[str, ...] = ("ground_truth_path",)
MANIFEST_COLUMNS: tuple[str, ...] = REQUIRED_COLUMNS + OPTIONAL_COLUMNS


@dataclass(frozen=True)
class ManifestRow:
    """清单中的一行"""

    plant_id: str
    genotype: str
    treatment: Treatment
    dat: int
    replicate: int
    image_width: int
    image_height: int
    detection_path: str
    ground_truth_path: Optional[str] = None
    row: int = 0

    @property
    def key(self) -> tuple[str, int]:
        return (self.plant_id, self.dat)


@dataclass(frozen=True)
class Manifest:
    """实验清单；相对路径相对 base_dir 解析"""

    rows: tuple[ManifestRow, ...]
    base_dir: Optional[Path] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def resolve(self, relative: str) -> Path:
        path = Path(relative)
        if path.is_absolute() or self.base_dir is None:
            return path
        return self.base_dir / path


class ManifestParser(BaseParser[Manifest]):
    """
    清单解析器

    表头列顺序任意；treatment 大小写不敏感；
    每类错误都有独立的异常类型并指明行号与列名
    """

    def parse(self, content: str, base_dir: Optional[Path] = None, **kwargs) -> ParseResult[Manifest]:
        content = self._strip_bom(content)
        if not content.strip():
            raise ManifestError("manifest is empty; a header row is required", row=1)
        try:
            columns, table = self._read_table(content)
        except pd.errors.ParserError as e:
            raise ManifestError(f"malformed CSV: {e}") from e

        columns = [c.lower() for c in columns]
        for column in REQUIRED_COLUMNS:
            if column not in columns:
                raise MissingColumnError("required column is missing", row=1, column=column)

        rows: list[ManifestRow] = []
        seen: dict[tuple[str, int], int] = {}
        for row_no, record in table:
            record = {key.lower(): value for key, value in record.items()}
            row = self._parse_row(record, row_no)
            if row.key in seen:
                raise DuplicateKeyError(
                    f"duplicate (plant_id, dat) = ({row.plant_id}, {row.dat}); first seen at row {seen[row.key]}",
                    row=row_no,
                    column="plant_id",
                )
            seen[row.key] = row_no
            rows.append(row)

        self.logger.debug(f"Parsed manifest with {len(rows)} row(s)")
        return ParseResult(Manifest(tuple(rows), base_dir))

    def _parse_row(self, record: dict, row_no: int) -> ManifestRow:
        values = {column: str(record.get(column, "")).strip() for column in MANIFEST_COLUMNS}
        for column in REQUIRED_COLUMNS:
            if not values[column]:
                raise InvalidValueError("value is empty", row=row_no, column=column)

        try:
            treatment = Treatment.parse(values["treatment"])
        except ValueError:
            raise UnknownTreatmentError(
                f"unknown treatment {values['treatment']!r}; expected control or drought",
                row=row_no,
                column="treatment",
            ) from None

        integers: dict[str, int] = {}
        for column in ("dat", "replicate", "image_width", "image_height"):
            try:
                integers[column] = self._parse_int(values[column])
            except ValueError:
                raise InvalidIntegerError(
                    f"expected an integer, got {values[column]!r}", row=row_no, column=column
                ) from None
        for column in ("replicate", "image_width", "image_height"):
            if integers[column] <= 0:
                raise InvalidValueError(
                    f"must be positive, got {integers[column]}", row=row_no, column=column
                )

        return ManifestRow(
            plant_id=values["plant_id"],
            genotype=values["genotype"],
            treatment=treatment,
            dat=integers["dat"],
            replicate=integers["replicate"],
            image_width=integers["image_width"],
            image_height=integers["image_height"],
            detection_path=values["detection_path"],
            ground_truth_path=values["ground_truth_path"] or None,
            row=row_no,
        )


def parse_manifest(text: str, base_dir: Optional[Path] = None) -> Manifest:
    """解析清单 CSV 文本"""
    return ManifestParser().parse(text, base_dir=base_dir).data


def format_manifest(rows: list[ManifestRow]) -> str:
    """清单 CSV 文本（列顺序固定，行尾 \\n）"""
    frame = pd.DataFrame(
        [
            {
                "plant_id": r.plant_id,
                "genotype": r.genotype,
                "treatment": r.treatment.value,
                "dat": r.dat,
                "replicate": r.replicate,
                "image_width": r.image_width,
                "image_height": r.image_height,
                "detection_path": r.detection_path,
                "ground_truth_path": r.ground_truth_path or "",
            }
            for r in rows
        ],
        columns=list(MANIFEST_COLUMNS),
    )
    return frame.to_csv(index=False, lineterminator="\n")
