"""
TipTrait Trait Table Parser

读取 traits 子命令写出的 CSV，供聚类阶段使用
"""
import math

from src.core import InvalidIntegerError, InvalidValueError, ManifestError, MissingColumnError
from src.domain import TraitRecord, Treatment

from .base import BaseParser, ParseResult

# Column name -> TraitRecord field, for both pixel and scaled (mm) outputs
UNIT_COLUMNS: dict[str, dict[str, str]] = {
    "px": {
        "hull_area": "hull_area_px2",
        "h_spread": "h_spread_px",
        "v_spread": "v_spread_px",
    },
    "mm": {
        "hull_area": "hull_area_mm2",
        "h_spread": "h_spread_mm",
        "v_spread": "v_spread_mm",
    },
}


def trait_columns(unit: str = "px") -> list[str]:
    """traits CSV 表头"""
    names = UNIT_COLUMNS[unit]
    return [
        "plant_id",
        "genotype",
        "treatment",
        "dat",
        "n_leaves",
        names["hull_area"],
        "leaves_per_hull",
        names["h_spread"],
        names["v_spread"],
    ]


class TraitTableParser(BaseParser[list[TraitRecord]]):
    """traits CSV 解析器（像素或毫米表头均可）"""

    def parse(self, content: str, **kwargs) -> ParseResult[list[TraitRecord]]:
        content = self._strip_bom(content)
        if not content.strip():
            raise ManifestError("traits table is empty; a header row is required", row=1)
        columns, table = self._read_table(content)

        unit = "mm" if "hull_area_mm2" in columns else "px"
        for column in trait_columns(unit):
            if column not in columns:
                raise MissingColumnError("required column is missing", row=1, column=column)
        names = UNIT_COLUMNS[unit]

        records: list[TraitRecord] = []
        for row_no, row in table:
            try:
                treatment = Treatment.parse(row["treatment"])
            except ValueError:
                raise InvalidValueError(
                    f"unknown treatment {row['treatment']!r}", row=row_no, column="treatment"
                ) from None
            ints = {}
            for column in ("dat", "n_leaves"):
                try:
                    ints[column] = self._parse_int(row[column])
                except ValueError:
                    raise InvalidIntegerError(
                        f"expected an integer, got {row[column]!r}", row=row_no, column=column
                    ) from None
            floats = {}
            for field_name, column in (
                ("hull_area", names["hull_area"]),
                ("h_spread", names["h_spread"]),
                ("v_spread", names["v_spread"]),
                ("leaves_per_hull", "leaves_per_hull"),
            ):
                token = row[column].strip()
                if not token and field_name == "leaves_per_hull":
                    floats[field_name] = None
                    continue
                try:
                    value = self._parse_float(token)
                except ValueError:
                    raise InvalidValueError(
                        f"expected a number, got {token!r}", row=row_no, column=column
                    ) from None
                if not math.isfinite(value) or value < 0:
                    raise InvalidValueError(
                        f"expected a finite non-negative number, got {token!r}", row=row_no, column=column
                    )
                floats[field_name] = value

            records.append(
                TraitRecord(
                    plant_id=row["plant_id"].strip(),
                    genotype=row["genotype"].strip(),
                    treatment=treatment,
                    dat=ints["dat"],
                    n_leaves=ints["n_leaves"],
                    **floats,
                )
            )

        self.logger.debug(f"Parsed {len(records)} trait record(s) ({unit} units)")
        return ParseResult(records, metadata={"unit": unit})


def parse_traits_csv(text: str) -> list[TraitRecord]:
    """解析 traits CSV 文本"""
    return TraitTableParser().parse(text).data
