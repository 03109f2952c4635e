"""
TipTrait Plant Models

单株单日观测：实验元数据 + 叶尖坐标
"""
from dataclasses import dataclass, field
from enum import Enum as PyEnum
from typing import Iterable

from .detection import TipDetection, TipPoint


class Treatment(str, PyEnum):
    """Growth condition"""
    CONTROL = "control"  # Well-watered
    DROUGHT = "drought"  # Moisture-deficit stress

    @classmethod
    def parse(cls, value: str) -> "Treatment":
        """大小写不敏感解析"""
        return cls(value.strip().lower())


# Trial genotypes, indexed 0-ANJALI ... 9-KALINGA-1
REFERENCE_GENOTYPES: tuple[str, ...] = (
    "ANJALI",
    "BLACKGORA",
    "ABHAYA X DAGADESI",
    "HEERA",
    "NAGINA 22",
    "RASI",
    "DULAR",
    "PMK-2",
    "SERATOES",
    "KALINGA-1",
)


@dataclass(frozen=True)
class PlantObservation:
    """
    一株植物在某一天的观测

    tips 由 detections 按图像尺寸换算得到，两者顺序一致（即检测文件行序）
    """

    plant_id: str
    genotype: str
    treatment: Treatment
    dat: int
    replicate: int
    image_width: int
    image_height: int
    tips: tuple[TipPoint, ...] = ()
    detections: tuple[TipDetection, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if not self.plant_id:
            raise ValueError("plant_id must not be empty")
        if not isinstance(self.treatment, Treatment):
            raise ValueError(f"treatment must be a Treatment, got {self.treatment!r}")
        if self.replicate < 1:
            raise ValueError(f"replicate must be positive, got {self.replicate}")
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError(f"image size must be positive, got {self.image_width}x{self.image_height}")
        for tip in self.tips:
            if not (0.0 <= tip.x <= self.image_width and 0.0 <= tip.y <= self.image_height):
                raise ValueError(f"tip {tip} outside {self.image_width}x{self.image_height} image")

    @classmethod
    def from_detections(
        cls,
        *,
        plant_id: str,
        genotype: str,
        treatment: Treatment,
        dat: int,
        replicate: int,
        image_width: int,
        image_height: int,
        detections: Iterable[TipDetection],
    ) -> "PlantObservation":
        """由归一化检测框构造观测（框中心 × 图像尺寸）"""
        detections = tuple(detections)
        tips = tuple(d.center(image_width, image_height) for d in detections)
        return cls(
            plant_id=plant_id,
            genotype=genotype,
            treatment=treatment,
            dat=dat,
            replicate=replicate,
            image_width=image_width,
            image_height=image_height,
            tips=tips,
            detections=detections,
        )

    @property
    def key(self) -> tuple[str, int]:
        """数据集内唯一键"""
        return (self.plant_id, self.dat)
