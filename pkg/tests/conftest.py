"""
测试公共夹具
"""
import sys
from pathlib import Path

import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.domain import AREA_EPSILON, PlantObservation, TipDetection, TipPoint, TraitRecord, Treatment
from src.synthesis import Archetype, NoiseModel, SynthConfig

GENOTYPES_10 = (
    "ANJALI",
    "BLACKGORA",
    "ABHAYA_X_DAGADESI",
    "HEERA",
    "NAGINA_22",
    "RASI",
    "DULAR",
    "PMK-2",
    "SERATOES",
    "KALINGA-1",
)

ARCHETYPES = [
    Archetype(
        name="spreading",
        leaf_count_mean=36,
        leaf_count_sd=2,
        radius_mean=1600,
        radius_sd=150,
        anisotropy=0.8,
        drought_leaf_factor=0.8,
        drought_radius_factor=0.6,
    ),
    Archetype(
        name="compact",
        leaf_count_mean=14,
        leaf_count_sd=1,
        radius_mean=500,
        radius_sd=60,
        anisotropy=1.0,
        drought_leaf_factor=0.85,
        drought_radius_factor=0.9,
    ),
    Archetype(
        name="upright",
        leaf_count_mean=24,
        leaf_count_sd=1.5,
        radius_mean=1000,
        radius_sd=100,
        anisotropy=1.5,
        drought_leaf_factor=0.95,
        drought_radius_factor=0.85,
    ),
]


def make_synth_config(seed: int = 7, noise: NoiseModel | None = None, **kwargs) -> SynthConfig:
    """10 个基因型 × 3 种株型的合成配置"""
    genotypes = {g: ARCHETYPES[i % 3].name for i, g in enumerate(GENOTYPES_10)}
    return SynthConfig(
        seed=seed,
        replicates=kwargs.pop("replicates", 3),
        dat=kwargs.pop("dat", [45]),
        archetypes=ARCHETYPES,
        genotypes=genotypes,
        noise=noise or NoiseModel(),
        **kwargs,
    )


def make_observation(
    points,
    plant_id: str = "P1",
    genotype: str = "G",
    treatment: Treatment = Treatment.CONTROL,
    dat: int = 45,
    width: int = 1000,
    height: int = 1000,
) -> PlantObservation:
    """由像素坐标直接构造观测"""
    return PlantObservation(
        plant_id=plant_id,
        genotype=genotype,
        treatment=treatment,
        dat=dat,
        replicate=1,
        image_width=width,
        image_height=height,
        tips=tuple(TipPoint(float(x), float(y)) for x, y in points),
    )


def make_record(
    genotype: str,
    treatment: Treatment,
    n_leaves: int = 10,
    hull_area: float = 100.0,
    h_spread: float = 10.0,
    v_spread: float = 10.0,
    dat: int = 45,
    plant_id: str | None = None,
) -> TraitRecord:
    """构造性状记录（leaves_per_hull 按退化规则推出）"""
    return TraitRecord(
        plant_id=plant_id or f"{genotype}-{treatment.value}-{dat}",
        genotype=genotype,
        treatment=treatment,
        dat=dat,
        n_leaves=n_leaves,
        hull_area=hull_area,
        leaves_per_hull=n_leaves / hull_area if hull_area >= AREA_EPSILON else None,
        h_spread=h_spread,
        v_spread=v_spread,
    )


@pytest.fixture
def synth_config() -> SynthConfig:
    return make_synth_config()


@pytest.fixture
def synth_dataset(tmp_path, synth_config) -> Path:
    """写出 60 株合成数据集，返回清单路径"""
    from src.synthesis import generate_dataset

    return generate_dataset(synth_config, tmp_path / "synth")


@pytest.fixture
def square_detections() -> list[TipDetection]:
    return [
        TipDetection(0, 0.25, 0.25, 0.01, 0.01),
        TipDetection(0, 0.75, 0.25, 0.01, 0.01),
        TipDetection(0, 0.75, 0.75, 0.01, 0.01),
        TipDetection(0, 0.25, 0.75, 0.01, 0.01),
    ]
