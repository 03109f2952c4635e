"""
TipTrait Synthetic Dataset Configuration

YAML 配置 → pydantic 模型；缺省值来自 AppSettings.synth
"""
from pathlib import Path
from typing import Union

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.core import SynthConfigError, get_config


def _synth_defaults():
    return get_config().synth


class Archetype(BaseModel):
    """
    株型原型

    干旱时叶片数乘 drought_leaf_factor，叶尖半径乘 drought_radius_factor（卷叶使凸包收缩）
    """

    name: str = Field(min_length=1)
    leaf_count_mean: float = Field(gt=0)
    leaf_count_sd: float = Field(default=0.0, ge=0)
    radius_mean: float = Field(gt=0, description="px")
    radius_sd: float = Field(default=0.0, ge=0, description="px")
    anisotropy: float = Field(default=1.0, gt=0, description="y 向与 x 向尺度之比")
    drought_leaf_factor: float = Field(default=1.0, gt=0, le=1)
    drought_radius_factor: float = Field(default=1.0, gt=0, le=1)
    leaf_growth_per_day: float = Field(default=0.0, description="叶片数均值随 DAT 的线性增量")
    reference_dat: int = Field(default=35, description="leaf_count_mean 对应的 DAT")

    def leaf_mean_at(self, dat: int) -> float:
        return max(self.leaf_count_mean + self.leaf_growth_per_day * (dat - self.reference_dat), 1.0)


class ImageSize(BaseModel):
    width: int = Field(default_factory=lambda: _synth_defaults().image_width, gt=0)
    height: int = Field(default_factory=lambda: _synth_defaults().image_height, gt=0)


class TipBox(BaseModel):
    """叶尖框尺寸（归一化）"""

    w: float = Field(default_factory=lambda: _synth_defaults().box_w, gt=0, le=1)
    h: float = Field(default_factory=lambda: _synth_defaults().box_h, gt=0, le=1)


class NoiseModel(BaseModel):
    """检测噪声：高斯抖动、随机漏检、均匀误检"""

    jitter_sd: float = Field(default_factory=lambda: _synth_defaults().jitter_sd, ge=0, description="px")
    drop_rate: float = Field(default_factory=lambda: _synth_defaults().drop_rate, ge=0, lt=1)
    spurious_rate: float = Field(default_factory=lambda: _synth_defaults().spurious_rate, ge=0, lt=1)

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls(jitter_sd=0.0, drop_rate=0.0, spurious_rate=0.0)


class SynthConfig(BaseModel):
    """合成数据集配置"""

    seed: int = Field(ge=0, le=(1 << 64) - 1)
    replicates: int = Field(default=3, ge=1)
    dat: list[int] = Field(default_factory=lambda: [45], min_length=1)
    image: ImageSize = Field(default_factory=ImageSize)
    box: TipBox = Field(default_factory=TipBox)
    noise: NoiseModel = Field(default_factory=NoiseModel)
    archetypes: list[Archetype] = Field(min_length=1)
    genotypes: dict[str, str] = Field(min_length=1, description="genotype -> archetype name")

    @field_validator("dat")
    @classmethod
    def unique_dat(cls, v: list[int]) -> list[int]:
        if len(set(v)) != len(v):
            raise ValueError("dat values must be unique")
        return v

    @model_validator(mode="after")
    def check_assignments(self) -> "SynthConfig":
        names = [a.name for a in self.archetypes]
        if len(set(names)) != len(names):
            raise ValueError("archetype names must be unique")
        unknown = sorted({a for a in self.genotypes.values() if a not in names})
        if unknown:
            raise ValueError(f"genotypes reference unknown archetypes: {', '.join(unknown)}")
        return self

    def archetype(self, name: str) -> Archetype:
        return next(a for a in self.archetypes if a.name == name)


def load_synth_config(path: Union[str, Path]) -> SynthConfig:
    """读取 YAML 配置"""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise SynthConfigError(f"{path}: cannot read config: {e}") from e
    except yaml.YAMLError as e:
        raise SynthConfigError(f"{path}: invalid YAML: {e}") from e
    if not isinstance(raw, dict):
        raise SynthConfigError(f"{path}: expected a mapping at the top level")
    try:
        return SynthConfig.model_validate(raw)
    except ValidationError as e:
        raise SynthConfigError(f"{path}: {e}") from e
