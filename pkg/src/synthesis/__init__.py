"""
TipTrait Synthetic Data

按株型原型生成合成数据集（含真值）
"""
from .config import Archetype, ImageSize, NoiseModel, SynthConfig, TipBox, load_synth_config
from .generator import generate_dataset, generate_observations, generate_plant, plant_id_for
from .rng import derive_seed, make_rng, splitmix64

__all__ = [
    "Archetype",
    "ImageSize",
    "TipBox",
    "NoiseModel",
    "SynthConfig",
    "load_synth_config",
    "generate_plant",
    "generate_observations",
    "generate_dataset",
    "plant_id_for",
    "derive_seed",
    "make_rng",
    "splitmix64",
]
