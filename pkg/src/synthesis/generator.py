"""
TipTrait Synthetic Plant Generator

按株型原型生成叶尖：真值 + 带噪检测

干旱模型：叶片数减少，叶片卷曲使叶尖向中心收缩（凸包面积减小）。
同一种子下，干旱植株的叶尖是对照植株前 n 个叶尖按半径因子收缩的结果。
"""
import math
import re
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.core import get_logger
from src.domain import PlantObservation, TipDetection, Treatment
from src.generation.data_exporter import DataExporter

from .config import Archetype, NoiseModel, SynthConfig, TipBox
from .rng import derive_seed, make_rng

logger = get_logger(__name__)

_TRUE_CONFIDENCE = (0.5, 1.0)
_SPURIOUS_CONFIDENCE = (0.05, 0.5)


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def _to_observation(
    xs: np.ndarray,
    ys: np.ndarray,
    confidences: Optional[np.ndarray],
    *,
    plant_id: str,
    genotype: str,
    treatment: Treatment,
    dat: int,
    replicate: int,
    image_width: int,
    image_height: int,
    box: TipBox,
) -> PlantObservation:
    detections = []
    for i in range(len(xs)):
        cx = min(max(float(xs[i]) / image_width, 0.0), 1.0)
        cy = min(max(float(ys[i]) / image_height, 0.0), 1.0)
        confidence = None if confidences is None else round(float(confidences[i]), 4)
        detections.append(TipDetection(0, cx, cy, box.w, box.h, confidence))
    return PlantObservation.from_detections(
        plant_id=plant_id,
        genotype=genotype,
        treatment=treatment,
        dat=dat,
        replicate=replicate,
        image_width=image_width,
        image_height=image_height,
        detections=detections,
    )


def generate_plant(
    arch: Archetype,
    treatment: Treatment,
    dat: int,
    seed: int,
    *,
    plant_id: str = "plant",
    genotype: Optional[str] = None,
    replicate: int = 1,
    image_width: int = 6576,
    image_height: int = 4384,
    box: Optional[TipBox] = None,
    noise: Optional[NoiseModel] = None,
) -> tuple[PlantObservation, PlantObservation]:
    """
    生成一株植物

    Args:
        arch: 株型原型
        treatment: 处理方式
        dat: 移栽后天数
        seed: 64 位种子（完全决定输出）
        noise: 检测噪声模型（默认取配置）

    Returns:
        (真值观测, 带噪检测观测)
    """
    box = box or TipBox()
    noise = noise or NoiseModel()
    rng = make_rng(seed)
    width, height = image_width, image_height

    # Control draw; drought keeps the leading tips of the same draw
    n_control = max(1, _round_half_up(rng.normal(arch.leaf_mean_at(dat), arch.leaf_count_sd)))
    angles = rng.uniform(0.0, 2.0 * math.pi, n_control)
    radii = np.abs(rng.normal(arch.radius_mean, arch.radius_sd, n_control))

    if treatment is Treatment.DROUGHT:
        n = max(1, _round_half_up(n_control * arch.drought_leaf_factor))
        radius_scale = arch.drought_radius_factor
    else:
        n = n_control
        radius_scale = 1.0

    r = radii[:n] * radius_scale
    xs = np.clip(width / 2.0 + r * np.cos(angles[:n]), 0.0, width)
    ys = np.clip(height / 2.0 + arch.anisotropy * r * np.sin(angles[:n]), 0.0, height)

    jitter = rng.normal(0.0, noise.jitter_sd, (n, 2))
    keep = rng.uniform(size=n) >= noise.drop_rate
    n_spurious = int(rng.binomial(n, noise.spurious_rate))
    spurious_x = rng.uniform(xs.min(), xs.max(), n_spurious)
    spurious_y = rng.uniform(ys.min(), ys.max(), n_spurious)
    true_conf = rng.uniform(*_TRUE_CONFIDENCE, n)
    spurious_conf = rng.uniform(*_SPURIOUS_CONFIDENCE, n_spurious)

    noisy_x = np.clip(np.concatenate([(xs + jitter[:, 0])[keep], spurious_x]), 0.0, width)
    noisy_y = np.clip(np.concatenate([(ys + jitter[:, 1])[keep], spurious_y]), 0.0, height)
    noisy_conf = np.concatenate([true_conf[keep], spurious_conf])

    common = dict(
        plant_id=plant_id,
        genotype=genotype or arch.name,
        treatment=treatment,
        dat=dat,
        replicate=replicate,
        image_width=width,
        image_height=height,
        box=box,
    )
    truth = _to_observation(xs, ys, None, **common)
    noisy = _to_observation(noisy_x, noisy_y, noisy_conf, **common)
    return truth, noisy


def plant_id_for(genotype: str, treatment: Treatment, replicate: int) -> str:
    """植株编号，例如 NAGINA_22-D-R2"""
    slug = re.sub(r"\s+", "_", genotype.strip())
    return f"{slug}-{treatment.value[0].upper()}-R{replicate}"


def generate_observations(cfg: SynthConfig) -> list[tuple[PlantObservation, PlantObservation]]:
    """
    按配置生成全部 (真值, 检测) 对

    顺序：genotype（配置顺序）→ treatment → replicate → dat。
    植株编号按 (genotype, replicate, dat) 计数，对照与干旱孪生株共享种子
    """
    pairs = []
    genotypes = list(cfg.genotypes.items())
    per_genotype = cfg.replicates * len(cfg.dat)
    for g_index, (genotype, archetype_name) in enumerate(genotypes):
        arch = cfg.archetype(archetype_name)
        for treatment in Treatment:
            for replicate in range(1, cfg.replicates + 1):
                for d_index, dat in enumerate(cfg.dat):
                    plant_index = g_index * per_genotype + (replicate - 1) * len(cfg.dat) + d_index
                    seed = derive_seed(cfg.seed, plant_index)
                    pairs.append(
                        generate_plant(
                            arch,
                            treatment,
                            dat,
                            seed,
                            plant_id=plant_id_for(genotype, treatment, replicate),
                            genotype=genotype,
                            replicate=replicate,
                            image_width=cfg.image.width,
                            image_height=cfg.image.height,
                            box=cfg.box,
                            noise=cfg.noise,
                        )
                    )
    logger.info(f"Generated {len(pairs)} synthetic plant(s) for {len(genotypes)} genotype(s)")
    return pairs


def generate_dataset(cfg: SynthConfig, out_dir: Union[str, Path]) -> Path:
    """
    生成并写出合成数据集

    Returns:
        清单路径（可直接交给 load_dataset）
    """
    pairs = generate_observations(cfg)
    truths = [truth for truth, _ in pairs]
    noisy = [detected for _, detected in pairs]
    return DataExporter(out_dir).export_dataset(noisy, ground_truth=truths)
