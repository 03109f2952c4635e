"""
TipTrait Random Streams

可移植的确定性随机数：

- 每株种子 = SplitMix64(master + index·γ) 的一步输出（γ = 0x9E3779B97F4A7C15）
- 每株的抽样使用 numpy 的 PCG64 位生成器

SplitMix64 测试向量（master = 1234567）：
    index 0 -> 6457827717110365317
    index 1 -> 3203168211198807973
    index 2 -> 9817491932198370423
    index 3 -> 4593380528125082431
    index 4 -> 16408922859458223821
"""
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> tuple[int, int]:
    """推进一步，返回 (新状态, 输出)"""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """由主种子和植株编号派生 64 位种子（与顺序无关，可并行）"""
    if not 0 <= master <= MASK64:
        raise ValueError(f"master seed must fit in 64 bits, got {master}")
    if index < 0:
        raise ValueError(f"index must be non-negative, got {index}")
    _, output = splitmix64((master + index * GOLDEN_GAMMA) & MASK64)
    return output


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 生成器"""
    return np.random.Generator(np.random.PCG64(seed))
