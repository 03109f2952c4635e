"""
测试 Ward 聚类、切树与共表型距离
"""
import itertools
import math

import numpy as np
import pytest
from scipy.cluster.hierarchy import cophenet, linkage
from scipy.cluster.hierarchy import cut_tree as scipy_cut_tree
from sklearn.metrics import adjusted_rand_score

from conftest import ARCHETYPES
from src.analysis import (
    aggregate,
    cophenetic_correlation,
    cophenetic_distances,
    cut_tree,
    distance_matrix,
    leaf_order,
    standardize,
    traits_table,
    ward_linkage,
)
from src.core import ClusteringError
from src.domain import AggregationScheme, DistanceMatrix, FeatureMatrix, MergeStep
from src.synthesis import NoiseModel, SynthConfig, generate_observations


def _matrix(values) -> FeatureMatrix:
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    return FeatureMatrix(
        tuple(f"g{i}" for i in range(values.shape[0])),
        tuple(f"f{j}" for j in range(values.shape[1])),
        values,
    )


def _linkage(values) -> list[MergeStep]:
    return ward_linkage(distance_matrix(_matrix(values)))


def _as_scipy(merges) -> np.ndarray:
    return np.array([[m.left, m.right, m.height, m.size] for m in merges], dtype=float)


def _canonical(labels) -> list[int]:
    mapping: dict = {}
    return [mapping.setdefault(label, len(mapping)) for label in labels]


def _ess(x: np.ndarray) -> float:
    return float(((x - x.mean(axis=0)) ** 2).sum())


def _delta_ess_oracle(values: np.ndarray) -> list[tuple[int, int, float]]:
    """穷举 ΔESS：每步合并使组内平方和增量最小的簇对，高度 = sqrt(2·ΔESS)"""
    n = len(values)
    clusters = {i: [i] for i in range(n)}
    steps = []
    for step in range(n - 1):
        best = None
        for a, b in itertools.combinations(sorted(clusters), 2):
            ca, cb = values[clusters[a]], values[clusters[b]]
            union = np.vstack([ca, cb])
            delta = _ess(union) - _ess(ca) - _ess(cb)
            if best is None or delta < best[2]:
                best = (a, b, delta)
        a, b, delta = best
        clusters[n + step] = clusters.pop(a) + clusters.pop(b)
        steps.append((a, b, math.sqrt(2 * max(delta, 0.0))))
    return steps


# ============ 距离矩阵 ============

def test_distance_three_four_five():
    d = distance_matrix(_matrix([[0, 0], [3, 4]]))
    assert d.n == 2
    assert d[0, 1] == 5.0


def test_identical_rows_distance_zero():
    assert distance_matrix(_matrix([[1, 2], [1, 2], [3, 3]]))[0, 1] == 0.0


def test_distance_matches_double_loop():
    rng = np.random.default_rng(0)
    values = rng.normal(size=(6, 3))
    d = distance_matrix(_matrix(values))
    for i in range(6):
        for j in range(6):
            expected = math.sqrt(sum((values[i, k] - values[j, k]) ** 2 for k in range(3)))
            assert d[i, j] == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_distance_needs_two_rows():
    with pytest.raises(ClusteringError):
        distance_matrix(_matrix([[1.0, 2.0]]))


def test_distance_matrix_validation():
    with pytest.raises(ValueError):
        DistanceMatrix(3, np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        DistanceMatrix(2, np.array([-1.0]))


# ============ Ward ============

def test_two_points():
    assert _linkage([[0, 0], [3, 4]]) == [MergeStep(0, 1, 5.0, 2)]


def test_nearest_pair_first():
    merges = _linkage([0.0, 1.0, 10.0])
    assert [(m.left, m.right, m.size) for m in merges] == [(0, 1, 2), (2, 3, 3)]
    assert merges[0].height == 1.0


def test_tie_break_is_lexicographic():
    # d(0,1) == d(1,2)
    merges = _linkage([0.0, 1.0, 2.0])
    assert (merges[0].left, merges[0].right) == (0, 1)


def test_delta_ess_oracle():
    """200 个随机实例：合并序列与穷举 ΔESS 一致，高度误差 ≤ 1e-9，高度非递减"""
    rng = np.random.default_rng(314)
    for _ in range(200):
        n, d = int(rng.integers(3, 9)), int(rng.integers(1, 6))
        values = rng.normal(0, 1, size=(n, d))
        merges = _linkage(values)
        oracle = _delta_ess_oracle(values)
        assert [(m.left, m.right) for m in merges] == [(a, b) for a, b, _ in oracle]
        for merge, (_, _, height) in zip(merges, oracle):
            assert merge.height == pytest.approx(height, rel=1e-9, abs=1e-9)
        heights = [m.height for m in merges]
        assert heights == sorted(heights)


def test_matches_scipy_ward():
    rng = np.random.default_rng(42)
    for _ in range(50):
        values = rng.normal(size=(int(rng.integers(3, 15)), 3))
        ours = _as_scipy(_linkage(values))
        reference = linkage(values, method="ward")
        np.testing.assert_allclose(ours[:, 2], reference[:, 2], rtol=1e-9)
        assert [set(row) for row in ours[:, :2].tolist()] == [set(row) for row in reference[:, :2].tolist()]


def test_merge_structure():
    rng = np.random.default_rng(9)
    values = rng.normal(size=(10, 4))
    merges = _linkage(values)
    n = 10
    assert len(merges) == n - 1
    sizes = {i: 1 for i in range(n)}
    consumed = set()
    for step, m in enumerate(merges):
        assert m.left not in consumed and m.right not in consumed
        consumed.update((m.left, m.right))
        assert m.size == sizes[m.left] + sizes[m.right]
        sizes[n + step] = m.size


def test_determinism():
    values = np.random.default_rng(5).normal(size=(12, 3))
    assert _linkage(values) == _linkage(values.copy())


def test_exchange_symmetry():
    """行置换后各 k 的划分一致（按原始行映射回去）"""
    rng = np.random.default_rng(23)
    values = rng.normal(size=(9, 2))
    perm = rng.permutation(9)
    merges = _linkage(values)
    permuted = _linkage(values[perm])
    np.testing.assert_allclose(
        sorted(m.height for m in merges), sorted(m.height for m in permuted), rtol=1e-12
    )
    for k in range(1, 10):
        labels = cut_tree(permuted, k)
        back = [0] * 9
        for position, row in enumerate(perm):
            back[row] = labels[position]
        assert _canonical(back) == cut_tree(merges, k)


def test_needs_two_rows():
    with pytest.raises(ClusteringError):
        ward_linkage(DistanceMatrix(1, np.array([])))


# ============ 切树 ============

def test_cut_k_one_and_n():
    merges = _linkage(np.random.default_rng(1).normal(size=(7, 2)))
    assert cut_tree(merges, 1) == [0] * 7
    assert cut_tree(merges, 7) == list(range(7))


def test_cut_out_of_range():
    merges = _linkage([[0.0], [1.0], [5.0]])
    for k in (0, 4):
        with pytest.raises(ClusteringError):
            cut_tree(merges, k)


def test_cut_labels_by_smallest_member():
    merges = _linkage([10.0, 0.0, 10.5, 0.5])
    assert cut_tree(merges, 2) == [0, 1, 0, 1]


def test_cut_matches_merge_forest_components():
    rng = np.random.default_rng(55)
    for _ in range(30):
        n = int(rng.integers(3, 12))
        merges = _linkage(rng.normal(size=(n, 3)))
        z = _as_scipy(merges)
        for k in range(1, n + 1):
            reference = scipy_cut_tree(z, n_clusters=k).ravel().tolist()
            assert cut_tree(merges, k) == _canonical(reference)


def test_invalid_merge_list():
    with pytest.raises(ClusteringError):
        cut_tree([MergeStep(0, 0, 1.0, 2)], 1)
    with pytest.raises(ClusteringError):
        cut_tree([MergeStep(0, 5, 1.0, 2)], 1)


def _recover(seed: int, noise: NoiseModel) -> float:
    genotypes = {f"G{i:02d}": ARCHETYPES[i % 3].name for i in range(12)}
    cfg = SynthConfig(seed=seed, replicates=3, archetypes=ARCHETYPES, genotypes=genotypes, noise=noise)
    noisy = [detected for _, detected in generate_observations(cfg)]
    matrix = standardize(aggregate(traits_table(noisy), AggregationScheme.all_features()))
    labels = cut_tree(ward_linkage(distance_matrix(matrix)), 3)
    planted = [genotypes[g] for g in matrix.row_labels]
    return adjusted_rand_score(planted, labels)


def test_planted_groups_recovered_on_clean_data():
    assert _recover(2024, NoiseModel.none()) == 1.0


def test_planted_groups_recovered_across_seeds():
    """3 种株型 × 4 个基因型，20 个主种子：至少 19 个 ARI ≥ 0.9"""
    scores = [_recover(seed, NoiseModel()) for seed in range(1, 21)]
    assert sum(score >= 0.9 for score in scores) >= 19


# ============ 共表型距离 ============

def test_cophenetic_two_leaves():
    merges = _linkage([[0, 0], [3, 4]])
    coph = cophenetic_distances(merges)
    assert coph[0, 1] == 5.0


def test_cophenetic_is_ultrametric():
    merges = _linkage(np.random.default_rng(8).normal(size=(10, 3)))
    coph = cophenetic_distances(merges)
    for i, j, k in itertools.permutations(range(10), 3):
        assert coph[i, j] <= max(coph[i, k], coph[k, j]) + 1e-12


def test_cophenetic_matches_traversal():
    rng = np.random.default_rng(88)
    for _ in range(20):
        n = int(rng.integers(2, 10))
        merges = _linkage(rng.normal(size=(n, 2)))
        children = {n + s: (m.left, m.right) for s, m in enumerate(merges)}

        def leaves(node):
            if node < n:
                return {node}
            left, right = children[node]
            return leaves(left) | leaves(right)

        coph = cophenetic_distances(merges)
        for i, j in itertools.combinations(range(n), 2):
            lowest = min(m.height for s, m in enumerate(merges) if {i, j} <= leaves(n + s))
            assert coph[i, j] == lowest


def test_cophenetic_correlation_matches_scipy():
    values = np.random.default_rng(31).normal(size=(10, 3))
    d = distance_matrix(_matrix(values))
    merges = ward_linkage(d)
    expected, _ = cophenet(_as_scipy(merges), d.condensed)
    assert cophenetic_correlation(d, cophenetic_distances(merges)) == pytest.approx(expected, rel=1e-9)


# ============ 叶序 ============

def test_leaf_order_lower_child_first():
    merges = _linkage([0.0, 10.0, 0.4, 10.5])
    assert leaf_order(merges) == [0, 2, 1, 3]


def test_leaf_order_is_permutation():
    merges = _linkage(np.random.default_rng(2).normal(size=(11, 2)))
    assert sorted(leaf_order(merges)) == list(range(11))
    assert leaf_order([]) == [0]
