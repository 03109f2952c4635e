"""
TipTrait Ward Clustering

基因型特征向量的 Ward 凝聚层次聚类

- 平方欧氏距离上的 Lance–Williams 递推
- 报告高度为 Ward 距离（d² 的平方根），与常见树状图约定一致
- 朴素 O(n³) 最近对搜索；并列时取字典序最小的 (left, right)
"""
import math
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist

from src.core import ClusteringError, get_logger
from src.domain import DistanceMatrix, FeatureMatrix, MergeStep

logger = get_logger(__name__)

# Relative tolerance for rounding-level dips in merge heights
_MONOTONE_RTOL = 1e-12


def distance_matrix(m: FeatureMatrix) -> DistanceMatrix:
    """行间欧氏距离（压缩形式）"""
    n = m.shape[0]
    if n < 2:
        raise ClusteringError(f"distance matrix needs at least 2 rows, got {n}")
    if not np.all(np.isfinite(m.values)):
        raise ClusteringError("feature matrix contains non-finite entries")
    return DistanceMatrix(n, pdist(m.values, metric="euclidean"))


def ward_linkage(d: DistanceMatrix) -> list[MergeStep]:
    """
    Ward 凝聚聚类

    d²(k, i∪j) = [(nᵢ+nₖ)d²(k,i) + (nⱼ+nₖ)d²(k,j) − nₖd²(i,j)] / (nᵢ+nⱼ+nₖ)

    Returns:
        n−1 个 MergeStep，高度非递减
    """
    n = d.n
    if n < 2:
        raise ClusteringError(f"Ward linkage needs at least 2 rows, got {n}")

    # Squared distances between active clusters, keyed by cluster id
    square = d.square() ** 2
    d2: dict[tuple[int, int], float] = {
        (i, j): float(square[i, j]) for i in range(n) for j in range(i + 1, n)
    }
    sizes = {i: 1 for i in range(n)}
    active = list(range(n))
    merges: list[MergeStep] = []
    previous = 0.0

    for step in range(n - 1):
        best_pair = None
        best = math.inf
        # active is kept sorted, so scanning in order realizes the lexicographic tie-break
        for a_pos, a in enumerate(active):
            for b in active[a_pos + 1:]:
                value = d2[(a, b)]
                if value < best:
                    best = value
                    best_pair = (a, b)
        assert best_pair is not None
        i, j = best_pair
        height = math.sqrt(max(best, 0.0))
        if height < previous:
            if previous - height > _MONOTONE_RTOL * max(previous, 1.0):
                raise ClusteringError(
                    f"merge heights decreased at step {step}: {height} < {previous}"
                )
            height = previous
        previous = height

        new_id = n + step
        ni, nj = sizes[i], sizes[j]
        merges.append(MergeStep(left=i, right=j, height=height, size=ni + nj))

        active.remove(i)
        active.remove(j)
        for k in active:
            nk = sizes[k]
            dki = d2[(min(k, i), max(k, i))]
            dkj = d2[(min(k, j), max(k, j))]
            d2[(k, new_id)] = ((ni + nk) * dki + (nj + nk) * dkj - nk * best) / (ni + nj + nk)
        sizes[new_id] = ni + nj
        active.append(new_id)

    logger.debug(f"Ward linkage on {n} rows, root height {merges[-1].height:.6g}")
    return merges


def _validate(merges: Sequence[MergeStep]) -> int:
    n = len(merges) + 1
    consumed: set[int] = set()
    for step, merge in enumerate(merges):
        for child in (merge.left, merge.right):
            if child >= n + step or child < 0 or child in consumed:
                raise ClusteringError(f"invalid merge {step}: cluster {child} unavailable")
            consumed.add(child)
    return n


def _members(merges: Sequence[MergeStep]) -> dict[int, list[int]]:
    n = len(merges) + 1
    members = {i: [i] for i in range(n)}
    for step, merge in enumerate(merges):
        members[n + step] = members[merge.left] + members[merge.right]
    return members


def cut_tree(merges: Sequence[MergeStep], k: int) -> list[int]:
    """
    切树得到 k 个簇

    撤销最后 k−1 次合并；标签 0..k−1 按各簇最小成员编号排序分配
    """
    n = _validate(merges)
    if not 1 <= k <= n:
        raise ClusteringError(f"k must be between 1 and {n}, got {k}")

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    members = _members(merges)
    for merge in merges[: n - k]:
        a = find(members[merge.left][0])
        b = find(members[merge.right][0])
        parent[max(a, b)] = min(a, b)

    labels: list[int] = []
    mapping: dict[int, int] = {}
    for i in range(n):
        root = find(i)
        if root not in mapping:
            mapping[root] = len(mapping)
        labels.append(mapping[root])
    return labels


def cophenetic_distances(merges: Sequence[MergeStep]) -> DistanceMatrix:
    """共表型距离：合并 i 与 j 的最低合并高度"""
    n = _validate(merges)
    members = _members(merges)
    coph = np.zeros((n, n), dtype=float)
    for merge in merges:
        left, right = members[merge.left], members[merge.right]
        coph[np.ix_(left, right)] = merge.height
        coph[np.ix_(right, left)] = merge.height
    condensed = coph[np.triu_indices(n, k=1)]
    return DistanceMatrix(n, condensed)


def cophenetic_correlation(d: DistanceMatrix, coph: DistanceMatrix) -> float:
    """输入距离与共表型距离的 Pearson 相关系数（树状图拟合度）"""
    if d.n != coph.n:
        raise ClusteringError(f"size mismatch: {d.n} vs {coph.n}")
    if d.n < 3:
        return 1.0
    x, y = d.condensed, coph.condensed
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return 1.0
    return float(np.corrcoef(x, y)[0, 1])


def ordered_children(merges: Sequence[MergeStep]) -> dict[int, tuple[int, int]]:
    """
    每个合并节点的 (先, 后) 子簇

    含较小原始行编号的子簇在前；叶序、Newick 与 ASCII 共用此顺序
    """
    n = _validate(merges)
    smallest = {i: i for i in range(n)}
    children = {}
    for step, merge in enumerate(merges):
        first, second = sorted((merge.left, merge.right), key=smallest.__getitem__)
        children[n + step] = (first, second)
        smallest[n + step] = smallest[first]
    return children


def leaf_order(merges: Sequence[MergeStep]) -> list[int]:
    """中序遍历得到叶序（含较小行编号的子簇在前）"""
    n = _validate(merges)
    if not merges:
        return [0]
    children = ordered_children(merges)
    order: list[int] = []
    stack = [n + len(merges) - 1]
    while stack:
        node = stack.pop()
        if node < n:
            order.append(node)
        else:
            left, right = children[node]
            stack.append(right)
            stack.append(left)
    return order
