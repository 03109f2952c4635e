"""
测试特征聚合与标准化
"""
import math

import numpy as np
import pandas as pd
import pytest

from conftest import make_record
from src.analysis import aggregate, distance_matrix, standardize, traits_table, treatment_response, ward_linkage
from src.core import AggregationError
from src.data.processors import load_dataset
from src.domain import TRAIT_NAMES, AggregationScheme, FeatureMatrix, Treatment

C, D = Treatment.CONTROL, Treatment.DROUGHT


def test_mean_of_one_cell():
    records = [make_record("RASI", C, n_leaves=10), make_record("RASI", C, n_leaves=14, plant_id="r2")]
    m = aggregate(records, AggregationScheme(features=("n_leaves",), treatments=(C,)))
    assert m.row_labels == ("RASI",)
    assert m.column_labels == ("n_leaves.control.mean",)
    assert m.values.tolist() == [[12.0]]
    assert not m.standardized


def test_all_features_ten_columns():
    records = [make_record(g, t) for g in ("A", "B") for t in (C, D)]
    m = aggregate(records, AggregationScheme.all_features())
    assert m.shape == (2, 10)
    assert m.column_labels[:2] == ("n_leaves.control.mean", "n_leaves.drought.mean")
    assert m.column_labels[-1] == "v_spread.drought.mean"


def test_rows_sorted_lexicographically():
    records = [make_record(g, C) for g in ("RASI", "DULAR", "ANJALI")]
    m = aggregate(records, AggregationScheme.leaf_count_only(treatments=(C,)))
    assert m.row_labels == ("ANJALI", "DULAR", "RASI")


def test_missing_cell_names_genotype_and_cell():
    records = [make_record("A", C), make_record("A", D), make_record("B", C)]
    with pytest.raises(AggregationError) as excinfo:
        aggregate(records, AggregationScheme.leaf_count_only())
    assert excinfo.value.genotype == "B"
    assert excinfo.value.cell == "n_leaves.drought.mean"


def test_degenerate_ratio_excluded_from_mean_only():
    records = [
        make_record("A", C, n_leaves=10, hull_area=100.0, plant_id="a1"),
        make_record("A", C, n_leaves=2, hull_area=0.0, plant_id="a2"),
    ]
    m = aggregate(records, AggregationScheme(features=("n_leaves", "leaves_per_hull"), treatments=(C,)))
    assert m.column("n_leaves.control.mean").tolist() == [6.0]
    assert m.column("leaves_per_hull.control.mean").tolist() == [0.1]


def test_only_degenerate_ratios_is_an_error():
    records = [make_record("A", C, n_leaves=2, hull_area=0.0)]
    with pytest.raises(AggregationError):
        aggregate(records, AggregationScheme(features=("leaves_per_hull",), treatments=(C,)))


def test_dat_range_filter():
    records = [
        make_record("A", C, n_leaves=10, dat=35),
        make_record("A", C, n_leaves=20, dat=45),
        make_record("A", C, n_leaves=40, dat=55),
    ]
    scheme = AggregationScheme(features=("n_leaves",), treatments=(C,), dat_range=(40, 55))
    assert aggregate(records, scheme).values.tolist() == [[30.0]]


def test_scheme_validation():
    with pytest.raises(ValueError):
        AggregationScheme(features=())
    with pytest.raises(ValueError):
        AggregationScheme(treatments=())
    with pytest.raises(ValueError):
        AggregationScheme(features=("height",))
    with pytest.raises(ValueError):
        AggregationScheme(dat_range=(50, 40))


def test_aggregate_permutation_invariant(synth_dataset):
    records = traits_table(load_dataset(synth_dataset))
    scheme = AggregationScheme.all_features()
    reference = aggregate(records, scheme)
    shuffled = [records[i] for i in np.random.default_rng(3).permutation(len(records))]
    np.testing.assert_allclose(aggregate(shuffled, scheme).values, reference.values, rtol=1e-12)


def test_aggregate_matches_one_pass_recomputation(synth_dataset):
    """与逐条累加的独立重算一致"""
    records = traits_table(load_dataset(synth_dataset))
    m = aggregate(records, AggregationScheme.all_features())
    for i, genotype in enumerate(m.row_labels):
        for j, label in enumerate(m.column_labels):
            feature, treatment, _ = label.split(".")
            total, count = 0.0, 0
            for r in records:
                if r.genotype == genotype and r.treatment.value == treatment:
                    value = getattr(r, feature)
                    if value is not None:
                        total += value
                        count += 1
            assert m.values[i, j] == pytest.approx(total / count, rel=1e-12)


# ============ 标准化 ============

def _matrix(columns) -> FeatureMatrix:
    values = np.array(columns, dtype=float).T
    return FeatureMatrix(
        tuple(f"g{i}" for i in range(values.shape[0])),
        tuple(f"f{j}" for j in range(values.shape[1])),
        values,
    )


def test_two_point_z_score():
    z = standardize(_matrix([[1, 3]]))
    assert z.standardized
    assert z.values[:, 0].tolist() == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_constant_column_maps_to_zero():
    z = standardize(_matrix([[5, 5, 5], [1, 2, 3]]))
    assert z.values[:, 0].tolist() == [0.0, 0.0, 0.0]


def test_scale_invariance():
    column = [2.0, 7.5, 3.25, 11.0]
    for c in (1e-3, 2.0, 1e3):
        np.testing.assert_allclose(
            standardize(_matrix([[c * x for x in column]])).values,
            standardize(_matrix([column])).values,
            rtol=1e-12,
            atol=1e-12,
        )


def test_column_moments():
    rng = np.random.default_rng(17)
    z = standardize(_matrix(rng.normal(50, 20, size=(4, 9)))).values
    np.testing.assert_allclose(z.mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(z.std(axis=0, ddof=1), 1.0, atol=1e-12)


def test_standardize_errors():
    with pytest.raises(AggregationError):
        standardize(_matrix([[1.0]]))
    with pytest.raises(AggregationError):
        standardize(standardize(_matrix([[1, 2]])))


def test_argmin_invariance_under_column_rescaling():
    """任一原始列乘以正常数后，标准化流程的合并序列逐位相同"""
    rng = np.random.default_rng(77)
    for _ in range(50):
        n, d = int(rng.integers(3, 11)), int(rng.integers(1, 6))
        raw = rng.normal(0, 1, size=(n, d)) * rng.uniform(0.1, 1000, size=d)
        base = ward_linkage(distance_matrix(standardize(_matrix(raw.T))))
        column = int(rng.integers(0, d))
        for c in (1e-3, 1.0, 1e3):
            scaled = raw.copy()
            scaled[:, column] *= c
            merges = ward_linkage(distance_matrix(standardize(_matrix(scaled.T))))
            assert [(m.left, m.right) for m in merges] == [(m.left, m.right) for m in base]


def test_feature_matrix_validation():
    with pytest.raises(ValueError):
        FeatureMatrix(("a", "a"), ("f",), np.zeros((2, 1)))
    with pytest.raises(ValueError):
        FeatureMatrix(("a",), ("f",), np.array([[np.inf]]))
    with pytest.raises(ValueError):
        FeatureMatrix(("a",), ("f", "g"), np.zeros((1, 1)))


def test_feature_frame_round_trip():
    m = _matrix([[1, 2, 3], [4, 5, 6]])
    frame = m.to_frame()
    assert frame.index.name == "genotype"
    assert FeatureMatrix.from_frame(frame) == m


# ============ 胁迫响应 ============

def test_treatment_response():
    records = [
        make_record("A", C, n_leaves=20, hull_area=400.0),
        make_record("A", D, n_leaves=14, hull_area=144.0),
        make_record("B", C, n_leaves=10),
    ]
    table = treatment_response(records, traits=("n_leaves", "hull_area"))
    row = table[(table["genotype"] == "A") & (table["trait"] == "hull_area")].iloc[0]
    assert row["drought_to_control"] == pytest.approx(0.36)
    missing = table[(table["genotype"] == "B") & (table["trait"] == "n_leaves")].iloc[0]
    assert pd.isna(missing["drought_to_control"])
    assert len(table) == 4
    assert set(TRAIT_NAMES) >= set(table["trait"])
