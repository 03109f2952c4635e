"""
测试性状计算与性状表
"""
from collections import Counter

import numpy as np
import pytest

from conftest import ARCHETYPES, make_observation
from src.analysis import compute_traits, trait_series, traits_table
from src.core import InvalidValueError
from src.data.parsers import parse_traits_csv
from src.data.processors import load_dataset
from src.domain import TraitRecord, Treatment
from src.generation import format_traits_csv
from src.synthesis import Archetype, NoiseModel, derive_seed, generate_plant

SQUARE = [(0, 0), (100, 0), (100, 100), (0, 100)]


def test_square_traits():
    record = compute_traits(make_observation(SQUARE))
    assert record.n_leaves == 4
    assert record.hull_area == 10000.0
    assert record.leaves_per_hull == 4e-4
    assert (record.h_spread, record.v_spread) == (100.0, 100.0)


def test_two_tips_degenerate():
    record = compute_traits(make_observation([(10, 10), (50, 80)]))
    assert record.n_leaves == 2
    assert record.hull_area == 0.0
    assert record.leaves_per_hull is None
    assert (record.h_spread, record.v_spread) == (40.0, 70.0)


def test_zero_tips():
    record = compute_traits(make_observation([]))
    assert (record.n_leaves, record.hull_area, record.h_spread, record.v_spread) == (0, 0.0, 0.0, 0.0)
    assert record.leaves_per_hull is None


def test_duplicate_tips_count_as_leaves():
    record = compute_traits(make_observation(SQUARE + [(100, 100), (100, 100)]))
    assert record.n_leaves == 6
    assert record.hull_area == 10000.0


def test_metadata_copied():
    obs = make_observation(SQUARE, plant_id="X9", genotype="DULAR", treatment=Treatment.DROUGHT, dat=52)
    record = compute_traits(obs)
    assert (record.plant_id, record.genotype, record.treatment, record.dat) == ("X9", "DULAR", Treatment.DROUGHT, 52)


def test_ratio_times_area_is_count():
    rng = np.random.default_rng(4)
    for _ in range(200):
        points = rng.uniform(0, 4000, size=(int(rng.integers(3, 40)), 2))
        record = compute_traits(make_observation(points, width=4000, height=4000))
        assert record.leaves_per_hull * record.hull_area == pytest.approx(record.n_leaves, rel=1e-12)


def test_removing_interior_tip():
    """去掉一个严格内部的叶尖：叶片数减 1，面积不变，比值严格减小"""
    full = compute_traits(make_observation(SQUARE + [(50, 50)]))
    reduced = compute_traits(make_observation(SQUARE))
    assert reduced.n_leaves == full.n_leaves - 1
    assert reduced.hull_area == full.hull_area
    assert reduced.leaves_per_hull < full.leaves_per_hull


def test_tip_order_does_not_matter():
    rng = np.random.default_rng(12)
    points = rng.uniform(0, 1000, size=(20, 2))
    a = compute_traits(make_observation(points))
    b = compute_traits(make_observation(points[rng.permutation(20)]))
    assert a == b


def test_drought_twin_has_fewer_leaves_and_smaller_hull():
    arch = Archetype(
        name="spreading",
        leaf_count_mean=20,
        leaf_count_sd=2,
        radius_mean=800,
        radius_sd=100,
        drought_leaf_factor=0.7,
        drought_radius_factor=0.6,
    )
    for index in range(10):
        seed = derive_seed(99, index)
        control, _ = generate_plant(arch, Treatment.CONTROL, 45, seed, noise=NoiseModel.none())
        drought, _ = generate_plant(arch, Treatment.DROUGHT, 45, seed, noise=NoiseModel.none())
        c, d = compute_traits(control), compute_traits(drought)
        assert d.n_leaves < c.n_leaves
        assert d.hull_area < c.hull_area


# ============ 性状表 ============

def test_empty_table():
    assert traits_table([]) == []


def test_table_on_synthetic_fixture(synth_dataset):
    observations = load_dataset(synth_dataset)
    records = traits_table(observations)
    assert len(records) == 60
    assert [r.plant_id for r in records] == [o.plant_id for o in observations]


def test_table_permutation(synth_dataset):
    observations = load_dataset(synth_dataset)
    shuffled = [observations[i] for i in np.random.default_rng(1).permutation(len(observations))]
    assert Counter(traits_table(observations)) == Counter(traits_table(shuffled))


def test_table_order_independent_of_workers(synth_dataset):
    observations = load_dataset(synth_dataset)
    assert traits_table(observations, jobs=1) == traits_table(observations, jobs=3)


def test_traits_csv_format():
    records = [
        compute_traits(make_observation(SQUARE, plant_id="P1")),
        compute_traits(make_observation([(1, 1), (2, 3)], plant_id="P2")),
    ]
    lines = format_traits_csv(records).splitlines()
    assert lines[0] == "plant_id,genotype,treatment,dat,n_leaves,hull_area_px2,leaves_per_hull,h_spread_px,v_spread_px"
    assert lines[1] == "P1,G,control,45,4,10000,0.0004,100,100"
    assert lines[2] == "P2,G,control,45,2,0,,1,2"


def test_traits_csv_nine_significant_digits():
    record = compute_traits(make_observation([(0, 0), (1000 / 3, 0), (0, 200 / 7)]))
    row = format_traits_csv([record]).splitlines()[1].split(",")
    assert row[7] == "333.333333"
    assert row[8] == "28.5714286"


def test_traits_csv_scaled_to_millimetres():
    record = compute_traits(make_observation(SQUARE))
    text = format_traits_csv([record], scale=0.5)
    header, row = text.splitlines()
    assert "hull_area_mm2" in header and "h_spread_mm" in header
    assert row.split(",")[5:] == ["2500", "0.0016", "50", "50"]


def test_traits_csv_round_trip():
    records = [
        compute_traits(make_observation(SQUARE, plant_id="P1")),
        compute_traits(make_observation([(5, 5)], plant_id="P2", treatment=Treatment.DROUGHT)),
    ]
    parsed = parse_traits_csv(format_traits_csv(records))
    assert parsed == records


def test_traits_csv_round_trip_mm():
    record = compute_traits(make_observation(SQUARE))
    parsed = parse_traits_csv(format_traits_csv([record], scale=0.5))[0]
    assert parsed.hull_area == 2500.0
    assert parsed.h_spread == 50.0


@pytest.mark.parametrize("token", ["1_000", "١٠", "1,5", "inf", "-3"])
def test_traits_csv_rejects_non_decimal_area(token):
    header = "plant_id,genotype,treatment,dat,n_leaves,hull_area_px2,leaves_per_hull,h_spread_px,v_spread_px\n"
    text = header + f"P1,RASI,control,45,4,\"{token}\",0.0004,100,100\n"
    with pytest.raises(InvalidValueError) as excinfo:
        parse_traits_csv(text)
    assert (excinfo.value.row, excinfo.value.column) == (2, "hull_area_px2")


def test_trait_series():
    records = [
        TraitRecord("a", "RASI", Treatment.CONTROL, 35, 10, 100.0, 0.1, 5.0, 5.0),
        TraitRecord("b", "RASI", Treatment.CONTROL, 35, 14, 100.0, 0.14, 5.0, 5.0),
        TraitRecord("a", "RASI", Treatment.CONTROL, 45, 16, 100.0, 0.16, 5.0, 5.0),
    ]
    series = trait_series(records, "n_leaves")
    assert list(series["dat"]) == [35, 45]
    assert list(series["mean"]) == [12.0, 16.0]
    assert list(series["count"]) == [2, 1]


def test_archetype_growth():
    arch = ARCHETYPES[0].model_copy(update={"leaf_growth_per_day": 0.5, "reference_dat": 35})
    assert arch.leaf_mean_at(45) == ARCHETYPES[0].leaf_count_mean + 5
