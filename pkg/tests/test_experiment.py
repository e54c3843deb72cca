"""
Monte-Carlo deney düzeneği testleri
"""
import numpy as np
import pytest

from core.errors import InvalidArgumentError
from sim.experiment import (ExperimentSpec, build_system_config, parse_gap, resolve_ratios,
                            run_capacity_sweep, run_fairness_experiment, split_targets)

RATE_ADAPTIVE = "rootfinding,linear,joint"


def _spec(**overrides):
    values = dict(method=RATE_ADAPTIVE, user_counts=(2, 4), num_subcarriers=16, num_realizations=3,
                  master_seed=5, target_bits=32, max_bits=6)
    values.update(overrides)
    return ExperimentSpec(**values)


def test_resolve_ratios():
    assert resolve_ratios("equal", 3) == (1.0, 1.0, 1.0)
    assert resolve_ratios("pattern", 5) == (1.0, 2.0, 4.0, 1.0, 2.0)
    assert resolve_ratios("1, 3", 3) == (1.0, 3.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        resolve_ratios("1,0", 2)
    with pytest.raises(InvalidArgumentError):
        resolve_ratios("one", 2)


def test_split_targets_largest_remainder():
    assert split_targets(10, [1, 1, 1]) == (4, 3, 3)
    assert split_targets(256, [1.0] * 16) == (16,) * 16
    assert split_targets(7, [1, 2, 4]) == (1, 2, 4)
    assert sum(split_targets(100, [1, 2, 4, 1, 2])) == 100


@pytest.mark.parametrize("text, expected", [("3.3", 3.3), ("0dB", 1.0), ("10dB", 10.0), (2, 2.0)])
def test_parse_gap(text, expected):
    assert parse_gap(text) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["0.5", "-3dB", "fast"])
def test_parse_gap_rejects(text):
    with pytest.raises(InvalidArgumentError):
        parse_gap(text)


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        _spec(num_realizations=0)
    with pytest.raises(InvalidArgumentError):
        _spec(user_counts=(4, 32))
    with pytest.raises(InvalidArgumentError):
        _spec(method="greedy")
    with pytest.raises(InvalidArgumentError):
        _spec(user_counts=())


def test_spec_from_mapping_parses_text_values():
    spec = ExperimentSpec.from_mapping({
        "user_counts": "2,3", "num_realizations": "4", "snr_gap": "5dB", "gap_in_capacity": "no",
    })
    assert spec.user_counts == (2, 3)
    assert spec.num_realizations == 4
    assert spec.snr_gap == pytest.approx(10 ** 0.5)
    assert spec.gap_in_capacity is False


def test_spec_from_mapping_rejects_unknown_key():
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec.from_mapping({"users": "4"})
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec.from_mapping({"num_subcarriers": "many"})


def test_noise_from_average_snr():
    spec = _spec(avg_snr_db=20.0, total_power=2.0)
    config = build_system_config(spec, 4)
    assert config.noise_power == pytest.approx(2.0 / (16 * 100.0))


def test_sweep_is_deterministic():
    spec = _spec(num_realizations=1)
    assert run_capacity_sweep(spec) == run_capacity_sweep(spec)


def test_sweep_rows_and_ratios():
    rows = run_capacity_sweep(_spec())
    assert [(row.method, row.num_users) for row in rows] == [
        (m, k) for k in (2, 4) for m in ("rootfinding", "linear", "joint")
    ]
    for row in rows:
        assert sum(row.ratios) == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(row.target_ratios, [1.0 / row.num_users] * row.num_users)
        assert row.power_mean == pytest.approx(1.0)
        assert row.capacity_se >= 0
        assert row.deviation == pytest.approx(max(abs(r - t) for r, t in zip(row.ratios, row.target_ratios)))


def test_single_user_methods_report_equal_capacity():
    rows = run_capacity_sweep(_spec(user_counts=(1,), num_realizations=2))
    capacities = [row.capacity_mean for row in rows]
    np.testing.assert_allclose(capacities, capacities[0], atol=1e-9)


def test_single_realization_has_zero_standard_error():
    rows = run_capacity_sweep(_spec(num_realizations=1))
    assert all(row.capacity_se == 0.0 for row in rows)


def test_gap_switch_lowers_capacity():
    with_gap = run_capacity_sweep(_spec(method="linear", user_counts=(2,)))
    without_gap = run_capacity_sweep(_spec(method="linear", user_counts=(2,), gap_in_capacity=False))
    assert without_gap[0].capacity_mean > with_gap[0].capacity_mean


def test_proposed_capacity_follows_targets():
    rows = run_capacity_sweep(_spec(method="proposed", num_realizations=2))
    for row in rows:
        assert row.capacity_mean == pytest.approx(32 / 16)
        assert row.power_mean > 0


def test_parallel_matches_serial():
    serial = run_capacity_sweep(_spec(method="all", workers=1))
    parallel = run_capacity_sweep(_spec(method="all", workers=2))
    assert serial == parallel


def test_fairness_requires_single_user_count():
    with pytest.raises(InvalidArgumentError):
        run_fairness_experiment(_spec())


def test_fairness_two_users_linear():
    spec = ExperimentSpec(method="linear", user_counts=(2,), num_realizations=100, rate_ratios="equal")
    row, = run_fairness_experiment(spec)
    assert row.target_ratios == (0.5, 0.5)
    assert row.deviation <= 0.05


@pytest.mark.slow
def test_capacity_grows_with_user_count():
    spec = ExperimentSpec(method="rootfinding,linear,joint,bestgain-equal-power", user_counts=(4, 8, 12, 16),
                          num_subcarriers=64, num_realizations=100, avg_snr_db=38.0, snr_gap=3.3)
    rows = run_capacity_sweep(spec)
    by_method = {}
    for row in rows:
        by_method.setdefault(row.method, []).append(row.capacity_mean)
    for method, capacities in by_method.items():
        assert np.all(np.diff(capacities) > 0), method
    assert all(lin >= root for lin, root in zip(by_method["linear"], by_method["rootfinding"]))


@pytest.mark.slow
def test_linear_proportionality_sixteen_users():
    spec = ExperimentSpec(method="linear", user_counts=(16,), num_realizations=100, rate_ratios="pattern")
    row, = run_fairness_experiment(spec)
    assert row.deviation <= 0.05
