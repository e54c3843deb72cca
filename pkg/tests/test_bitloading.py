"""
Bit yükleme testleri
"""
import numpy as np
import pytest

from alloc.bitloading import (bits_for_level, bits_for_power, greedy_bitload, power_for_bits,
                              waterlevel_bitload)
from core.errors import ConvergenceError, InfeasibleRateError, InvalidArgumentError
from sim.oracle import bitload_oracle


@pytest.mark.parametrize("power, expected", [(0.0, 0.0), (1.0, 1.0), (3.0, 2.0)])
def test_bits_for_power(power, expected):
    assert bits_for_power(power, 1.0, 1.0, 1.0) == pytest.approx(expected)


def test_bits_for_power_rejects_bad_gain():
    with pytest.raises(InvalidArgumentError):
        bits_for_power(1.0, 0.0, 1.0)


@pytest.mark.parametrize("product, expected", [(0.5, 0), (1.0, 0), (4.0, 2), (2.9, 2)])
def test_bits_for_level(product, expected):
    assert bits_for_level(product, 1.0) == expected


def test_bits_for_level_cap():
    assert bits_for_level(1024.0, 1.0, max_bits=6) == 6
    with pytest.raises(InvalidArgumentError):
        bits_for_level(4.0, 1.0, max_bits=0)


@pytest.mark.parametrize("bits, unit_cost, expected", [(0, 1.0, 0.0), (1, 1.0, 1.0), (3, 0.5, 3.5)])
def test_power_for_bits(bits, unit_cost, expected):
    assert power_for_bits(bits, 1.0 / unit_cost, 1.0, 1.0) == pytest.approx(expected)


@pytest.mark.parametrize("gain", [0.25, 1.0, 2.0, 8.0])
def test_power_bits_round_trip(gain):
    for bits in range(13):
        power = power_for_bits(bits, gain, 1.0, 1.0)
        assert bits_for_power(power, gain, 1.0, 1.0) == bits


def test_power_bits_round_trip_with_gap():
    for bits in range(13):
        power = power_for_bits(bits, 0.7, 0.01, 3.3)
        assert bits_for_power(power, 0.7, 0.01, 3.3) == pytest.approx(bits, abs=1e-9)


def test_waterlevel_single_subcarrier():
    result = waterlevel_bitload([1.0], 3.0, 1.0)
    np.testing.assert_array_equal(result.bits, [2])
    np.testing.assert_allclose(result.powers, [3.0])


def test_waterlevel_equal_gains():
    result = waterlevel_bitload([1.0, 1.0], 2.0, 1.0)
    np.testing.assert_array_equal(result.bits, [1, 1])
    np.testing.assert_allclose(result.powers, [1.0, 1.0])


def test_waterlevel_tiny_budget_loads_nothing():
    result = waterlevel_bitload([1.0, 2.0, 0.5], 1e-9, 1.0)
    assert result.total_bits == 0
    assert result.total_power == 0.0


def test_waterlevel_never_exceeds_budget():
    rng = np.random.default_rng(6)
    for _ in range(1000):
        gains = rng.exponential(1.0, int(rng.integers(1, 17))) + 1e-3
        budget = float(rng.uniform(0.5, 200.0))
        result = waterlevel_bitload(gains, budget, 1.0, 1.0, max_bits=8)
        assert result.total_power <= budget * (1 + 1e-12)
        assert np.all(result.bits <= 8)
        assert np.all((result.bits == 0) == (result.powers == 0))


def test_waterlevel_bits_monotone_in_budget():
    gains = np.full(6, 0.8)
    totals = [waterlevel_bitload(gains, budget, 0.5, 2.0).total_bits for budget in np.linspace(0.1, 60, 40)]
    assert np.all(np.diff(totals) >= 0)


def test_waterlevel_small_overshoot_still_loads():
    gains = [0.2118, 1.2243, 0.5393, 0.8557, 1.0497, 1.2332]
    result = waterlevel_bitload(gains, 64.585, 1.0, 1.0, max_bits=8)
    assert 0 < result.total_power <= 64.585 * (1 + 1e-12)
    assert result.total_bits > 0


def test_waterlevel_random_budgets_never_fail():
    rng = np.random.default_rng(21)
    for _ in range(100):
        gains = rng.exponential(1.0, int(rng.integers(2, 9))) + 1e-3
        for budget in rng.uniform(0.5, 100.0, 20):
            result = waterlevel_bitload(gains, float(budget), 1.0, 1.0, max_bits=8)
            assert result.total_power <= budget * (1 + 1e-12)


def test_waterlevel_iteration_limit_before_feasible():
    # λ başlangıçta 3.9 → 2 bit, güç 3 > 2.9
    with pytest.raises(ConvergenceError):
        waterlevel_bitload([1.0], 2.9, 1.0, max_iters=1)
    result = waterlevel_bitload([1.0], 2.9, 1.0)
    np.testing.assert_array_equal(result.bits, [1])



def test_waterlevel_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        waterlevel_bitload([1.0], 0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        waterlevel_bitload([1.0], 1.0, 1.0, step_size=0.0)


def test_greedy_small_instances():
    assert greedy_bitload([1.0, 2.0], 0, 1.0).total_power == 0.0
    single = greedy_bitload([1.0], 2, 1.0)
    np.testing.assert_array_equal(single.bits, [2])
    assert single.total_power == pytest.approx(3.0)
    pair = greedy_bitload([1.0, 1.0], 2, 1.0)
    np.testing.assert_array_equal(pair.bits, [1, 1])
    assert pair.total_power == pytest.approx(2.0)


def test_greedy_tie_prefers_lowest_index():
    result = greedy_bitload([1.0, 1.0, 1.0], 1, 1.0)
    np.testing.assert_array_equal(result.bits, [1, 0, 0])


def test_greedy_respects_cap():
    result = greedy_bitload([100.0, 0.01], 3, 1.0, max_bits=2)
    np.testing.assert_array_equal(result.bits, [2, 1])


def test_greedy_infeasible_rate():
    with pytest.raises(InfeasibleRateError):
        greedy_bitload([1.0, 1.0], 5, 1.0, max_bits=2)


def test_greedy_matches_exhaustive_search():
    rng = np.random.default_rng(12)
    checked = 0
    for count in range(1, 5):
        for _ in range(40):
            gains = rng.choice([0.3, 0.5, 1.0, 2.0, 4.0], count)
            for max_bits in range(1, 5):
                for target in range(1, min(8, count * max_bits) + 1):
                    loaded = greedy_bitload(gains, target, 0.2, 1.5, max_bits)
                    expected, _ = bitload_oracle(gains, target, 0.2, 1.5, max_bits)
                    assert loaded.total_power == pytest.approx(expected, rel=1e-12)
                    assert loaded.total_bits == target
                    checked += 1
    assert checked >= 500
