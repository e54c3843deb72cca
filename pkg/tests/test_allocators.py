"""
Temel tahsis yöntemleri testleri
"""
import numpy as np
import pytest

from alloc.allocators import (assign_best_gain, bestgain_equal_power_allocate, joint_allocate,
                              linear_allocate, proportional_budgets, rootfinding_allocate,
                              subcarrier_quotas)
from alloc.waterfill import user_rate, waterfilled_rate
from core.channel import generate_channel
from core.errors import InvalidArgumentError
from core.types import SystemConfig
from sim.oracle import proportional_oracle

RATE_ADAPTIVE = [rootfinding_allocate, linear_allocate, joint_allocate]


def _check_constraints(config, channel, result):
    assert result.assignment.is_complete()
    assert result.power.sum() <= config.total_power * (1 + 1e-9)
    assert np.all(result.power >= 0)
    assert not np.any((result.power > 0) & ~result.assignment.mask())
    recomputed = [
        user_rate(channel.cnr[k], result.power[k], config.num_subcarriers, config.snr_gap)
        for k in range(config.num_users)
    ]
    np.testing.assert_allclose(result.rates, recomputed, atol=1e-9)


def test_assign_best_gain_picks_strongest_user(channel_from_cnr):
    assert assign_best_gain(channel_from_cnr([[2.0, 1.0], [1.0, 2.0]])).owner == (0, 1)
    assert assign_best_gain(channel_from_cnr([[1.0, 1.0], [1.0, 1.0]])).owner == (0, 0)
    assert assign_best_gain(channel_from_cnr([[1.0, 3.0, 2.0]])).owner == (0, 0, 0)


@pytest.mark.parametrize("allocate", RATE_ADAPTIVE)
def test_single_user_reduces_to_waterfilling(allocate):
    config = SystemConfig(1, 16, snr_gap=3.3)
    channel = generate_channel(config, seed=11)
    result = allocate(config, channel)
    expected = waterfilled_rate(channel.cnr[0] / config.snr_gap, config.total_power, config.num_subcarriers)
    assert result.rates[0] == pytest.approx(expected, abs=1e-9)
    assert result.total_power_used == pytest.approx(config.total_power)


def test_single_user_methods_agree():
    config = SystemConfig(1, 32)
    channel = generate_channel(config, seed=4)
    rates = [allocate(config, channel).rates[0] for allocate in RATE_ADAPTIVE]
    np.testing.assert_allclose(rates, rates[0], atol=1e-9)


def test_rootfinding_symmetric_split(channel_from_cnr):
    config = SystemConfig(2, 2)
    channel = channel_from_cnr([[1.0, 1e-6], [1e-6, 1.0]])
    result = rootfinding_allocate(config, channel)
    assert result.assignment.owner == (0, 1)
    np.testing.assert_allclose(result.power.sum(axis=1), [0.5, 0.5], atol=1e-6)
    assert result.rates[0] == pytest.approx(result.rates[1], rel=1e-6)


def test_rootfinding_meets_ratio_targets():
    config = SystemConfig(2, 4, rate_ratios=(2.0, 1.0))
    deviations = []
    for seed in range(100):
        result = rootfinding_allocate(config, generate_channel(config, seed, num_taps=4))
        deviations.append(abs(result.rates[0] / result.rates[1] - 2.0))
    assert np.mean(deviations) <= 0.05 * 2


def test_proportional_budgets_match_bisection_oracle():
    rng = np.random.default_rng(8)
    for _ in range(5):
        user_cnrs = [rng.exponential(40.0, 3) + 0.5 for _ in range(3)]
        ratios = [1.0, 2.0, 3.0]
        fast = proportional_budgets(user_cnrs, ratios, 1.0, 12)
        slow = proportional_oracle(user_cnrs, ratios, 1.0, 12)
        np.testing.assert_allclose(fast, slow, atol=1e-6)
        assert fast.sum() == pytest.approx(1.0)


def test_linear_equal_flat_channels_split_power(channel_from_cnr):
    config = SystemConfig(2, 4)
    channel = channel_from_cnr(np.full((2, 4), 10.0))
    result = linear_allocate(config, channel)
    np.testing.assert_array_equal(result.assignment.counts(), [2, 2])
    np.testing.assert_allclose(result.power.sum(axis=1), [0.5, 0.5], rtol=1e-9)


def test_linear_counts_with_equal_ratios():
    config = SystemConfig(4, 16)
    result = linear_allocate(config, generate_channel(config, seed=3))
    counts = result.assignment.counts()
    assert counts.sum() == 16
    assert set(counts.tolist()) <= {3, 4, 5}


@pytest.mark.parametrize("num_subcarriers, ratios, expected", [
    (16, [1, 1, 1, 1], [4, 4, 4, 4]),
    (5, [1, 1, 1], [1, 2, 2]),
    (3, [1, 100, 1], [1, 1, 1]),
    (10, [1, 2, 2], [2, 4, 4]),
])
def test_subcarrier_quotas(num_subcarriers, ratios, expected):
    quotas = subcarrier_quotas(num_subcarriers, ratios)
    np.testing.assert_array_equal(quotas, expected)


def test_joint_uses_whole_budget(random_channel, small_config):
    result = joint_allocate(small_config, random_channel)
    assert result.total_power_used == pytest.approx(small_config.total_power)


def test_joint_fairer_than_best_gain():
    config = SystemConfig(2, 4)
    better = 0
    for seed in range(100):
        channel = generate_channel(config, seed, num_taps=4)
        joint = joint_allocate(config, channel).rates
        greedy = bestgain_equal_power_allocate(config, channel).rates
        if abs(joint[0] - joint[1]) <= abs(greedy[0] - greedy[1]) + 1e-12:
            better += 1
    assert better >= 90


@pytest.mark.parametrize("allocate", RATE_ADAPTIVE + [bestgain_equal_power_allocate])
@pytest.mark.parametrize("taps", [1, 6])
def test_allocator_constraints(allocate, taps):
    config = SystemConfig(4, 16, rate_ratios=(1.0, 2.0, 4.0, 1.0), snr_gap=3.3, noise_psd=1e-7)
    for seed in range(10):
        channel = generate_channel(config, seed, num_taps=taps)
        _check_constraints(config, channel, allocate(config, channel))


def test_linear_more_proportional_than_best_gain():
    config = SystemConfig(4, 16)
    linear_spread, greedy_spread = [], []
    for seed in range(100):
        channel = generate_channel(config, seed)
        linear = linear_allocate(config, channel).rates
        greedy = bestgain_equal_power_allocate(config, channel).rates
        assert linear.min() > 0
        if greedy.min() == 0:
            continue
        linear_spread.append(linear.max() / linear.min())
        greedy_spread.append(greedy.max() / greedy.min())
    assert len(greedy_spread) >= 10
    assert np.isfinite(np.mean(linear_spread))
    assert np.mean(linear_spread) <= np.mean(greedy_spread)


def test_linear_gives_every_user_power():
    config = SystemConfig(12, 64, snr_gap=3.3, noise_psd=1e-7)
    for seed in range(100):
        result = linear_allocate(config, generate_channel(config, seed))
        assert np.all(result.power.sum(axis=1) > 0)
        assert np.all(result.rates > 0)
        assert result.total_power_used == pytest.approx(config.total_power)


def test_linear_power_follows_flat_channel_proportion(channel_from_cnr):
    config = SystemConfig(2, 3)
    channel = channel_from_cnr([[4.0, 4.0, 1.0], [1.0, 1.0, 2.0]])
    result = linear_allocate(config, channel)
    counts = result.assignment.counts()
    budgets = result.power.sum(axis=1)
    held = [channel.cnr[k, result.assignment.subcarriers_of(k)] for k in range(2)]
    gains = [np.exp(np.mean(np.log(h))) for h in held]
    assert budgets[1] / budgets[0] == pytest.approx(counts[1] * gains[0] / (counts[0] * gains[1]), rel=1e-9)
    assert budgets.sum() == pytest.approx(config.total_power)


@pytest.mark.parametrize("allocate", RATE_ADAPTIVE)
def test_shape_mismatch_rejected(allocate, random_channel):
    with pytest.raises(InvalidArgumentError):
        allocate(SystemConfig(2, 16), random_channel)
