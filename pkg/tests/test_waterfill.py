"""
Su doldurma testleri
"""
import numpy as np
import pytest

from alloc.waterfill import user_rate, waterfill, waterfilled_rate
from core.errors import InvalidArgumentError
from sim.oracle import waterfill_oracle


def _assert_kkt(cnr, budget, solution):
    powers = solution.powers
    floors = 1.0 / np.asarray(cnr)
    level = solution.water_level
    assert np.all(powers >= 0)
    assert powers.sum() == pytest.approx(budget, rel=1e-9)
    active = powers > 0
    np.testing.assert_allclose(powers[active] + floors[active], level, rtol=1e-9)
    assert np.all(floors[~active] >= level * (1 - 1e-9))


def test_symmetric_split():
    solution = waterfill([1.0, 1.0], 2.0)
    np.testing.assert_allclose(solution.powers, [1.0, 1.0])
    assert solution.water_level == pytest.approx(2.0)


def test_weak_subcarrier_gets_nothing():
    solution = waterfill([1.0, 0.5], 1.0)
    np.testing.assert_allclose(solution.powers, [1.0, 0.0], atol=1e-12)
    assert solution.water_level == pytest.approx(2.0)


def test_three_subcarriers_one_deactivated():
    solution = waterfill([4.0, 2.0, 1.0], 1.0)
    np.testing.assert_allclose(solution.powers, [0.625, 0.375, 0.0], atol=1e-12)
    assert solution.water_level == pytest.approx(0.875)
    assert solution.active_count == 2


def test_zero_budget():
    solution = waterfill([2.0, 3.0], 0.0)
    np.testing.assert_array_equal(solution.powers, [0.0, 0.0])
    assert user_rate([2.0, 3.0], solution.powers, 2) == 0.0


def test_rejects_non_positive_cnr():
    with pytest.raises(InvalidArgumentError):
        waterfill([1.0, 0.0], 1.0)
    with pytest.raises(InvalidArgumentError):
        waterfill([1.0, -2.0], 1.0)


def test_matches_enumeration_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        cnr = rng.exponential(1.0, int(rng.integers(1, 6))) + 1e-3
        budget = float(rng.uniform(0.01, 5.0))
        solution = waterfill(cnr, budget)
        expected, _ = waterfill_oracle(cnr, budget)
        achieved = float(np.sum(np.log2(1.0 + solution.powers * cnr)))
        assert achieved == pytest.approx(expected, abs=1e-6)
        _assert_kkt(cnr, budget, solution)


def test_rate_monotone_in_budget():
    rng = np.random.default_rng(3)
    cnr = rng.exponential(2.0, 8) + 0.01
    rates = [waterfilled_rate(cnr, budget, 8) for budget in np.linspace(0.0, 10.0, 41)]
    assert np.all(np.diff(rates) >= -1e-12)


def test_user_rate_simple_cases():
    assert user_rate([1.0], [1.0], 1) == pytest.approx(1.0)
    assert user_rate([1.0, 1.0], [1.0, 1.0], 2) == pytest.approx(1.0)
    assert user_rate([5.0, 7.0], [0.0, 0.0], 2) == 0.0


def test_user_rate_gap_divides_snr():
    assert user_rate([3.0], [1.0], 1, snr_gap=3.0) == pytest.approx(1.0)


def test_user_rate_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        user_rate([1.0, 2.0], [1.0], 2)
