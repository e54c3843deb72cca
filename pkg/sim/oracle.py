"""
Brute-force Oracles - Küçük örneklerde kaba kuvvet doğrulamaları
"""
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from alloc.allocators import proportional_budgets
from alloc.bitloading import greedy_bitload, waterlevel_bitload
from alloc.proposed import determine_counts, proposed_allocate
from alloc.waterfill import waterfill, waterfilled_rate
from core.channel import channel_to_noise
from core.errors import ConvergenceError, InfeasibleRateError, InvalidArgumentError
from core.types import ChannelRealization, SystemConfig
from utils.logger import logger

__all__ = [
    'OracleCheck',
    'waterfill_oracle',
    'bitload_oracle',
    'proposed_oracle',
    'proportional_oracle',
    'run_oracle_checks',
]

KKT_TOLERANCE = 1e-9
OBJECTIVE_TOLERANCE = 1e-6
PROPOSED_MARGIN = 1.10


@dataclass(frozen=True)
class OracleCheck:
    """Bir doğrulamanın özeti"""

    name: str
    instances: int
    failures: int
    worst: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def waterfill_oracle(cnr: Sequence[float], budget: float) -> Tuple[float, np.ndarray]:
    """Tüm aktif küme adaylarını dene; en iyi geçerli amaç değeri ve güçler"""
    values = np.asarray(cnr, dtype=float)
    floors = 1.0 / values
    best, best_powers = -np.inf, np.zeros(values.size)
    for size in range(1, values.size + 1):
        for active in itertools.combinations(range(values.size), size):
            idx = list(active)
            level = (budget + floors[idx].sum()) / size
            powers = np.zeros(values.size)
            powers[idx] = level - floors[idx]
            if np.any(powers < 0):
                continue
            objective = float(np.sum(np.log2(1.0 + powers * values)))
            if objective > best:
                best, best_powers = objective, powers
    return best, best_powers


def _kkt_violation(cnr: np.ndarray, powers: np.ndarray, level: float, budget: float) -> float:
    """Su doldurma KKT koşullarından en büyük sapma"""
    floors = 1.0 / cnr
    active = powers > 0
    scale = max(level, 1.0)
    violations = [
        max(0.0, -float(powers.min())),
        abs(float(powers.sum()) - budget) / max(budget, 1.0),
        float(np.max(np.abs(powers[active] + floors[active] - level), initial=0.0)) / scale,
        float(np.max(level - floors[~active], initial=0.0)) / scale,
    ]
    return max(violations)


@lru_cache(maxsize=None)
def _bit_grid(count: int, max_bits: int) -> np.ndarray:
    return np.array(list(itertools.product(range(max_bits + 1), repeat=count)), dtype=int)


def bitload_oracle(gains: Sequence[float], target_bits: int, noise_power: float,
                   snr_gap: float = 1.0, max_bits: int = 8) -> Tuple[float, np.ndarray]:
    """Toplamı target_bits olan tüm bit vektörleri arasında en düşük güç"""
    g = np.asarray(gains, dtype=float)
    grid = _bit_grid(g.size, max_bits)
    grid = grid[grid.sum(axis=1) == target_bits]
    if grid.size == 0:
        raise InfeasibleRateError(f"{target_bits} bits do not fit {g.size} x {max_bits}")
    powers = ((noise_power * snr_gap / g) * (np.exp2(grid) - 1.0)).sum(axis=1)
    best = int(np.argmin(powers))
    return float(powers[best]), grid[best]


def proposed_oracle(config: SystemConfig, channel: ChannelRealization) -> float:
    """Sayıları koruyan tüm atamalar × optimum bit yükleme üzerinde minimum güç"""
    counts = determine_counts(config, channel.average_cnr()).total
    gains = channel.power_gains
    best = np.inf
    for owner in itertools.product(range(config.num_users), repeat=config.num_subcarriers):
        if tuple(np.bincount(owner, minlength=config.num_users)) != tuple(counts):
            continue
        total = 0.0
        for k in range(config.num_users):
            if config.rate_targets[k] == 0:
                continue
            held = [n for n, o in enumerate(owner) if o == k]
            power, _ = bitload_oracle(gains[k, held], config.rate_targets[k], channel.noise_power,
                                      config.snr_gap, config.max_bits_per_subcarrier)
            total += power
        best = min(best, total)
    return best


def _bisect(func, low: float, high: float, iterations: int) -> float:
    """Artan func için func = 0 kökü, sabit sayıda yarılama"""
    for _ in range(iterations):
        middle = 0.5 * (low + high)
        if func(middle) > 0:
            high = middle
        else:
            low = middle
    return 0.5 * (low + high)


def proportional_oracle(user_cnrs: Sequence[np.ndarray], ratios: Sequence[float],
                        total_power: float, num_subcarriers: int, iterations: int = 200) -> np.ndarray:
    """İç içe yoğun yarılama ile orantısal güç bütçeleri"""
    ratios = np.asarray(ratios, dtype=float)

    def followers(first: float) -> np.ndarray:
        reference = waterfilled_rate(user_cnrs[0], first, num_subcarriers) / ratios[0]
        budgets = [first]
        for k in range(1, len(user_cnrs)):
            target = ratios[k] * reference
            budgets.append(_bisect(
                lambda p, k=k, target=target: waterfilled_rate(user_cnrs[k], p, num_subcarriers) - target,
                0.0, total_power, iterations,
            ))
        return np.array(budgets)

    if len(user_cnrs) == 1:
        return np.array([float(total_power)])
    first = _bisect(lambda p: followers(p).sum() - total_power, 0.0, total_power, iterations)
    return followers(first)


def _waterfill_check(rng: np.random.Generator, instances: int) -> OracleCheck:
    failures, worst = 0, 0.0
    for _ in range(instances):
        size = int(rng.integers(1, 6))
        cnr = rng.exponential(1.0, size) + 1e-3
        budget = float(rng.uniform(0.01, 5.0))
        solution = waterfill(cnr, budget)
        expected, _ = waterfill_oracle(cnr, budget)
        objective = float(np.sum(np.log2(1.0 + solution.powers * cnr)))
        gap = abs(objective - expected)
        kkt = _kkt_violation(cnr, solution.powers, solution.water_level, budget)
        worst = max(worst, gap)
        if gap > OBJECTIVE_TOLERANCE or kkt > KKT_TOLERANCE:
            failures += 1
    return OracleCheck('waterfill', instances, failures, worst)


def _greedy_check() -> OracleCheck:
    failures, worst, instances = 0, 0.0, 0
    levels = (0.5, 1.0, 2.5)
    for count in range(1, 5):
        grid = levels if count < 4 else levels[1:]
        for gains in itertools.product(grid, repeat=count):
            for max_bits in range(1, 5):
                for target in range(1, min(8, count * max_bits) + 1):
                    loaded = greedy_bitload(gains, target, 1.0, 1.0, max_bits)
                    expected, _ = bitload_oracle(gains, target, 1.0, 1.0, max_bits)
                    error = abs(loaded.total_power - expected) / expected
                    worst = max(worst, error)
                    instances += 1
                    if error > 1e-12:
                        failures += 1
    return OracleCheck('greedy_bitload', instances, failures, worst)


def _waterlevel_check(rng: np.random.Generator, instances: int, step_size: float,
                      max_iters: int) -> OracleCheck:
    failures, worst = 0, 0.0
    for _ in range(instances):
        size = int(rng.integers(1, 17))
        gains = rng.exponential(1.0, size) + 1e-3
        budget = float(rng.uniform(0.5, 200.0))
        try:
            loaded = waterlevel_bitload(gains, budget, 1.0, 1.0, step_size, max_iters)
        except ConvergenceError:
            failures += 1
            continue
        excess = loaded.total_power / budget - 1.0
        worst = max(worst, excess)
        if excess > 1e-12:
            failures += 1
    return OracleCheck('waterlevel_budget', instances, failures, worst)


def _proposed_check(rng: np.random.Generator, instances: int) -> OracleCheck:
    failures, worst, done = 0, 0.0, 0
    while done < instances:
        num_subcarriers = int(rng.integers(2, 5))
        max_bits = int(rng.integers(1, 3))
        targets = tuple(int(t) for t in rng.integers(0, num_subcarriers * max_bits // 2 + 1, 2))
        if sum(-(-t // max_bits) for t in targets) > num_subcarriers:
            continue
        config = SystemConfig(2, num_subcarriers, rate_targets=targets, max_bits_per_subcarrier=max_bits,
                              noise_psd=1.0, bandwidth=float(num_subcarriers))
        channel = channel_to_noise(config, rng.rayleigh(1.0, (2, num_subcarriers)) + 1e-3)
        achieved = proposed_allocate(config, channel).total_power_used
        optimum = proposed_oracle(config, channel)
        done += 1
        if optimum == 0:
            if achieved > 0:
                failures += 1
            continue
        ratio = achieved / optimum
        worst = max(worst, ratio)
        if ratio > PROPOSED_MARGIN:
            failures += 1
    return OracleCheck('proposed_exhaustive', instances, failures, worst)


def _proportional_check(rng: np.random.Generator, instances: int) -> OracleCheck:
    failures, worst = 0, 0.0
    for _ in range(instances):
        num_users = int(rng.integers(2, 5))
        user_cnrs = [rng.exponential(50.0, int(rng.integers(1, 5))) + 0.1 for _ in range(num_users)]
        ratios = rng.integers(1, 5, num_users).astype(float)
        fast = proportional_budgets(user_cnrs, ratios, 1.0, 16)
        slow = proportional_oracle(user_cnrs, ratios, 1.0, 16)
        error = float(np.max(np.abs(fast - slow)))
        worst = max(worst, error)
        if error > 1e-6:
            failures += 1
    return OracleCheck('proportional_budgets', instances, failures, worst)


def run_oracle_checks(seed: int = 1, instances: int = 1000, step_size: float = 1.0,
                      max_iters: int = 500) -> List[OracleCheck]:
    """Tüm kaba kuvvet doğrulamalarını çalıştır"""
    if instances < 1:
        raise InvalidArgumentError(f"instances must be >= 1, got {instances}")
    rng = np.random.default_rng(seed)
    checks = [
        _waterfill_check(rng, instances),
        _greedy_check(),
        _waterlevel_check(rng, instances, step_size, max_iters),
        _proposed_check(rng, max(instances // 10, 1)),
        _proportional_check(rng, max(instances // 50, 1)),
    ]
    for check in checks:
        status = "ok" if check.passed else "FAILED"
        logger.info(f"Oracle {check.name}: {status} ({check.failures}/{check.instances}, worst={check.worst:.3g})")
    return checks
