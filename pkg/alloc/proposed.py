"""
Proposed Allocation - Alt taşıyıcı sayısı belirleme, yapıcı atama, takas ile
iyileştirme ve açgözlü bit yükleme (güç minimizasyonu, hız hedefleri altında)
"""
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from alloc.bitloading import greedy_bitload
from alloc.waterfill import user_rate
from core.errors import InfeasibleConfigurationError, InvalidArgumentError
from core.types import UNASSIGNED, AllocationResult, Assignment, ChannelRealization, SystemConfig
from utils.logger import logger

__all__ = [
    'SubcarrierCounts',
    'determine_counts',
    'initial_allocation',
    'improve_allocation',
    'initial_only_allocate',
    'power_reduction',
    'proposed_allocate',
]

REDUCTION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SubcarrierCounts:
    """Minimum gerekli ve ek alt taşıyıcı sayıları"""

    minimum: Tuple[int, ...]
    extra: Tuple[int, ...]

    @property
    def total(self) -> Tuple[int, ...]:
        return tuple(m + e for m, e in zip(self.minimum, self.extra))


def _flat_power(bits: int, count: int, unit_cost: float) -> float:
    """Düz kanal tahmini: bitler count alt taşıyıcıya eşit yayılır"""
    if bits == 0:
        return 0.0
    if count == 0:
        return np.inf
    return unit_cost * count * (2.0 ** (bits / count) - 1.0)


def determine_counts(config: SystemConfig, avg_gain: Sequence[float]) -> SubcarrierCounts:
    """
    Kullanıcı başına alt taşıyıcı sayısını belirle.

    Minimum sayı ceil(R_k/b_max); ek alt taşıyıcılar tek tek, tahmini güç
    tasarrufu en büyük olan kullanıcıya verilir (eşitlikte az alt taşıyıcılı,
    sonra küçük indeksli kullanıcı).
    """
    targets = config.rate_targets
    max_bits = config.max_bits_per_subcarrier
    avg_gain = np.asarray(avg_gain, dtype=float)
    if avg_gain.shape != (config.num_users,) or np.any(avg_gain <= 0):
        raise InvalidArgumentError("avg_gain must hold one positive value per user")

    minimum = [-(-r // max_bits) for r in targets]
    slack = config.num_subcarriers - sum(minimum)
    if slack < 0:
        raise InfeasibleConfigurationError(
            f"rate targets need {sum(minimum)} subcarriers, only {config.num_subcarriers} available"
        )

    unit_cost = config.snr_gap / avg_gain
    current = list(minimum)
    extra = [0] * config.num_users
    for _ in range(slack):
        def key(k: int):
            saving = (_flat_power(targets[k], current[k], unit_cost[k])
                      - _flat_power(targets[k], current[k] + 1, unit_cost[k]))
            return (-saving, current[k], k)

        k = min(range(config.num_users), key=key)
        current[k] += 1
        extra[k] += 1
    return SubcarrierCounts(tuple(minimum), tuple(extra))


def initial_allocation(channel: ChannelRealization, counts: SubcarrierCounts) -> Assignment:
    """
    Yapıcı başlangıç ataması.

    Her kullanıcının alt taşıyıcıları kazanca göre azalan sırada listelenir;
    kullanıcılar sırayla dolaşılır, kotası dolan kullanıcı atlanır, başkasına
    atanmış alt taşıyıcı geçilir.
    """
    num_users, num_subcarriers = channel.num_users, channel.num_subcarriers
    totals = counts.total
    if len(totals) != num_users or sum(totals) != num_subcarriers:
        raise InvalidArgumentError(f"counts {totals} do not cover {num_subcarriers} subcarriers")

    preference = [np.argsort(-channel.cnr[k], kind='stable') for k in range(num_users)]
    cursor = [0] * num_users
    held = [0] * num_users
    owner = [UNASSIGNED] * num_subcarriers

    while any(held[k] < totals[k] for k in range(num_users)):
        for k in range(num_users):
            if held[k] >= totals[k]:
                continue
            while owner[preference[k][cursor[k]]] != UNASSIGNED:
                cursor[k] += 1
            n = int(preference[k][cursor[k]])
            owner[n] = k
            held[k] += 1
            cursor[k] += 1
    return Assignment.from_owner(owner, num_users)


class _UserPowerCache:
    """Kullanıcı + alt taşıyıcı kümesi → açgözlü yükleme gücü"""

    def __init__(self, channel: ChannelRealization, config: SystemConfig):
        self.gains = channel.power_gains
        self.noise_power = channel.noise_power
        self.config = config
        self._cache: Dict[Tuple[int, FrozenSet[int]], float] = {}

    def power(self, user: int, subcarriers: FrozenSet[int]) -> float:
        key = (user, subcarriers)
        cached = self._cache.get(key)
        if cached is None:
            target = self.config.rate_targets[user]
            if target == 0:
                cached = 0.0
            else:
                load = greedy_bitload(
                    self.gains[user, sorted(subcarriers)],
                    target,
                    self.noise_power,
                    self.config.snr_gap,
                    self.config.max_bits_per_subcarrier,
                )
                cached = load.total_power
            self._cache[key] = cached
        return cached


def power_reduction(cache: _UserPowerCache, holdings: List[FrozenSet[int]],
                    first_user: int, second_user: int, first: int, second: int) -> float:
    """first ↔ second takasının iki kullanıcının toplam gücünde sağladığı azalma"""
    before = cache.power(first_user, holdings[first_user]) + cache.power(second_user, holdings[second_user])
    after_first = (holdings[first_user] - {first}) | {second}
    after_second = (holdings[second_user] - {second}) | {first}
    return before - cache.power(first_user, after_first) - cache.power(second_user, after_second)


def improve_allocation(assignment: Assignment, channel: ChannelRealization,
                       config: SystemConfig) -> Tuple[Assignment, int]:
    """
    İteratif takas iyileştirmesi.

    Her iterasyonda tüm kullanıcı ve alt taşıyıcı çiftleri için güç azalması
    hesaplanır; en büyük pozitif azalma uygulanır, yoksa durulur.
    """
    if not assignment.is_complete():
        raise InvalidArgumentError("improve_allocation needs a complete assignment")
    num_users = assignment.num_users
    cache = _UserPowerCache(channel, config)
    holdings = [frozenset(assignment.subcarriers_of(k)) for k in range(num_users)]
    total = sum(cache.power(k, holdings[k]) for k in range(num_users))
    swaps = 0

    while True:
        best_gain = REDUCTION_TOLERANCE * max(total, 1.0)
        best_move = None
        for j in range(num_users):
            for k in range(j + 1, num_users):
                for n in sorted(holdings[j]):
                    for m in sorted(holdings[k]):
                        gain = power_reduction(cache, holdings, j, k, n, m)
                        if gain > best_gain:
                            best_gain, best_move = gain, (j, k, n, m)
        if best_move is None:
            break

        j, k, n, m = best_move
        holdings[j] = (holdings[j] - {n}) | {m}
        holdings[k] = (holdings[k] - {m}) | {n}
        assignment = assignment.swapped(n, m)
        total -= best_gain
        swaps += 1
        logger.debug(f"Swap {swaps}: user {j} n={n} <-> user {k} m={m}, reduction={best_gain:.6g}")

    return assignment, swaps


def _load_bits(config: SystemConfig, channel: ChannelRealization,
               assignment: Assignment) -> AllocationResult:
    """Atama üzerinde kullanıcı başına açgözlü bit yükleme"""
    num_users, num_subcarriers = config.num_users, config.num_subcarriers
    gains = channel.power_gains
    power = np.zeros((num_users, num_subcarriers))
    bits = np.zeros(num_subcarriers, dtype=int)
    rates = np.zeros(num_users)
    for k in range(num_users):
        held = assignment.subcarriers_of(k)
        target = config.rate_targets[k]
        if target == 0:
            continue
        if not held:
            raise InfeasibleConfigurationError(f"user {k} has a rate target but no subcarriers")
        load = greedy_bitload(gains[k, held], target, channel.noise_power, config.snr_gap,
                              config.max_bits_per_subcarrier)
        power[k, held] = load.powers
        bits[held] = load.bits
        rates[k] = user_rate(channel.cnr[k, held], load.powers, num_subcarriers, config.snr_gap)
    return AllocationResult(
        assignment=assignment,
        power=power,
        rates=rates,
        bits=bits,
        total_power_used=float(power.sum()),
    )


def initial_only_allocate(config: SystemConfig, channel: ChannelRealization) -> AllocationResult:
    """Takas iyileştirmesi olmadan (yalnız yapıcı atama) bit yükleme"""
    counts = determine_counts(config, channel.average_cnr())
    return _load_bits(config, channel, initial_allocation(channel, counts))


def proposed_allocate(config: SystemConfig, channel: ChannelRealization) -> AllocationResult:
    """Sayı belirleme → başlangıç ataması → takas iyileştirmesi → bit yükleme"""
    if channel.cnr.shape != (config.num_users, config.num_subcarriers):
        raise InvalidArgumentError("channel shape does not match config")
    counts = determine_counts(config, channel.average_cnr())
    assignment = initial_allocation(channel, counts)
    assignment, swaps = improve_allocation(assignment, channel, config)
    logger.debug(f"Proposed allocation: counts={counts.total}, swaps={swaps}")
    return _load_bits(config, channel, assignment)
