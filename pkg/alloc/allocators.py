"""
Baseline Allocators - Kök bulma, doğrusal ve birleşik alt taşıyıcı/güç tahsisi
"""
from typing import List, Optional, Sequence

import numpy as np
from scipy import linalg, optimize, stats

from alloc.waterfill import user_rate, waterfill, waterfilled_rate
from core.errors import InvalidArgumentError
from core.types import UNASSIGNED, AllocationResult, Assignment, ChannelRealization, SystemConfig
from utils.logger import logger

__all__ = [
    'assign_best_gain',
    'bestgain_equal_power_allocate',
    'rootfinding_allocate',
    'linear_allocate',
    'joint_allocate',
    'proportional_budgets',
    'subcarrier_quotas',
]

ROOT_TOLERANCE = 1e-10


def _validate(config: SystemConfig, channel: ChannelRealization):
    """Konfigürasyon ve kanal boyutlarını kontrol et"""
    if channel.cnr.shape != (config.num_users, config.num_subcarriers):
        raise InvalidArgumentError(
            f"channel shape {channel.cnr.shape} does not match "
            f"({config.num_users}, {config.num_subcarriers})"
        )
    if config.num_subcarriers < config.num_users:
        raise InvalidArgumentError("num_subcarriers must be >= num_users")


def _best_available(row: np.ndarray, available: np.ndarray) -> int:
    """Boşta kalan en iyi alt taşıyıcı (eşitlikte en küçük indeks)"""
    return int(np.argmax(np.where(available, row, -np.inf)))


def _build_result(config: SystemConfig, channel: ChannelRealization, owner: Sequence[int],
                  budgets: Sequence[float]) -> AllocationResult:
    """Kullanıcı bütçelerini kendi alt taşıyıcılarına su doldurma ile dağıt"""
    num_users, num_subcarriers = config.num_users, config.num_subcarriers
    assignment = Assignment.from_owner(owner, num_users)
    power = np.zeros((num_users, num_subcarriers))
    rates = np.zeros(num_users)
    for k in range(num_users):
        held = assignment.subcarriers_of(k)
        if not held:
            continue
        cnr = channel.cnr[k, held]
        solution = waterfill(cnr / config.snr_gap, max(float(budgets[k]), 0.0))
        power[k, held] = solution.powers
        rates[k] = user_rate(cnr, solution.powers, num_subcarriers, config.snr_gap)
    return AllocationResult(
        assignment=assignment,
        power=power,
        rates=rates,
        bits=np.zeros(num_subcarriers, dtype=int),
        total_power_used=float(power.sum()),
    )


def assign_best_gain(channel: ChannelRealization) -> Assignment:
    """Her alt taşıyıcıyı en yüksek H değerine sahip kullanıcıya ver"""
    owner = np.argmax(channel.cnr, axis=0)
    return Assignment.from_owner(owner.tolist(), channel.num_users)


def bestgain_equal_power_allocate(config: SystemConfig, channel: ChannelRealization) -> AllocationResult:
    """En iyi kazanç ataması + her alt taşıyıcıya P_tot/N"""
    _validate(config, channel)
    assignment = assign_best_gain(channel)
    num_subcarriers = config.num_subcarriers
    share = config.total_power / num_subcarriers
    power = assignment.mask() * share
    rates = np.array([
        user_rate(channel.cnr[k], power[k], num_subcarriers, config.snr_gap)
        for k in range(config.num_users)
    ])
    return AllocationResult(
        assignment=assignment,
        power=power,
        rates=rates,
        bits=np.zeros(num_subcarriers, dtype=int),
        total_power_used=float(power.sum()),
    )


def _proportional_subcarriers(config: SystemConfig, channel: ChannelRealization,
                              quotas: Optional[np.ndarray] = None) -> List[int]:
    """
    Eşit güç varsayımıyla orantısal alt taşıyıcı ataması.

    Önce her kullanıcı en iyi alt taşıyıcısını alır; sonra en düşük R_k/γ_k
    değerine sahip kullanıcı (kotası dolmamışsa) en iyi boş alt taşıyıcıyı seçer.
    """
    num_users, num_subcarriers = config.num_users, config.num_subcarriers
    cnr = channel.cnr
    ratios = np.asarray(config.rate_ratios)
    share = config.total_power / num_subcarriers
    owner = [UNASSIGNED] * num_subcarriers
    available = np.ones(num_subcarriers, dtype=bool)
    rates = np.zeros(num_users)
    held = np.zeros(num_users, dtype=int)

    def take(k: int):
        n = _best_available(cnr[k], available)
        owner[n] = k
        available[n] = False
        held[k] += 1
        rates[k] += np.log2(1.0 + share * cnr[k, n] / config.snr_gap) / num_subcarriers

    for k in range(num_users):
        take(k)

    while available.any():
        eligible = np.ones(num_users, dtype=bool) if quotas is None else held < quotas
        if not eligible.any():
            break
        scores = np.where(eligible, rates / ratios, np.inf)
        take(int(np.argmin(scores)))
    return owner


def _bracketed_root(func, upper: float, xtol: float, method=optimize.brentq) -> float:
    """[0, upper] aralığında kök; üst uçta işaret değişmezse üst uç"""
    high = func(upper)
    if high <= 0:
        return upper
    if func(0.0) >= 0:
        return 0.0
    return float(method(func, 0.0, upper, xtol=xtol))


def proportional_budgets(user_cnrs: Sequence[np.ndarray], ratios: Sequence[float],
                         total_power: float, num_subcarriers: int) -> np.ndarray:
    """
    R_1/γ_1 = R_k/γ_k ve Σ P_k = P_tot sistemini sayısal çöz.

    Dış döngü P_1 üzerinde ikiye bölme; her P_1 için P_k, su doldurma hızı
    (γ_k/γ_1)·R_1 olacak şekilde iç kök aramasıyla bulunur.
    """
    num_users = len(user_cnrs)
    if num_users == 1:
        return np.array([float(total_power)])
    ratios = np.asarray(ratios, dtype=float)
    xtol = ROOT_TOLERANCE * total_power

    def follower_budgets(first: float) -> np.ndarray:
        reference = waterfilled_rate(user_cnrs[0], first, num_subcarriers) / ratios[0]
        budgets = np.empty(num_users)
        budgets[0] = first
        for k in range(1, num_users):
            target = ratios[k] * reference
            if target <= 0:
                budgets[k] = 0.0
                continue
            budgets[k] = _bracketed_root(
                lambda p, k=k, target=target: waterfilled_rate(user_cnrs[k], p, num_subcarriers) - target,
                total_power,
                xtol * 1e-2,
            )
        return budgets

    def excess(first: float) -> float:
        return float(np.sum(follower_budgets(first)) - total_power)

    first = _bracketed_root(excess, total_power, xtol, method=optimize.bisect)
    budgets = follower_budgets(first)
    logger.debug(f"Root search: P_1={first:.6g}, residual={np.sum(budgets) - total_power:.3g}")
    # Tolerans kaynaklı kalıntıyı bütçeye oranla
    return budgets * (total_power / np.sum(budgets))


def rootfinding_allocate(config: SystemConfig, channel: ChannelRealization) -> AllocationResult:
    """Kök bulma yöntemi: orantısal alt taşıyıcı seçimi + doğrusal olmayan güç sistemi"""
    _validate(config, channel)
    owner = _proportional_subcarriers(config, channel)
    assignment = Assignment.from_owner(owner, config.num_users)
    user_cnrs = [channel.cnr[k, assignment.subcarriers_of(k)] / config.snr_gap for k in range(config.num_users)]
    budgets = proportional_budgets(user_cnrs, config.rate_ratios, config.total_power, config.num_subcarriers)
    return _build_result(config, channel, owner, budgets)


def subcarrier_quotas(num_subcarriers: int, ratios: Sequence[float]) -> np.ndarray:
    """Adım 1: N_k = max(1, round(N·γ_k/Σγ)), toplam ≤ N olacak şekilde"""
    ratios = np.asarray(ratios, dtype=float)
    quotas = np.maximum(1, np.floor(num_subcarriers * ratios / ratios.sum() + 0.5)).astype(int)
    while quotas.sum() > num_subcarriers:
        candidates = np.where(quotas > 1, quotas, 0)
        quotas[int(np.argmax(candidates))] -= 1
    return quotas


def _assign_leftovers(cnr: np.ndarray, owner: List[int]) -> List[int]:
    """Adım 4: kalan N* alt taşıyıcı, kullanıcı başına en fazla bir ek ile"""
    num_users = cnr.shape[0]
    got_extra = np.zeros(num_users, dtype=bool)
    for n, current in enumerate(owner):
        if current != UNASSIGNED:
            continue
        if not got_extra.all():
            k = int(np.argmax(np.where(got_extra, -np.inf, cnr[:, n])))
            got_extra[k] = True
        else:
            k = int(np.argmax(cnr[:, n]))
        owner[n] = k
    return owner


def _linear_power_system(user_cnrs: Sequence[np.ndarray], total_power: float) -> np.ndarray:
    """
    Yüksek SNR altında doğrusal orantısal güç sistemi.

    Her kullanıcı geometrik ortalama H ile düz kanal kabul edilir. N_k ∝ γ_k
    olduğunda R_k/γ_k = R_1/γ_1 koşulu P_k = (N_k·H_1)/(N_1·H_k)·P_1 olur.
    Satır 0 Σ P_k = P_tot, satır k P_k − c_k P_1 = 0; tüm çözümler pozitiftir.
    """
    num_users = len(user_cnrs)
    counts = np.array([len(c) for c in user_cnrs], dtype=float)
    effective = np.array([stats.gmean(c) for c in user_cnrs])
    coupling = (counts * effective[0]) / (counts[0] * effective)

    matrix = np.eye(num_users)
    rhs = np.zeros(num_users)
    matrix[0, :] = 1.0
    rhs[0] = total_power
    matrix[1:, 0] = -coupling[1:]

    lu_piv = linalg.lu_factor(matrix)
    budgets = linalg.lu_solve(lu_piv, rhs)
    logger.debug(f"Linear power system: budgets={budgets}")
    return budgets


def linear_allocate(config: SystemConfig, channel: ChannelRealization) -> AllocationResult:
    """Doğrusal yöntem: kotalı alt taşıyıcı ataması + doğrusal güç sistemi"""
    _validate(config, channel)
    quotas = subcarrier_quotas(config.num_subcarriers, config.rate_ratios)
    owner = _proportional_subcarriers(config, channel, quotas)
    owner = _assign_leftovers(channel.cnr, owner)

    assignment = Assignment.from_owner(owner, config.num_users)
    user_cnrs = [channel.cnr[k, assignment.subcarriers_of(k)] / config.snr_gap for k in range(config.num_users)]
    budgets = _linear_power_system(user_cnrs, config.total_power)
    return _build_result(config, channel, owner, budgets)


def joint_allocate(config: SystemConfig, channel: ChannelRealization) -> AllocationResult:
    """
    Birleşik yöntem: her atamada kullanıcının bütçesi P_tot/N artar ve hızı
    tuttuğu alt taşıyıcılar üzerinde su doldurma ile güncellenir.
    """
    _validate(config, channel)
    num_users, num_subcarriers = config.num_users, config.num_subcarriers
    cnr = channel.cnr
    ratios = np.asarray(config.rate_ratios)
    increment = config.total_power / num_subcarriers

    owner = [UNASSIGNED] * num_subcarriers
    available = np.ones(num_subcarriers, dtype=bool)
    held: List[List[int]] = [[] for _ in range(num_users)]
    rates = np.zeros(num_users)

    for _ in range(num_subcarriers):
        k = int(np.argmin(rates / ratios))
        n = _best_available(cnr[k], available)
        owner[n] = k
        available[n] = False
        held[k].append(n)
        rates[k] = waterfilled_rate(cnr[k, held[k]] / config.snr_gap, len(held[k]) * increment, num_subcarriers)

    budgets = [len(h) * increment for h in held]
    return _build_result(config, channel, owner, budgets)
