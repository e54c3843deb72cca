"""
Bit Loading - Su seviyesi uyarlamalı ve açgözlü minimum güç bit yükleme
"""
import heapq
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from core.errors import ConvergenceError, InfeasibleRateError, InvalidArgumentError
from utils.logger import logger

__all__ = [
    'BitLoadResult',
    'bits_for_power',
    'bits_for_level',
    'power_for_bits',
    'waterlevel_bitload',
    'greedy_bitload',
]

FEASIBILITY_TOLERANCE = 1e-12
LEVEL_NUDGE = 1e-9


@dataclass(frozen=True)
class BitLoadResult:
    """Alt kanal başına bit ve güç"""

    bits: np.ndarray
    powers: np.ndarray
    water_level: float = 0.0
    iterations: int = 0

    @property
    def total_bits(self) -> int:
        return int(np.sum(self.bits))

    @property
    def total_power(self) -> float:
        return float(np.sum(self.powers))


def _as_gains(gains: Sequence[float]) -> np.ndarray:
    values = np.asarray(gains, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise InvalidArgumentError("channel power gains must be finite and strictly positive")
    return values


def _check_noise(noise_power: float, snr_gap: float):
    if noise_power <= 0:
        raise InvalidArgumentError(f"noise_power must be positive, got {noise_power}")
    if snr_gap < 1:
        raise InvalidArgumentError(f"snr_gap must be >= 1, got {snr_gap}")


def bits_for_power(power, gain, noise_power: float, snr_gap: float = 1.0):
    """b = log2(1 + s·g/(σ²Γ))"""
    gain = _as_gains(gain)
    _check_noise(noise_power, snr_gap)
    power = np.asarray(power, dtype=float)
    if np.any(power < 0):
        raise InvalidArgumentError("power must be non-negative")
    result = np.log2(1.0 + power * gain / (noise_power * snr_gap))
    return float(result) if result.ndim == 0 else result


def bits_for_level(level, gain, max_bits: Optional[int] = None):
    """round([log2(λ·g)]⁺), yarım yukarı yuvarlama, isteğe bağlı üst sınır"""
    gain = _as_gains(gain)
    level = np.asarray(level, dtype=float)
    if np.any(level < 0):
        raise InvalidArgumentError("water level must be non-negative")
    if max_bits is not None and max_bits < 1:
        raise InvalidArgumentError(f"max_bits must be >= 1, got {max_bits}")

    with np.errstate(divide='ignore'):
        raw = np.log2(level * gain)
    bits = np.floor(np.maximum(raw, 0.0) + 0.5).astype(int)
    if max_bits is not None:
        bits = np.minimum(bits, max_bits)
    return int(bits) if bits.ndim == 0 else bits


def power_for_bits(bits, gain, noise_power: float, snr_gap: float = 1.0):
    """s = (σ²Γ/g)(2^b − 1)"""
    gain = _as_gains(gain)
    _check_noise(noise_power, snr_gap)
    bits = np.asarray(bits)
    if np.any(bits < 0):
        raise InvalidArgumentError("bits must be non-negative")
    result = (noise_power * snr_gap / gain) * (np.exp2(bits) - 1.0)
    return float(result) if result.ndim == 0 else result


def _repair(bits: np.ndarray, unit_cost: np.ndarray, budget: float) -> np.ndarray:
    """Bütçe aşımında en büyük güç tasarrufu sağlayan bitleri sök"""
    bits = bits.copy()
    used = float(np.sum(unit_cost * (np.exp2(bits) - 1.0)))
    while used > budget * (1 + FEASIBILITY_TOLERANCE) and bits.any():
        savings = np.where(bits > 0, unit_cost * np.exp2(bits - 1), -np.inf)
        m = int(np.argmax(savings))
        used -= savings[m]
        bits[m] -= 1
    return bits


def _fill_residual(bits: np.ndarray, unit_cost: np.ndarray, budget: float,
                   max_bits: Optional[int]) -> np.ndarray:
    """Kalan bütçeye sığan bitleri en ucuz artıştan başlayarak ekle"""
    bits = bits.copy()
    used = float(np.sum(unit_cost * (np.exp2(bits) - 1.0)))
    while True:
        increments = unit_cost * np.exp2(bits)
        if max_bits is not None:
            increments = np.where(bits < max_bits, increments, np.inf)
        m = int(np.argmin(increments))
        if not np.isfinite(increments[m]) or used + increments[m] > budget * (1 + FEASIBILITY_TOLERANCE):
            return bits
        used += increments[m]
        bits[m] += 1


def waterlevel_bitload(gains: Sequence[float], budget: float, noise_power: float,
                       snr_gap: float = 1.0, step_size: float = 1.0, max_iters: int = 500,
                       max_bits: Optional[int] = None) -> BitLoadResult:
    """
    Su seviyesi λ'yı güç bütçesine göre iteratif ayarlayarak bit yükle.

    Her adımda bitler λ'dan, güçler bitlerden hesaplanır ve
    λ ← λ + μ·(1/M_on)·(1/(σ²Γ))·(S − Σ s_m) uygulanır. Bit vektörü bir adım
    boyunca değişmez ve bütçe sağlanırsa durulur.
    """
    g = _as_gains(gains)
    _check_noise(noise_power, snr_gap)
    if not budget > 0:
        raise InvalidArgumentError(f"budget must be positive, got {budget}")
    if not step_size > 0:
        raise InvalidArgumentError(f"step_size must be positive, got {step_size}")
    if max_iters < 1:
        raise InvalidArgumentError("max_iters must be >= 1")
    if max_bits is not None and max_bits < 1:
        raise InvalidArgumentError(f"max_bits must be >= 1, got {max_bits}")

    scale = noise_power * snr_gap
    unit_cost = scale / g
    count = g.size
    level = (budget / count + scale / stats.gmean(g)) / scale

    previous = None
    bits = np.zeros(count, dtype=int)
    feasible_seen = False
    converged = False
    iteration = 0
    for iteration in range(1, max_iters + 1):
        bits = bits_for_level(level, g, max_bits)
        used = float(np.sum(unit_cost * (np.exp2(bits) - 1.0)))
        feasible = used <= budget * (1 + FEASIBILITY_TOLERANCE)
        feasible_seen = feasible_seen or feasible
        if feasible and previous is not None and np.array_equal(bits, previous):
            converged = True
            break
        active = int(np.count_nonzero(bits)) or count
        level = max(level + step_size * (budget - used) / (active * scale), 0.0)
        if not feasible:
            # en az bir bitin düşeceği eşiğin altına in
            threshold = float(np.max(np.where(bits > 0, np.exp2(bits - 0.5) / g, 0.0)))
            level = min(level, threshold * (1 - LEVEL_NUDGE))
        previous = bits

    if not converged:
        if not feasible_seen:
            raise ConvergenceError(f"water level did not reach a feasible bit vector in {max_iters} iterations")
        logger.debug(f"Water level iteration stopped at max_iters={max_iters}")

    bits = _repair(bits, unit_cost, budget)
    bits = _fill_residual(bits, unit_cost, budget, max_bits)
    return BitLoadResult(
        bits=bits,
        powers=unit_cost * (np.exp2(bits) - 1.0),
        water_level=float(level),
        iterations=iteration,
    )


def greedy_bitload(gains: Sequence[float], target_bits: int, noise_power: float,
                   snr_gap: float = 1.0, max_bits: int = 8) -> BitLoadResult:
    """
    Hedef bit sayısını minimum toplam güçle yükle.

    Her adımda bir bit ekleme maliyeti (σ²Γ/g_m)·2^{b_m} en düşük olan ve
    üst sınırına ulaşmamış alt taşıyıcıya bir bit eklenir.
    """
    g = _as_gains(gains)
    _check_noise(noise_power, snr_gap)
    if target_bits < 0:
        raise InvalidArgumentError(f"target_bits must be >= 0, got {target_bits}")
    if max_bits < 1:
        raise InvalidArgumentError(f"max_bits must be >= 1, got {max_bits}")
    if target_bits > g.size * max_bits:
        raise InfeasibleRateError(
            f"{target_bits} bits exceed capacity of {g.size} subcarriers x {max_bits} bits"
        )

    unit_cost = noise_power * snr_gap / g
    bits = np.zeros(g.size, dtype=int)
    # (artış maliyeti, indeks): eşitlikte küçük indeks
    heap = [(float(c), m) for m, c in enumerate(unit_cost)]
    heapq.heapify(heap)
    for _ in range(int(target_bits)):
        cost, m = heapq.heappop(heap)
        bits[m] += 1
        if bits[m] < max_bits:
            heapq.heappush(heap, (cost * 2.0, m))

    return BitLoadResult(
        bits=bits,
        powers=unit_cost * (np.exp2(bits) - 1.0),
        water_level=0.0,
        iterations=int(target_bits),
    )
