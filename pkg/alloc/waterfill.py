"""
Water-filling - Tek kullanıcılı su doldurma güç tahsisi ve hız hesabı
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.errors import InvalidArgumentError

__all__ = ['WaterfillSolution', 'waterfill', 'waterfilled_rate', 'user_rate']


@dataclass(frozen=True)
class WaterfillSolution:
    """Optimum güçler ve su seviyesi μ"""

    powers: np.ndarray
    water_level: float
    active_count: int

    @property
    def total_power(self) -> float:
        return float(np.sum(self.powers))


def _as_cnr(cnr: Sequence[float]) -> np.ndarray:
    values = np.asarray(cnr, dtype=float)
    if values.ndim != 1:
        raise InvalidArgumentError("cnr must be a one-dimensional sequence")
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise InvalidArgumentError("cnr values must be finite and strictly positive")
    return values


def waterfill(cnr: Sequence[float], budget: float) -> WaterfillSolution:
    """
    Σ log2(1 + p_n H_n) değerini Σ p_n = budget altında maksimize et.

    Zayıf alt taşıyıcılar 1/H sırasıyla devre dışı bırakılır; her aktif küme
    için seviye kapalı formdan hesaplanır.
    """
    values = _as_cnr(cnr)
    if not np.isfinite(budget) or budget < 0:
        raise InvalidArgumentError(f"budget must be >= 0, got {budget}")

    floors = 1.0 / values
    powers = np.zeros(values.size)
    if values.size == 0:
        if budget > 0:
            raise InvalidArgumentError("positive budget with no subcarriers")
        return WaterfillSolution(powers, 0.0, 0)
    if budget == 0:
        return WaterfillSolution(powers, float(floors.min()), 0)

    order = np.argsort(floors, kind='stable')
    sorted_floors = floors[order]
    levels = (budget + np.cumsum(sorted_floors)) / np.arange(1, values.size + 1)

    # Geçerli aktif kümeler bir önek oluşturur; ilk geçersizde dur
    invalid = np.nonzero(levels <= sorted_floors)[0]
    active = int(invalid[0]) if invalid.size else values.size
    active = max(active, 1)
    level = float(levels[active - 1])

    powers[order[:active]] = level - sorted_floors[:active]
    return WaterfillSolution(powers, level, active)


def user_rate(cnr: Sequence[float], powers: Sequence[float], num_subcarriers: int,
              snr_gap: float = 1.0) -> float:
    """Kullanıcı kapasitesi Σ (1/N)·log2(1 + p H / Γ), bit/s/Hz"""
    values = np.asarray(cnr, dtype=float)
    p = np.asarray(powers, dtype=float)
    if values.shape != p.shape:
        raise InvalidArgumentError(f"length mismatch: {values.shape} vs {p.shape}")
    if snr_gap < 1:
        raise InvalidArgumentError(f"snr_gap must be >= 1, got {snr_gap}")
    if num_subcarriers < 1:
        raise InvalidArgumentError("num_subcarriers must be positive")
    return float(np.sum(np.log2(1.0 + p * values / snr_gap)) / num_subcarriers)


def waterfilled_rate(cnr: Sequence[float], budget: float, num_subcarriers: int) -> float:
    """Bütçe su doldurma ile dağıtıldığında ulaşılan hız"""
    solution = waterfill(cnr, budget)
    return user_rate(cnr, solution.powers, num_subcarriers)
