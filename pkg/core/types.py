"""
Domain Types - Sistem konfigürasyonu, kanal ve tahsis sonuçları
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np

from core.errors import InvalidArgumentError

UNASSIGNED = -1


def _frozen(array: np.ndarray) -> np.ndarray:
    """Diziyi salt okunur yap"""
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class SystemConfig:
    """K kullanıcı, N alt taşıyıcı ve güç bütçesi"""

    num_users: int
    num_subcarriers: int
    total_power: float = 1.0
    bandwidth: float = 1e6
    noise_psd: float = 1e-8
    snr_gap: float = 1.0
    rate_ratios: Optional[Tuple[float, ...]] = None
    rate_targets: Optional[Tuple[int, ...]] = None
    max_bits_per_subcarrier: int = 8

    def __post_init__(self):
        if self.num_users < 1:
            raise InvalidArgumentError(f"num_users must be >= 1, got {self.num_users}")
        if self.num_subcarriers < self.num_users:
            raise InvalidArgumentError(
                f"num_subcarriers ({self.num_subcarriers}) must be >= num_users ({self.num_users})"
            )
        for name in ("total_power", "bandwidth", "noise_psd"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidArgumentError(f"{name} must be positive, got {value}")
        if self.snr_gap < 1:
            raise InvalidArgumentError(f"snr_gap must be >= 1, got {self.snr_gap}")
        if self.max_bits_per_subcarrier < 1:
            raise InvalidArgumentError("max_bits_per_subcarrier must be >= 1")

        # Varsayılanlar: eşit oranlar, sıfır hız hedefi
        ratios = self.rate_ratios
        if ratios is None:
            ratios = (1.0,) * self.num_users
        ratios = tuple(float(r) for r in ratios)
        if len(ratios) != self.num_users or any(r <= 0 for r in ratios):
            raise InvalidArgumentError(f"rate_ratios must be {self.num_users} positive values")
        object.__setattr__(self, "rate_ratios", ratios)

        targets = self.rate_targets
        if targets is None:
            targets = (0,) * self.num_users
        targets = tuple(int(t) for t in targets)
        if len(targets) != self.num_users or any(t < 0 for t in targets):
            raise InvalidArgumentError(f"rate_targets must be {self.num_users} non-negative integers")
        object.__setattr__(self, "rate_targets", targets)

    @property
    def noise_power(self) -> float:
        """Alt taşıyıcı başına gürültü gücü σ² = N0·B/N"""
        return self.noise_psd * self.bandwidth / self.num_subcarriers

    @property
    def target_ratios(self) -> np.ndarray:
        """Normalize edilmiş orantısal hedefler γ_k/Σγ"""
        ratios = np.asarray(self.rate_ratios, dtype=float)
        return ratios / ratios.sum()


@dataclass(frozen=True)
class ChannelRealization:
    """Kanal kazançları h ve kanal/gürültü oranları H = h²/σ²"""

    gains: np.ndarray
    noise_power: float
    cnr: np.ndarray

    def __post_init__(self):
        _frozen(self.gains)
        _frozen(self.cnr)

    @property
    def num_users(self) -> int:
        return self.cnr.shape[0]

    @property
    def num_subcarriers(self) -> int:
        return self.cnr.shape[1]

    @property
    def power_gains(self) -> np.ndarray:
        """g = h²"""
        return self.gains ** 2

    def average_cnr(self) -> np.ndarray:
        """Kullanıcı başına ortalama H"""
        return self.cnr.mean(axis=1)


@dataclass(frozen=True)
class Assignment:
    """Alt taşıyıcı → kullanıcı eşlemesi (ρ_{k,n})"""

    owner: Tuple[int, ...]
    num_users: int

    def __post_init__(self):
        owner = tuple(int(o) for o in self.owner)
        for o in owner:
            if o != UNASSIGNED and not 0 <= o < self.num_users:
                raise InvalidArgumentError(f"owner index {o} out of range for {self.num_users} users")
        object.__setattr__(self, "owner", owner)

    @classmethod
    def from_owner(cls, owner: Iterable[int], num_users: int) -> "Assignment":
        return cls(tuple(owner), num_users)

    @property
    def num_subcarriers(self) -> int:
        return len(self.owner)

    def is_complete(self) -> bool:
        return UNASSIGNED not in self.owner

    def subcarriers_of(self, user: int) -> List[int]:
        return [n for n, o in enumerate(self.owner) if o == user]

    def counts(self) -> np.ndarray:
        """Kullanıcı başına alt taşıyıcı sayısı"""
        owned = [o for o in self.owner if o != UNASSIGNED]
        return np.bincount(np.asarray(owned, dtype=int), minlength=self.num_users)

    def mask(self) -> np.ndarray:
        """K×N boolean ρ matrisi"""
        rho = np.zeros((self.num_users, self.num_subcarriers), dtype=bool)
        for n, o in enumerate(self.owner):
            if o != UNASSIGNED:
                rho[o, n] = True
        return rho

    def swapped(self, first: int, second: int) -> "Assignment":
        """İki alt taşıyıcının sahiplerini değiştirilmiş kopya"""
        owner = list(self.owner)
        owner[first], owner[second] = owner[second], owner[first]
        return Assignment(tuple(owner), self.num_users)


@dataclass(frozen=True)
class AllocationResult:
    """Atama, güçler, kullanıcı hızları ve bit yükleri"""

    assignment: Assignment
    power: np.ndarray
    rates: np.ndarray
    bits: np.ndarray
    total_power_used: float = field(default=0.0)

    def __post_init__(self):
        power = self.power
        if power.shape != (self.assignment.num_users, self.assignment.num_subcarriers):
            raise InvalidArgumentError(f"power matrix shape {power.shape} does not match assignment")
        if np.any(power < 0):
            raise InvalidArgumentError("negative power in allocation")
        if np.any((power > 0) & ~self.assignment.mask()):
            raise InvalidArgumentError("power allocated on a subcarrier the user does not own")
        _frozen(self.power)
        _frozen(self.rates)
        _frozen(self.bits)

    def user_bits(self) -> np.ndarray:
        """Kullanıcı başına OFDM sembolü başına yüklenen bit"""
        totals = np.zeros(self.assignment.num_users, dtype=int)
        for n, o in enumerate(self.assignment.owner):
            if o != UNASSIGNED:
                totals[o] += int(self.bits[n])
        return totals
