"""
Experiment Harness - Monte-Carlo kapasite taraması ve orantısallık deneyi
"""
import configparser
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Any, Callable, Dict, List, Mapping, Sequence, Tuple

import numpy as np
from scipy import stats

from alloc.allocators import (bestgain_equal_power_allocate, joint_allocate, linear_allocate,
                              rootfinding_allocate)
from alloc.proposed import proposed_allocate
from alloc.waterfill import user_rate
from core.channel import DEFAULT_NUM_TAPS, generate_channel
from core.errors import InvalidArgumentError
from core.types import AllocationResult, ChannelRealization, SystemConfig
from utils.logger import logger

__all__ = [
    'METHODS',
    'RATIO_PATTERN',
    'ExperimentSpec',
    'CapacityRow',
    'parse_gap',
    'resolve_ratios',
    'split_targets',
    'build_system_config',
    'run_capacity_sweep',
    'run_fairness_experiment',
]

Allocator = Callable[[SystemConfig, ChannelRealization], AllocationResult]

METHODS: Dict[str, Allocator] = {
    'rootfinding': rootfinding_allocate,
    'linear': linear_allocate,
    'joint': joint_allocate,
    'proposed': proposed_allocate,
    'bestgain-equal-power': bestgain_equal_power_allocate,
}

# Orantısallık deneyi için deterministik γ deseni
RATIO_PATTERN = (1.0, 2.0, 4.0)


def parse_gap(text: Any) -> float:
    """Doğrusal Γ ('3.3') ya da desibel ('5dB') → doğrusal Γ"""
    raw = str(text).strip()
    try:
        if raw.lower().endswith('db'):
            gap = 10.0 ** (float(raw[:-2]) / 10.0)
        else:
            gap = float(raw)
    except ValueError as e:
        raise InvalidArgumentError(f"invalid SNR gap {text!r}") from e
    if not gap >= 1:
        raise InvalidArgumentError(f"SNR gap must be >= 1 (0 dB), got {text!r}")
    return gap


def _parse_int_list(text: Any) -> Tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    try:
        return tuple(int(v) for v in str(text).split(',') if v.strip())
    except ValueError as e:
        raise InvalidArgumentError(f"invalid integer list {text!r}") from e


def _parse_bool(text: Any) -> bool:
    if isinstance(text, bool):
        return text
    state = configparser.ConfigParser.BOOLEAN_STATES.get(str(text).strip().lower())
    if state is None:
        raise InvalidArgumentError(f"invalid boolean {text!r}")
    return state


def resolve_ratios(text: str, num_users: int) -> Tuple[float, ...]:
    """
    γ tanımını K değere çöz.

    'equal' → hepsi 1, 'pattern' → (1, 2, 4) tekrarlı, virgüllü liste →
    K uzunluğa kadar tekrarlanır.
    """
    raw = str(text).strip().lower()
    if raw == 'equal':
        base: Sequence[float] = (1.0,)
    elif raw == 'pattern':
        base = RATIO_PATTERN
    else:
        try:
            base = [float(v) for v in raw.split(',') if v.strip()]
        except ValueError as e:
            raise InvalidArgumentError(f"invalid rate ratios {text!r}") from e
        if not base or any(not np.isfinite(v) or v <= 0 for v in base):
            raise InvalidArgumentError(f"rate ratios must be positive numbers, got {text!r}")
    return tuple(float(base[k % len(base)]) for k in range(num_users))


def split_targets(total_bits: int, ratios: Sequence[float]) -> Tuple[int, ...]:
    """Toplam bit hedefini γ'ya orantılı dağıt (en büyük kalan yöntemi)"""
    if total_bits < 0:
        raise InvalidArgumentError(f"target_bits must be >= 0, got {total_bits}")
    weights = np.asarray(ratios, dtype=float)
    shares = total_bits * weights / weights.sum()
    targets = np.floor(shares).astype(int)
    remainder = total_bits - int(targets.sum())
    # Eşit kalanlarda küçük indeks önce
    order = np.argsort(-(shares - targets), kind='stable')
    targets[order[:remainder]] += 1
    return tuple(int(t) for t in targets)


@dataclass(frozen=True)
class ExperimentSpec:
    """Deney tanımı; alan adları deney dosyası anahtarlarıdır"""

    method: str = 'all'
    user_counts: Tuple[int, ...] = (4, 8, 12, 16)
    num_subcarriers: int = 64
    num_realizations: int = 100
    master_seed: int = 1
    avg_snr_db: float = 38.0
    snr_gap: float = 3.3
    rate_ratios: str = 'equal'
    num_taps: int = DEFAULT_NUM_TAPS
    total_power: float = 1.0
    bandwidth: float = 1e6
    max_bits: int = 8
    target_bits: int = 256
    gap_in_capacity: bool = True
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'user_counts', _parse_int_list(self.user_counts))
        object.__setattr__(self, 'snr_gap', parse_gap(self.snr_gap))
        object.__setattr__(self, 'gap_in_capacity', _parse_bool(self.gap_in_capacity))
        for name in ('num_subcarriers', 'num_realizations', 'master_seed', 'num_taps',
                     'max_bits', 'target_bits', 'workers'):
            object.__setattr__(self, name, int(getattr(self, name)))
        for name in ('avg_snr_db', 'total_power', 'bandwidth'):
            object.__setattr__(self, name, float(getattr(self, name)))

        self.method_names()
        if self.num_realizations < 1:
            raise InvalidArgumentError(f"num_realizations must be >= 1, got {self.num_realizations}")
        if not self.user_counts:
            raise InvalidArgumentError("user_counts must not be empty")
        for k in self.user_counts:
            if not 1 <= k <= self.num_subcarriers:
                raise InvalidArgumentError(
                    f"user count {k} must be in [1, num_subcarriers={self.num_subcarriers}]"
                )
        if not 1 <= self.num_taps <= self.num_subcarriers:
            raise InvalidArgumentError(f"num_taps must be in [1, {self.num_subcarriers}], got {self.num_taps}")
        if self.workers < 1:
            raise InvalidArgumentError(f"workers must be >= 1, got {self.workers}")
        if self.total_power <= 0 or self.bandwidth <= 0:
            raise InvalidArgumentError("total_power and bandwidth must be positive")
        if self.target_bits < 0:
            raise InvalidArgumentError(f"target_bits must be >= 0, got {self.target_bits}")
        resolve_ratios(self.rate_ratios, 1)

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "ExperimentSpec":
        """Deney dosyası / CLI sözlüğünden oluştur; bilinmeyen anahtar hata"""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise InvalidArgumentError(f"unknown experiment keys: {', '.join(unknown)}")
        try:
            return cls(**dict(values))
        except (TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"invalid experiment value: {e}") from e

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def method_names(self) -> List[str]:
        """'all', tek yöntem ya da virgüllü liste"""
        raw = str(self.method).strip().lower()
        names = list(METHODS) if raw == 'all' else [m.strip() for m in raw.split(',') if m.strip()]
        unknown = [m for m in names if m not in METHODS]
        if unknown or not names:
            raise InvalidArgumentError(
                f"unknown method {self.method!r}; choose from {', '.join(METHODS)} or 'all'"
            )
        return names

    def noise_psd(self) -> float:
        """N0 = P_tot/(B·10^{SNR/10}), yani σ² = P_tot/(N·10^{SNR/10})"""
        return self.total_power / (self.bandwidth * 10.0 ** (self.avg_snr_db / 10.0))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['user_counts'] = list(self.user_counts)
        return data


@dataclass(frozen=True)
class CapacityRow:
    """(yöntem, K) başına ortalama kapasite ve normalize oranlar"""

    method: str
    num_users: int
    capacity_mean: float
    capacity_se: float
    ratios: Tuple[float, ...]
    target_ratios: Tuple[float, ...]
    deviation: float
    power_mean: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'method': self.method,
            'K': self.num_users,
            'capacity_mean': self.capacity_mean,
            'capacity_se': self.capacity_se,
            'deviation': self.deviation,
            'power_mean': self.power_mean,
            'ratios': list(self.ratios),
            'target_ratios': list(self.target_ratios),
        }


def build_system_config(spec: ExperimentSpec, num_users: int) -> SystemConfig:
    """ExperimentSpec + K → SystemConfig (σ² ortalama SNR'den)"""
    ratios = resolve_ratios(spec.rate_ratios, num_users)
    return SystemConfig(
        num_users=num_users,
        num_subcarriers=spec.num_subcarriers,
        total_power=spec.total_power,
        bandwidth=spec.bandwidth,
        noise_psd=spec.noise_psd(),
        snr_gap=spec.snr_gap,
        rate_ratios=ratios,
        rate_targets=split_targets(spec.target_bits, ratios),
        max_bits_per_subcarrier=spec.max_bits,
    )


def _run_realization(task: Tuple[ExperimentSpec, int, int]) -> Dict[str, Tuple[float, np.ndarray, float]]:
    """
    Tek gerçekleşme: kanal bir kez üretilir, tüm yöntemler aynı kanalı görür.

    Returns:
        yöntem → (toplam kapasite, kullanıcı hızları, kullanılan güç)
    """
    spec, num_users, index = task
    config = build_system_config(spec, num_users)
    channel = generate_channel(config, spec.master_seed + index, spec.num_taps)
    capacity_gap = config.snr_gap if spec.gap_in_capacity else 1.0

    outcome = {}
    for name in spec.method_names():
        result = METHODS[name](config, channel)
        # Kapasite dönen güçlerden yeniden hesaplanır
        rates = np.array([
            user_rate(channel.cnr[k], result.power[k], config.num_subcarriers, capacity_gap)
            for k in range(num_users)
        ])
        outcome[name] = (float(rates.sum()), rates, float(result.power.sum()))
    return outcome


def _realizations(spec: ExperimentSpec, num_users: int) -> List[Dict[str, Tuple[float, np.ndarray, float]]]:
    """Gerçekleşmeleri sıra korunarak seri ya da paralel çalıştır"""
    tasks = [(spec, num_users, index) for index in range(spec.num_realizations)]
    if spec.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as executor:
            return list(executor.map(_run_realization, tasks))
    return [_run_realization(task) for task in tasks]


def _summarize(method: str, num_users: int, target: np.ndarray,
               outcomes: List[Dict[str, Tuple[float, np.ndarray, float]]]) -> CapacityRow:
    capacities = np.array([o[method][0] for o in outcomes])
    normalized = []
    for o in outcomes:
        rates = o[method][1]
        total = rates.sum()
        normalized.append(rates / total if total > 0 else np.full(num_users, 1.0 / num_users))
    ratios = np.mean(normalized, axis=0)
    ratios = ratios / ratios.sum()
    se = float(stats.sem(capacities)) if capacities.size > 1 else 0.0
    return CapacityRow(
        method=method,
        num_users=num_users,
        capacity_mean=float(capacities.mean()),
        capacity_se=se,
        ratios=tuple(float(r) for r in ratios),
        target_ratios=tuple(float(t) for t in target),
        deviation=float(np.max(np.abs(ratios - target))),
        power_mean=float(np.mean([o[method][2] for o in outcomes])),
    )


def run_capacity_sweep(spec: ExperimentSpec) -> List[CapacityRow]:
    """Her K için yöntem başına ortalama toplam kapasite"""
    logger.log_run_event("sweep", f"methods={spec.method_names()} K={list(spec.user_counts)} "
                                  f"realizations={spec.num_realizations} seed={spec.master_seed}")
    rows = []
    for num_users in spec.user_counts:
        target = build_system_config(spec, num_users).target_ratios
        outcomes = _realizations(spec, num_users)
        for method in spec.method_names():
            row = _summarize(method, num_users, target, outcomes)
            logger.log_experiment(row.to_dict())
            rows.append(row)
    return rows


def run_fairness_experiment(spec: ExperimentSpec) -> List[CapacityRow]:
    """Sabit K için yöntem başına normalize kapasite oranları ve hedef sapması"""
    if len(spec.user_counts) != 1:
        raise InvalidArgumentError(
            f"fairness experiment needs a single user count, got {list(spec.user_counts)}"
        )
    return run_capacity_sweep(spec)
