"""
OFDMA Symbol Parameters - Temel parametrelerden türetilmiş sembol parametreleri
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from core.errors import InvalidArgumentError

__all__ = ['PrimitiveParams', 'DerivedParams', 'SUPPORTED_CP_RATIOS', 'derive_params', 'derived_table']

Rational = Union[int, str, Fraction]

DEFAULT_SAMPLING_FACTOR = Fraction(8, 7)
SUPPORTED_CP_RATIOS = (Fraction(1, 32), Fraction(1, 16), Fraction(1, 8), Fraction(1, 4))
SAMPLING_GRID_HZ = 8000


def _rational(value: Rational, name: str) -> Fraction:
    """int, 'a/b' veya Fraction → Fraction"""
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise InvalidArgumentError(f"{name} must be a rational number, got {value!r}") from e


@dataclass(frozen=True)
class PrimitiveParams:
    """Bant genişliği, kullanılan alt taşıyıcı, örnekleme faktörü n ve CP oranı G"""

    bandwidth: float
    n_used: int
    sampling_factor: Fraction = DEFAULT_SAMPLING_FACTOR
    cp_ratio: Fraction = Fraction(1, 8)

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise InvalidArgumentError(f"bandwidth must be positive, got {self.bandwidth}")
        if int(self.n_used) != self.n_used or self.n_used < 1:
            raise InvalidArgumentError(f"n_used must be a positive integer, got {self.n_used}")
        sampling = _rational(self.sampling_factor, "sampling_factor")
        if sampling <= 0:
            raise InvalidArgumentError(f"sampling_factor must be positive, got {sampling}")
        cp_ratio = _rational(self.cp_ratio, "cp_ratio")
        if cp_ratio not in SUPPORTED_CP_RATIOS:
            supported = ", ".join(str(g) for g in SUPPORTED_CP_RATIOS)
            raise InvalidArgumentError(f"cp_ratio {cp_ratio} not supported (use one of {supported})")
        object.__setattr__(self, "n_used", int(self.n_used))
        object.__setattr__(self, "sampling_factor", sampling)
        object.__setattr__(self, "cp_ratio", cp_ratio)


@dataclass(frozen=True)
class DerivedParams:
    """FFT boyutu, örnekleme frekansı, alt taşıyıcı aralığı ve sembol süreleri"""

    n_fft: int
    sampling_frequency: int
    subcarrier_spacing: float
    useful_time: float
    guard_time: float
    symbol_time: float
    sample_time: float


def derive_params(params: PrimitiveParams) -> DerivedParams:
    """
    Türetilmiş parametreleri hesapla.

    N_FFT, N_used'dan büyük ya da eşit en küçük ikinin kuvvetidir;
    F_s = floor(n·BW/8000)·8000 tam sayı aritmetiğiyle bulunur.
    """
    n_fft = 1 << (params.n_used - 1).bit_length()
    scaled = params.sampling_factor * Fraction(params.bandwidth)
    sampling_frequency = (scaled.numerator // scaled.denominator // SAMPLING_GRID_HZ) * SAMPLING_GRID_HZ
    if sampling_frequency <= 0:
        raise InvalidArgumentError(
            f"bandwidth {params.bandwidth} Hz too small: sampling frequency rounds to 0"
        )

    spacing = Fraction(sampling_frequency, n_fft)
    useful = 1 / spacing
    guard = params.cp_ratio * useful
    return DerivedParams(
        n_fft=n_fft,
        sampling_frequency=sampling_frequency,
        subcarrier_spacing=float(spacing),
        useful_time=float(useful),
        guard_time=float(guard),
        symbol_time=float(useful + guard),
        sample_time=float(useful / n_fft),
    )


def derived_table(params: PrimitiveParams) -> List[Tuple[str, str, str]]:
    """CLI için `ad değer birim` satırları"""
    derived = derive_params(params)
    return [
        ("BW", f"{params.bandwidth:.12g}", "Hz"),
        ("N_used", str(params.n_used), "-"),
        ("n", str(params.sampling_factor), "-"),
        ("G", str(params.cp_ratio), "-"),
        ("N_FFT", str(derived.n_fft), "-"),
        ("F_s", str(derived.sampling_frequency), "Hz"),
        ("delta_f", f"{derived.subcarrier_spacing:.12g}", "Hz"),
        ("T_b", f"{derived.useful_time:.12g}", "s"),
        ("T_g", f"{derived.guard_time:.12g}", "s"),
        ("T_s", f"{derived.symbol_time:.12g}", "s"),
        ("sample_time", f"{derived.sample_time:.12g}", "s"),
    ]
