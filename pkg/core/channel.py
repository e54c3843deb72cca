"""
Channel Generator - Çok kullanıcılı frekans seçici Rayleigh sönümleme kanalı
"""
import numpy as np

from core.errors import InvalidArgumentError
from core.types import ChannelRealization, SystemConfig

DEFAULT_NUM_TAPS = 6
SEED_MASK = (1 << 64) - 1


def power_delay_profile(num_taps: int) -> np.ndarray:
    """Üstel azalan, birim toplam güçlü gecikme profili (tap ℓ ∝ e^{-ℓ})"""
    profile = np.exp(-np.arange(num_taps, dtype=float))
    return profile / profile.sum()


def user_rng(seed: int, user: int) -> np.random.Generator:
    """Kullanıcıya özel, değerlendirme sırasından bağımsız RNG akışı"""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed) & SEED_MASK, spawn_key=(user,)))


def generate_channel(config: SystemConfig, seed: int, num_taps: int = DEFAULT_NUM_TAPS) -> ChannelRealization:
    """
    L-tap kompleks Gauss dürtü yanıtının N frekans kutusundaki genlikleri.

    Args:
        config: Sistem konfigürasyonu (K, N, σ²)
        seed: 64-bit ana tohum
        num_taps: Dürtü yanıtı uzunluğu L (1 ≤ L ≤ N)
    """
    num_users = config.num_users
    num_subcarriers = config.num_subcarriers
    if num_taps < 1 or num_taps > num_subcarriers:
        raise InvalidArgumentError(f"num_taps must be in [1, {num_subcarriers}], got {num_taps}")

    profile = power_delay_profile(num_taps)
    gains = np.empty((num_users, num_subcarriers), dtype=float)
    for k in range(num_users):
        rng = user_rng(seed, k)
        taps = np.sqrt(profile / 2.0) * (rng.standard_normal(num_taps) + 1j * rng.standard_normal(num_taps))
        gains[k] = np.abs(np.fft.fft(taps, n=num_subcarriers))

    # Sıfır genlik olasılığı sıfır; yine de H > 0 koşulunu koru
    gains = np.maximum(gains, np.finfo(float).tiny)
    return channel_to_noise(config, gains)


def channel_to_noise(config: SystemConfig, gains) -> ChannelRealization:
    """Kazançlardan σ² ve H = h²/σ² hesapla"""
    h = np.array(gains, dtype=float)
    expected = (config.num_users, config.num_subcarriers)
    if h.shape != expected:
        raise InvalidArgumentError(f"gain matrix shape {h.shape} does not match {expected}")
    if not np.all(np.isfinite(h)) or np.any(h <= 0):
        raise InvalidArgumentError("channel gains must be finite and strictly positive")

    noise_power = config.noise_power
    return ChannelRealization(gains=h, noise_power=noise_power, cnr=h ** 2 / noise_power)
