"""
Ortak test fikstürleri
"""
import numpy as np
import pytest

from core.channel import channel_to_noise, generate_channel
from core.types import SystemConfig


def make_channel(cnr, noise_power: float = 1.0):
    """Verilen H matrisinden kanal oluştur (σ² = noise_power)"""
    cnr = np.asarray(cnr, dtype=float)
    num_users, num_subcarriers = cnr.shape
    config = SystemConfig(num_users, num_subcarriers, noise_psd=noise_power, bandwidth=float(num_subcarriers))
    return channel_to_noise(config, np.sqrt(cnr * noise_power))


@pytest.fixture
def channel_from_cnr():
    return make_channel


@pytest.fixture
def small_config():
    return SystemConfig(num_users=4, num_subcarriers=16, noise_psd=1e-7)


@pytest.fixture
def random_channel(small_config):
    return generate_channel(small_config, seed=7)
