"""
Configuration Management System
"""
import configparser
import copy
import json
import os
from typing import Any, Dict

from core.errors import InvalidArgumentError
from utils.logger import logger

EXPERIMENT_SECTION = "experiment"


class ConfigManager:
    """Konfigürasyon yöneticisi"""

    def __init__(self, config_file: str = "config.json"):
        self.config_file = config_file
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Konfigürasyon dosyasını yükle"""
        defaults = self._get_default_config()
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    loaded = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning(f"Config load error: {e}")
                return defaults
            return self._merge(defaults, loaded)
        return defaults

    @classmethod
    def _merge(cls, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Eksik anahtarları varsayılanlardan tamamla"""
        merged = copy.deepcopy(base)
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = cls._merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    def _get_default_config(self) -> Dict[str, Any]:
        """Varsayılan konfigürasyon"""
        return {
            "app": {
                "title": "OFDMA Resource Allocation Simulator",
                "version": "1.0"
            },
            "simulation": {
                "num_subcarriers": 64,
                "num_realizations": 100,
                "master_seed": 1,
                "avg_snr_db": 38.0,
                "snr_gap": 3.3,
                "num_taps": 6,
                "total_power": 1.0,
                "bandwidth": 1e6,
                "max_bits": 8,
                "target_bits": 256,
                "gap_in_capacity": True,
                "workers": 1,
                "user_counts": [4, 8, 12, 16],
                "fairness_users": 16
            },
            "bitloading": {
                "step_size": 1.0,
                "max_iters": 500
            },
            "logging": {
                "enabled": True,
                "log_level": "INFO",
                "log_directory": "",
                "console_output": True
            },
            "export": {
                "include_metadata": True,
                "include_timestamps": False
            }
        }

    def get(self, key: str, default: Any = None) -> Any:
        """Konfigürasyon değeri al"""
        keys = key.split('.')
        value = self.config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any):
        """Konfigürasyon değeri ayarla"""
        keys = key.split('.')
        config = self.config

        # Son anahtara kadar git
        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value

    def save(self) -> bool:
        """Konfigürasyonu kaydet"""
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=2, ensure_ascii=False)
            return True
        except OSError as e:
            logger.error("Config save error", e)
            return False

    def get_simulation_defaults(self) -> Dict[str, Any]:
        """Deney varsayılanlarını al"""
        return dict(self.get('simulation', {}))

    def get_bitloading_config(self) -> Dict[str, Any]:
        """Su seviyesi bit yükleme ayarlarını al"""
        return dict(self.get('bitloading', {}))

    def is_logging_enabled(self) -> bool:
        """Loglama aktif mi?"""
        return self.get('logging.enabled', True)

    def get_log_level(self) -> str:
        """Log seviyesini al"""
        return self.get('logging.log_level', 'INFO')

    def get_log_directory(self) -> str:
        return self.get('logging.log_directory', '')

    def is_console_output(self) -> bool:
        return self.get('logging.console_output', True)

    def get_export_config(self) -> dict:
        """Dışa aktarma konfigürasyonunu al"""
        return self.get('export', {})


def read_experiment_file(path: str, allowed_keys) -> Dict[str, str]:
    """
    Satır tabanlı `anahtar = değer` deney dosyasını oku.

    Args:
        path: Deney dosyası yolu
        allowed_keys: Geçerli anahtar adları (ExperimentSpec alanları)

    Returns:
        Ham metin değerleri
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=('#', ';'), interpolation=None)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            parser.read_string(f"[{EXPERIMENT_SECTION}]\n" + f.read(), source=path)
    except OSError as e:
        raise InvalidArgumentError(f"cannot read experiment file {path}: {e}") from e
    except configparser.Error as e:
        raise InvalidArgumentError(f"malformed experiment file {path}: {e}") from e

    values = dict(parser.items(EXPERIMENT_SECTION))
    unknown = sorted(set(values) - set(allowed_keys))
    if unknown:
        raise InvalidArgumentError(f"unknown experiment keys: {', '.join(unknown)}")
    return values


# Global config instance
config = ConfigManager()
