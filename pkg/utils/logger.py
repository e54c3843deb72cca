"""
Logging System - Simülasyon ve hata kayıt sistemi
"""
import logging
import os
from datetime import datetime
from typing import Optional

LOGGER_NAME = 'ofdma_alloc'


class SimulationLogger:
    """Tahsis motoru ve deney düzeneği için logger"""

    def __init__(self):
        self.log_dir: Optional[str] = None
        self.formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        self.main_logger = logging.getLogger(LOGGER_NAME)
        self.error_logger = logging.getLogger(f'{LOGGER_NAME}.errors')
        self.error_logger.propagate = False
        self.experiment_logger = logging.getLogger(f'{LOGGER_NAME}.experiments')
        for target in (self.main_logger, self.error_logger, self.experiment_logger):
            target.addHandler(logging.NullHandler())

    def configure(self, level: str = "INFO", log_dir: Optional[str] = None,
                  console_output: bool = True):
        """Handler'ları ayarla; log_dir verilirse günlük dosyalar aç"""
        self.main_logger.setLevel(getattr(logging, str(level).upper(), logging.INFO))

        if console_output and not self._has_handler(self.main_logger, logging.StreamHandler):
            # stderr: stdout CSV çıktısına ayrılmış
            console_handler = logging.StreamHandler()
            console_handler.setLevel(logging.WARNING)
            console_handler.setFormatter(self.formatter)
            self.main_logger.addHandler(console_handler)

        if log_dir:
            self.log_dir = log_dir
            self._ensure_log_dir()
            stamp = datetime.now().strftime('%Y%m%d')
            self._attach_file(self.main_logger, f"ofdma_{stamp}.log")
            self._attach_file(self.error_logger, f"errors_{stamp}.log")
            self._attach_file(self.experiment_logger, f"experiments_{stamp}.log")

    def _ensure_log_dir(self):
        """Log klasörünü oluştur"""
        if not os.path.exists(self.log_dir):
            os.makedirs(self.log_dir)

    @staticmethod
    def _has_handler(target: logging.Logger, handler_type: type) -> bool:
        return any(type(h) is handler_type for h in target.handlers)

    def _attach_file(self, target: logging.Logger, filename: str):
        path = os.path.join(self.log_dir, filename)
        for handler in target.handlers:
            if isinstance(handler, logging.FileHandler) and handler.baseFilename == os.path.abspath(path):
                return
        file_handler = logging.FileHandler(path, encoding='utf-8')
        file_handler.setFormatter(self.formatter)
        target.addHandler(file_handler)

    def debug(self, message: str):
        self.main_logger.debug(message)

    def info(self, message: str):
        """Bilgi mesajı logla"""
        self.main_logger.info(message)

    def warning(self, message: str):
        """Uyarı mesajı logla"""
        self.main_logger.warning(message)

    def error(self, message: str, exception: Optional[Exception] = None):
        """Hata mesajı logla"""
        if exception:
            self.error_logger.error(f"{message}: {str(exception)}", exc_info=exception)
        else:
            self.error_logger.error(message)
        self.main_logger.error(message)

    def log_experiment(self, row: dict):
        """Deney satırını logla"""
        self.experiment_logger.info(f"Experiment row: {row}")

    def log_run_event(self, event: str, details: str = ""):
        """Çalıştırma olayını logla"""
        self.main_logger.info(f"Run event: {event} - {details}")

    def get_log_files(self) -> list:
        """Log dosyalarını listele"""
        if not self.log_dir or not os.path.exists(self.log_dir):
            return []
        return sorted(f for f in os.listdir(self.log_dir) if f.endswith('.log'))


# Global logger instance
logger = SimulationLogger()
