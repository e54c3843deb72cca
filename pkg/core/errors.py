"""
Error Hierarchy - Kaynak tahsisi hata sınıfları
"""


class AllocationError(Exception):
    """Tüm tahsis hatalarının temel sınıfı"""

    exit_code = 1


class InvalidArgumentError(AllocationError, ValueError):
    """Geçersiz parametre"""

    exit_code = 2


class InfeasibleConfigurationError(AllocationError):
    """Sağlanamayan sistem konfigürasyonu"""

    exit_code = 3


class InfeasibleRateError(InfeasibleConfigurationError):
    """Hız hedefi mevcut alt taşıyıcılara sığmıyor"""


class ConvergenceError(AllocationError):
    """İteratif algoritma yakınsamadı"""

    exit_code = 4


class ExportError(AllocationError, OSError):
    """Dışa aktarma hedefi yazılamıyor"""

    exit_code = 2
