"""
Export System - Deney sonuçlarının CSV ve JSON olarak dışa/içe aktarımı
"""
import csv
import json
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence, TextIO, Union

import numpy as np

from core.errors import ExportError
from sim.experiment import RATIO_PATTERN, CapacityRow, ExperimentSpec, build_system_config
from utils.logger import logger

__all__ = ['CSV_COLUMNS', 'format_number', 'write_csv', 'read_csv', 'write_metadata']

CSV_COLUMNS = ['method', 'K', 'capacity_mean', 'capacity_se', 'deviation']
SIGNIFICANT_DIGITS = 9
EXPORT_VERSION = '1.0'


def format_number(value: float) -> str:
    """9 anlamlı basamaklı sabit noktalı gösterim"""
    return np.format_float_positional(
        float(value), precision=SIGNIFICANT_DIGITS, unique=False, fractional=False, trim='-'
    )


def _header(rows: Sequence[CapacityRow]) -> List[str]:
    width = max(len(row.ratios) for row in rows)
    return CSV_COLUMNS + [f'ratio_{k}' for k in range(width)]


def _write_rows(rows: Sequence[CapacityRow], stream: TextIO):
    header = _header(rows)
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    width = len(header) - len(CSV_COLUMNS)
    for row in rows:
        ratios = [format_number(r) for r in row.ratios]
        writer.writerow([
            row.method,
            row.num_users,
            format_number(row.capacity_mean),
            format_number(row.capacity_se),
            format_number(row.deviation),
        ] + ratios + [''] * (width - len(ratios)))


def write_csv(rows: Sequence[CapacityRow], destination: Union[str, TextIO]):
    """
    Satırları CSV olarak yaz.

    Args:
        rows: Boş olmayan CapacityRow listesi
        destination: Dosya yolu ya da açık metin akışı
    """
    if not rows:
        raise ExportError("no rows to export")
    if hasattr(destination, 'write'):
        _write_rows(rows, destination)
        return
    if not destination:
        raise ExportError("empty CSV destination path")
    try:
        with open(destination, 'w', newline='', encoding='utf-8') as f:
            _write_rows(rows, f)
    except OSError as e:
        raise ExportError(f"cannot write CSV to {destination}: {e}") from e
    logger.info(f"CSV exported: {destination} ({len(rows)} rows)")


def read_csv(source: Union[str, TextIO]) -> List[Dict[str, Any]]:
    """write_csv çıktısını geri oku"""
    try:
        if hasattr(source, 'read'):
            records = list(csv.DictReader(source))
        else:
            with open(source, 'r', newline='', encoding='utf-8') as f:
                records = list(csv.DictReader(f))
    except OSError as e:
        raise ExportError(f"cannot read CSV from {source}: {e}") from e

    parsed = []
    for record in records:
        ratio_keys = sorted((k for k in record if k.startswith('ratio_')), key=lambda k: int(k[6:]))
        parsed.append({
            'method': record['method'],
            'K': int(record['K']),
            'capacity_mean': float(record['capacity_mean']),
            'capacity_se': float(record['capacity_se']),
            'deviation': float(record['deviation']),
            'ratios': [float(record[k]) for k in ratio_keys if record[k] not in ('', None)],
        })
    return parsed


def write_metadata(path: str, spec: ExperimentSpec, rows: Sequence[CapacityRow],
                   export_config: Optional[Dict[str, Any]] = None):
    """Deney tanımı, hedef oranlar ve ortalama güçleri JSON yan dosyasına yaz"""
    export_config = export_config or {}
    export_info = {'format': 'json', 'version': EXPORT_VERSION}
    if export_config.get('include_timestamps', False):
        export_info['timestamp'] = datetime.now().isoformat()

    users = {}
    for num_users in spec.user_counts:
        system = build_system_config(spec, num_users)
        users[str(num_users)] = {
            'rate_ratios': list(system.rate_ratios),
            'rate_targets': list(system.rate_targets),
            'noise_power': system.noise_power,
        }

    export_data = {
        'export_info': export_info,
        'experiment': spec.to_dict(),
        'ratio_pattern': list(RATIO_PATTERN),
        'users': users,
        'rows': [row.to_dict() for row in rows],
    }
    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(export_data, f, indent=2, ensure_ascii=False)
    except OSError as e:
        raise ExportError(f"cannot write metadata to {path}: {e}") from e
    logger.info(f"Metadata exported: {path}")
