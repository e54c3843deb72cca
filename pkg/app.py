"""
OFDMA Resource Allocation Simulator - Komut satırı girişi
"""
import argparse
import os
import sys
from typing import Any, Dict, List, Optional

from core.errors import AllocationError
from phy.params import PrimitiveParams, derived_table
from sim.experiment import METHODS, ExperimentSpec, run_capacity_sweep, run_fairness_experiment
from sim.export import write_csv, write_metadata
from sim.oracle import run_oracle_checks
from utils.config import ConfigManager, config, read_experiment_file
from utils.logger import logger

# CLI bayrağı → ExperimentSpec alanı
FLAG_FIELDS = {
    'method': 'method',
    'users': 'user_counts',
    'subcarriers': 'num_subcarriers',
    'realizations': 'num_realizations',
    'seed': 'master_seed',
    'snr_db': 'avg_snr_db',
    'gap': 'snr_gap',
    'ratios': 'rate_ratios',
    'taps': 'num_taps',
    'workers': 'workers',
    'gap_in_capacity': 'gap_in_capacity',
    'target_bits': 'target_bits',
    'max_bits': 'max_bits',
}


class SimulationApp:
    """Alt komutları çalıştıran uygulama"""

    def __init__(self, app_config: ConfigManager = config, stdout=None):
        self.config = app_config
        self.stdout = stdout or sys.stdout

    def run(self, args: argparse.Namespace) -> int:
        """Alt komutu çalıştır, çıkış kodunu döndür"""
        handlers = {
            'sweep': self._run_sweep,
            'fairness': self._run_fairness,
            'params': self._run_params,
            'oracle': self._run_oracle,
        }
        return handlers[args.command](args)

    def build_spec(self, args: argparse.Namespace, fairness: bool = False) -> ExperimentSpec:
        """config.json < deney dosyası < CLI bayrakları"""
        defaults = self.config.get_simulation_defaults()
        values: Dict[str, Any] = {
            name: defaults[name] for name in ExperimentSpec.field_names() if name in defaults
        }
        values['method'] = 'all'
        values['rate_ratios'] = 'pattern' if fairness else 'equal'
        if fairness:
            values['user_counts'] = (int(defaults.get('fairness_users', 16)),)

        if getattr(args, 'config', None):
            values.update(read_experiment_file(args.config, ExperimentSpec.field_names()))

        for flag, field_name in FLAG_FIELDS.items():
            value = getattr(args, flag, None)
            if value is not None:
                values[field_name] = value
        return ExperimentSpec.from_mapping(values)

    def _export(self, spec: ExperimentSpec, rows, out: Optional[str]):
        """CSV'yi dosyaya ya da stdout'a yaz; dosyada JSON yan dosyası ekle"""
        if out is None:
            write_csv(rows, self.stdout)
            return
        write_csv(rows, out)
        export_config = self.config.get_export_config()
        if export_config.get('include_metadata', True):
            write_metadata(f"{os.path.splitext(out)[0]}.json", spec, rows, export_config)

    def _run_sweep(self, args: argparse.Namespace) -> int:
        spec = self.build_spec(args)
        rows = run_capacity_sweep(spec)
        self._export(spec, rows, args.out)
        return 0

    def _run_fairness(self, args: argparse.Namespace) -> int:
        spec = self.build_spec(args, fairness=True)
        rows = run_fairness_experiment(spec)
        self._export(spec, rows, args.out)
        return 0

    def _run_params(self, args: argparse.Namespace) -> int:
        params = PrimitiveParams(
            bandwidth=args.bandwidth,
            n_used=args.n_used,
            sampling_factor=args.sampling_factor,
            cp_ratio=args.cp_ratio,
        )
        for name, value, unit in derived_table(params):
            print(f"{name} {value} {unit}", file=self.stdout)
        return 0

    def _run_oracle(self, args: argparse.Namespace) -> int:
        bitloading = self.config.get_bitloading_config()
        checks = run_oracle_checks(
            seed=args.seed if args.seed is not None else int(self.config.get('simulation.master_seed', 1)),
            instances=args.instances,
            step_size=float(bitloading.get('step_size', 1.0)),
            max_iters=int(bitloading.get('max_iters', 500)),
        )
        print("check instances failures worst status", file=self.stdout)
        for check in checks:
            status = "ok" if check.passed else "FAILED"
            print(f"{check.name} {check.instances} {check.failures} {check.worst:.3g} {status}", file=self.stdout)
        return 0 if all(check.passed for check in checks) else 1


def _experiment_parser() -> argparse.ArgumentParser:
    """sweep ve fairness için ortak bayraklar"""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--method", help=f"Allocator: {', '.join(METHODS)}, comma list or 'all'")
    parent.add_argument("--users", help="Comma-separated user counts K")
    parent.add_argument("--subcarriers", type=int, help="Number of subcarriers N")
    parent.add_argument("--realizations", type=int, help="Channel realizations per K")
    parent.add_argument("--seed", type=int, help="Master seed (realization i uses seed + i)")
    parent.add_argument("--snr-db", dest="snr_db", type=float, help="Average subchannel SNR in dB")
    parent.add_argument("--gap", help="SNR gap, linear (3.3) or in dB (5.2dB)")
    parent.add_argument("--ratios", help="Rate ratios: comma list, 'equal' or 'pattern'")
    parent.add_argument("--taps", type=int, help="Channel impulse response taps L")
    parent.add_argument("--workers", type=int, help="Parallel realization workers")
    parent.add_argument("--gap-in-capacity", dest="gap_in_capacity", action=argparse.BooleanOptionalAction,
                        default=None, help="Include the SNR gap in reported capacity")
    parent.add_argument("--target-bits", dest="target_bits", type=int,
                        help="Total bits per OFDM symbol for the proposed method")
    parent.add_argument("--max-bits", dest="max_bits", type=int, help="Maximum bits per subcarrier")
    parent.add_argument("--out", help="CSV output path (stdout if omitted)")
    parent.add_argument("--config", help="Experiment file with key = value lines")
    return parent


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Komut satırı argümanlarını parse et"""
    parser = argparse.ArgumentParser(description=config.get('app.title', "OFDMA Resource Allocation Simulator"))
    subparsers = parser.add_subparsers(dest="command", required=True)
    parent = _experiment_parser()

    subparsers.add_parser("sweep", parents=[parent], help="Total capacity versus number of users")
    subparsers.add_parser("fairness", parents=[parent], help="Normalized capacity ratios per user")

    params = subparsers.add_parser("params", help="Derived OFDMA symbol parameters")
    params.add_argument("--bandwidth", type=float, default=10e6, help="Nominal bandwidth in Hz")
    params.add_argument("--n-used", dest="n_used", type=int, default=840, help="Used subcarriers incl. DC")
    params.add_argument("--cp-ratio", dest="cp_ratio", default="1/8", help="Cyclic prefix ratio G")
    params.add_argument("--sampling-factor", dest="sampling_factor", default="8/7", help="Sampling factor n")

    oracle = subparsers.add_parser("oracle", help="Brute-force checks on small instances")
    oracle.add_argument("--seed", type=int, help="Seed for random instances")
    oracle.add_argument("--instances", type=int, default=1000, help="Random instances per check")
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    if config.is_logging_enabled():
        logger.configure(
            level=config.get_log_level(),
            log_dir=config.get_log_directory() or None,
            console_output=config.is_console_output(),
        )
    try:
        return SimulationApp().run(args)
    except AllocationError as e:
        logger.error(f"{args.command} failed", e)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
