"""Command-line front end: table reproduction, CSV sweeps and the verification suite.

    ecs-sensing table table1
    ecs-sensing sweep --kind qfi_lossy --k 1 2 5 --loss 0.3 --nbar-max 5 --out fig3.csv
    ecs-sensing verify --tol 1e-6 --samples 25 --seed 42
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracle
from .ecs import EcsParams, amplitude_for_mean_photon
from .intensity import optimal_phase_error, phase_error, sz_statistics
from .lossless import qfi_at_mean_photon
from .lossy import LOSSLESS, LossChannel, qfi_lossy_at_mean_photon
from .reference import NBAR_GRID, REFERENCE_TOLERANCE, TABLES
from .verify import format_report, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SWEEP_KINDS = ("qfi_lossless", "qfi_lossy", "qfi_vs_loss", "delta_phi", "delta_phi_opt")
QFI_COLUMNS = ["n_bar", "k", "R", "qfi_closed", "qfi_oracle", "sql", "heisenberg"]
DPHI_COLUMNS = ["phi", "n_bar", "k", "R", "sz_mean", "sz_var", "slope", "delta_phi", "crb"]
TABLE_COLUMNS = ["n_bar", "n_bar_sq", "F_Q_closed", "F_Q_oracle", "paper_value", "rel_dev_paper"]

DEFAULTS = {
    "k_list": [1.0, 2.0, 10.0],
    "r_list": [0.0],
    "nbar_min": 0.0,
    "nbar_max": 5.0,
    "nbar_steps": 21,
    "phi_min": 0.0,
    "phi_max": math.pi,
    "phi_steps": 181,
    "cutoff": None,
    "out": None,
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """12 significant digits; non-finite values as inf / nan."""
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


@dataclass
class SweepConfig:
    k_list: list
    r_list: list
    nbar_min: float
    nbar_max: float
    nbar_steps: int
    phi_min: float
    phi_max: float
    phi_steps: int
    cutoff: int | None = None
    out: str | None = None

    def validate(self):
        if not self.k_list:
            raise UsageError("--k needs at least one value")
        if any(k == 0 for k in self.k_list):
            raise UsageError("k must be nonzero")
        if not self.r_list:
            raise UsageError("--loss needs at least one value")
        if any(not 0.0 <= r <= 1.0 for r in self.r_list):
            raise UsageError("loss values must lie in [0, 1]")
        for lo, hi, steps, name in ((self.nbar_min, self.nbar_max, self.nbar_steps, "nbar"),
                                    (self.phi_min, self.phi_max, self.phi_steps, "phi")):
            if steps < 1:
                raise UsageError(f"--{name}-steps must be >= 1")
            if lo > hi:
                raise UsageError(f"--{name}-min must not exceed --{name}-max")
        if self.nbar_min < 0:
            raise UsageError("mean photon number must be >= 0")
        if self.cutoff is not None and self.cutoff < 1:
            raise UsageError("--cutoff must be >= 1")

    @property
    def nbar_grid(self) -> list[float]:
        return _grid(self.nbar_min, self.nbar_max, self.nbar_steps)

    @property
    def phi_grid(self) -> list[float]:
        return _grid(self.phi_min, self.phi_max, self.phi_steps)


def _grid(lo: float, hi: float, steps: int) -> list[float]:
    if steps == 1:
        return [float(lo)]
    return [float(v) for v in np.linspace(lo, hi, steps)]


def resolve_config(args: argparse.Namespace) -> SweepConfig:
    """Defaults < JSON config file < explicit flags."""
    merged = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(data)
    flags = {
        "k_list": args.k,
        "r_list": args.loss,
        "nbar_min": args.nbar_min,
        "nbar_max": args.nbar_max,
        "nbar_steps": args.nbar_steps,
        "phi_min": args.phi_min,
        "phi_max": args.phi_max,
        "phi_steps": args.phi_steps,
        "cutoff": args.cutoff,
        "out": args.out,
    }
    merged.update({key: val for key, val in flags.items() if val is not None})
    try:
        cfg = SweepConfig(
            k_list=[float(k) for k in merged["k_list"]],
            r_list=[float(r) for r in merged["r_list"]],
            nbar_min=float(merged["nbar_min"]),
            nbar_max=float(merged["nbar_max"]),
            nbar_steps=int(merged["nbar_steps"]),
            phi_min=float(merged["phi_min"]),
            phi_max=float(merged["phi_max"]),
            phi_steps=int(merged["phi_steps"]),
            cutoff=None if merged["cutoff"] is None else int(merged["cutoff"]),
            out=merged["out"],
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid config value: {exc}") from exc
    cfg.validate()
    return cfg


def oracle_qfi(n_bar: float, k: float, loss: float, cutoff: int | None = None) -> float:
    params = EcsParams(amplitude_for_mean_photon(n_bar, k), k)
    channel = LossChannel.from_loss(loss)
    return oracle.qfi_numeric(lambda phi: oracle.build_density_matrix(params, channel, phi, cutoff))


def qfi_row(n_bar: float, k: float, loss: float, cutoff: int | None) -> list:
    if loss == 0.0:
        closed = qfi_at_mean_photon(n_bar, k).qfi
    else:
        closed = qfi_lossy_at_mean_photon(n_bar, k, loss).qfi
    return [n_bar, k, loss, closed, oracle_qfi(n_bar, k, loss, cutoff), n_bar, n_bar * n_bar]


def delta_phi_row(phi: float, n_bar: float, k: float, loss: float) -> list:
    params = EcsParams(amplitude_for_mean_photon(n_bar, k), k)
    channel = LossChannel.from_loss(loss)
    st = sz_statistics(params, channel, phi)
    pe = phase_error(params, channel, phi)
    return [phi, n_bar, k, loss, st.mean, st.variance, st.slope, pe.delta_phi, pe.crb]


def delta_phi_opt_row(n_bar: float, k: float, loss: float, grid: list) -> list:
    params = EcsParams(amplitude_for_mean_photon(n_bar, k), k)
    phi_star, _ = optimal_phase_error(params, LossChannel.from_loss(loss), grid)
    return delta_phi_row(phi_star, n_bar, k, loss)


def _run(tasks, jobs: int) -> list:
    """Evaluate (fn, args) tasks, results in task order."""
    if jobs <= 1:
        return [fn(*a) for fn, a in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda t: t[0](*t[1]), tasks))


def sweep_rows(cfg: SweepConfig, kind: str, jobs: int = 1) -> tuple[list, list]:
    if kind == "qfi_lossless":
        tasks = [(qfi_row, (n, k, 0.0, cfg.cutoff)) for k in cfg.k_list for n in cfg.nbar_grid]
        return QFI_COLUMNS, _run(tasks, jobs)
    if kind == "qfi_lossy":
        tasks = [(qfi_row, (n, k, r, cfg.cutoff))
                 for r in cfg.r_list for k in cfg.k_list for n in cfg.nbar_grid]
        return QFI_COLUMNS, _run(tasks, jobs)
    if kind == "qfi_vs_loss":
        tasks = [(qfi_row, (n, k, r, cfg.cutoff))
                 for k in cfg.k_list for n in cfg.nbar_grid for r in cfg.r_list]
        return QFI_COLUMNS, _run(tasks, jobs)
    if kind == "delta_phi":
        tasks = [(delta_phi_row, (phi, n, k, r))
                 for r in cfg.r_list for k in cfg.k_list for n in cfg.nbar_grid for phi in cfg.phi_grid]
        return DPHI_COLUMNS, _run(tasks, jobs)
    if kind == "delta_phi_opt":
        grid = cfg.phi_grid
        tasks = [(delta_phi_opt_row, (n, k, r, grid))
                 for r in cfg.r_list for k in cfg.k_list for n in cfg.nbar_grid]
        return DPHI_COLUMNS, _run(tasks, jobs)
    raise UsageError(f"unknown sweep kind {kind!r}")


def table_rows(which: str, cutoff: int | None = None, jobs: int = 1) -> list:
    ref = TABLES[which]
    k, loss = ref["k"], ref["loss"]
    computed = _run([(qfi_row, (n, k, loss, cutoff)) for n in NBAR_GRID], jobs)
    rows = []
    for n, row, paper in zip(NBAR_GRID, computed, ref["qfi"]):
        closed, numeric = row[3], row[4]
        rows.append([n, n * n, closed, numeric, paper, (closed - paper) / paper])
    return rows


def to_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_table(args) -> int:
    rows = table_rows(args.which, args.cutoff, args.jobs)
    _emit(to_csv(TABLE_COLUMNS, rows), args.out)
    worst_ref = max(abs(r[5]) for r in rows)
    worst_oracle = max(abs(r[2] - r[3]) / abs(r[3]) for r in rows)
    within = sum(abs(r[5]) <= REFERENCE_TOLERANCE for r in rows)
    print(f"# {args.which}: {within}/{len(rows)} rows within {REFERENCE_TOLERANCE:.0%} of the published values; "
          f"max |rel_dev_paper| = {worst_ref:.4f}; max closed-vs-oracle = {worst_oracle:.2e}",
          file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    header, rows = sweep_rows(cfg, args.kind, args.jobs)
    _emit(to_csv(header, rows), cfg.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    results = run_verification(args.tol, args.samples, args.seed, args.cutoff)
    report = format_report(results, args.samples, args.seed)
    _emit(report, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecs-sensing",
        description="Phase-estimation precision of asymmetric entangled coherent states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", type=int, default=None, help="Fock cutoff per mode for the oracle")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--jobs", type=int, default=1, help="parallel evaluation bound")

    p = sub.add_parser("table", parents=[common], help="reproduce a published QFI table as CSV")
    p.add_argument("which", choices=sorted(TABLES))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sweep", parents=[common], help="emit figure data as CSV")
    p.add_argument("--kind", choices=SWEEP_KINDS, default="qfi_lossless")
    p.add_argument("--config", default=None, help="JSON file with sweep settings; flags win")
    p.add_argument("--k", type=float, nargs="+", default=None)
    p.add_argument("--loss", type=float, nargs="+", default=None)
    p.add_argument("--nbar-min", type=float, default=None)
    p.add_argument("--nbar-max", type=float, default=None)
    p.add_argument("--nbar-steps", type=int, default=None)
    p.add_argument("--phi-min", type=float, default=None)
    p.add_argument("--phi-max", type=float, default=None)
    p.add_argument("--phi-steps", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="closed-form vs oracle consistency suite")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.print_usage(sys.stderr)
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
