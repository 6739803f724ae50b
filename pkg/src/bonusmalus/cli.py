"""Command-line front end: tariff tables, schedule validation, simulation."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .config import TariffConfig, load_config
from .deductible import (
    DeductibleSchedule,
    allocate_greedy_top,
    allocate_manual,
    allocate_proportional_top,
    allocate_single_type,
    uniform_schedule,
    validate_schedule,
)
from .errors import BonusMalusError, ConfigError
from .relativity import steady_state_profile
from .simulate import simulate_portfolio
from .tables import TABLE_NUMBERS, build_table


def _fmt(value, full_precision):
    if full_precision:
        return repr(float(value))
    return f"{value:.4f}"


def _emit(header, rows, out_path, full_precision):
    """Aligned table on stdout; optionally a CSV with the same contents."""
    cells = [[f"{int(r[0])}"] + [_fmt(v, full_precision) for v in r[1:]] for r in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
    print("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for c in cells:
        print("  ".join(v.rjust(w) for v, w in zip(c, widths)))
    if out_path:
        with open(out_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for c in cells:
                writer.writerow(c)


def _profile(cfg: TariffConfig):
    return steady_state_profile(
        cfg.lam, cfg.rules, cfg.partition, cfg.mixing, order=cfg.quadrature_order
    )


def _build_schedule(cfg: TariffConfig, relativities):
    spec = cfg.deductible_spec
    if spec is None:
        raise ConfigError("config has no deductible_spec")
    if spec.principle == "proportional_top":
        _, schedule = allocate_proportional_top(
            float(spec.alphas), relativities, cfg.model, cfg.partition, tol=cfg.bisection_tol
        )
    elif spec.principle == "greedy_top":
        schedule = allocate_greedy_top(float(spec.alphas), relativities, cfg.model, cfg.partition)
    elif spec.principle == "single_type":
        schedule = allocate_single_type(spec.alphas, relativities, cfg.model, cfg.partition)
    elif spec.principle == "uniform":
        schedule = uniform_schedule(relativities, cfg.model, cfg.partition, manual_d=spec.manual_d)
    else:
        schedule = allocate_manual(
            spec.alphas, relativities, cfg.model, cfg.partition,
            fixed=spec.fixed, free_type=spec.free_type, tol=cfg.bisection_tol,
        )
    return schedule


def _table_rows(cfg, profile, schedule=None):
    header = ["l", "pi_l", "r_l", "premium"]
    m = cfg.partition.n_types - 1
    if schedule is not None:
        header += ["alpha_l", "reduced_premium"] + [f"d_{i}" for i in range(m + 1)]
    rows = []
    for l in range(cfg.rules.top, -1, -1):
        premium = cfg.lam * profile.relativities[l] * cfg.model.mean()
        row = [float(l), profile.proportions[l], profile.relativities[l], premium]
        if schedule is not None:
            alpha = schedule.alpha_at(l)
            row += [alpha, (1 - alpha) * premium]
            row.extend(schedule.row_at(l))
        rows.append(row)
    return header, rows


def _read_schedule_csv(path, cfg, relativities, malus_entry):
    """Rebuild a schedule from the CSV layout written by ``allocate``."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read schedule {path}: {exc}") from exc
    m = cfg.partition.n_types - 1
    needed = {"l", "alpha_l"} | {f"d_{i}" for i in range(m + 1)}
    if not rows or not needed <= set(rows[0]):
        raise ConfigError(f"schedule {path} must carry columns {sorted(needed)}")
    by_level = {int(float(r["l"])): r for r in rows}
    s = cfg.rules.top
    levels = list(range(malus_entry, s + 1))
    if not all(l in by_level for l in levels):
        raise ConfigError(f"schedule {path} must cover levels {levels}")
    alphas = np.array([float(by_level[l]["alpha_l"]) for l in levels])
    d = np.array([[float(by_level[l][f"d_{i}"]) for i in range(m + 1)] for l in levels])
    return DeductibleSchedule(malus_entry=malus_entry, alphas=alphas, deductibles=d)


def _cmd_relativities(args):
    cfg = _load(args)
    profile = _profile(cfg)
    header, rows = _table_rows(cfg, profile)
    _emit(header, rows, _out_file(args, "relativities.csv"), args.full_precision)
    return 0


def _cmd_allocate(args):
    cfg = _load(args)
    profile = _profile(cfg)
    schedule = _build_schedule(cfg, profile.relativities)
    header, rows = _table_rows(cfg, profile, schedule)
    _emit(header, rows, _out_file(args, "allocate.csv"), args.full_precision)
    return 0


def _cmd_validate(args):
    cfg = _load(args)
    profile = _profile(cfg)
    schedule = _read_schedule_csv(args.schedule, cfg, profile.relativities, profile.malus_entry)
    report = validate_schedule(
        schedule, profile.relativities, cfg.model, cfg.partition, residual_tol=args.residual_tol
    )
    for check in report.levels:
        flags = [
            ("caps", check.caps_ok),
            ("type_monotone", check.type_monotone_ok),
            ("level_monotone", check.level_monotone_ok),
            ("top_type_bound", check.top_type_bound_ok),
            ("alpha_monotone", check.alpha_monotone_ok),
        ]
        status = " ".join(f"{name}={'ok' if ok else 'FAIL'}" for name, ok in flags)
        print(f"level {check.level}: residual {check.residual:+.6e} {status}")
    print(f"premium ordering: {'ok' if report.premium_ordering_ok else 'FAIL'}")
    if report.passed:
        print("schedule: PASS")
        return 0
    print("schedule: FAIL")
    print(json.dumps({"error": "ScheduleInvalid", "failures": report.failures()}), file=sys.stderr)
    return 1


def _cmd_simulate(args):
    cfg = _load(args)
    if cfg.simulation is None:
        raise ConfigError("config has no simulation section")
    sim_cfg = cfg.simulation
    if args.seed is not None:
        from dataclasses import replace

        sim_cfg = replace(sim_cfg, seed=args.seed)
    schedule = None
    if cfg.deductible_spec is not None:
        profile = _profile(cfg)
        schedule = _build_schedule(cfg, profile.relativities)
    report = simulate_portfolio(
        sim_cfg, cfg.lam, cfg.rules, cfg.partition, cfg.model, cfg.mixing, schedule
    )
    header = ["l", "pi_hat", "pi_se", "theta_hat", "theta_se", "ded_paid", "ded_se"]
    rows = []
    for l in range(cfg.rules.top, -1, -1):
        rows.append([
            float(l),
            report.empirical_proportions[l],
            report.proportion_se[l],
            report.empirical_relativities[l],
            report.relativity_se[l],
            report.mean_deductible_paid[l],
            report.deductible_se[l],
        ])
    _emit(header, rows, _out_file(args, "simulate.csv"), args.full_precision)
    return 0


def _cmd_tables(args):
    for number in TABLE_NUMBERS:
        table = build_table(number)
        print(f"# table {number}")
        _emit(
            table.header(),
            table.rows(),
            _out_file(args, f"table_{number:02d}.csv"),
            args.full_precision,
        )
    return 0


def _load(args) -> TariffConfig:
    if not args.config:
        raise ConfigError("--config is required for this subcommand")
    cfg = load_config(args.config)
    if args.quadrature_order is not None:
        from dataclasses import replace

        cfg = replace(cfg, quadrature_order=args.quadrature_order)
    return cfg


def _out_file(args, name):
    if not args.out:
        return None
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bonusmalus",
        description="Bonus-malus rating scales with claim types and varying deductibles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="path to a tariff configuration (JSON)")
        p.add_argument("--out", help="directory for CSV output")
        p.add_argument("--full-precision", action="store_true", help="emit full float precision")
        p.add_argument("--quadrature-order", type=int, help="override the quadrature order")

    p = sub.add_parser("relativities", help="level proportions, relativities and premiums")
    common(p)
    p.set_defaults(fn=_cmd_relativities)

    p = sub.add_parser("allocate", help="synthesize a deductible schedule")
    common(p)
    p.set_defaults(fn=_cmd_allocate)

    p = sub.add_parser("validate", help="validate a schedule CSV against a tariff")
    common(p)
    p.add_argument("--schedule", required=True, help="schedule CSV in the allocate layout")
    p.add_argument("--residual-tol", type=float, default=5e-3,
                   help="balance residual tolerance (rounded tables need a loose one)")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("simulate", help="Monte Carlo check of the analytic values")
    common(p)
    p.add_argument("--seed", type=int, help="override the simulation seed")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("tables", help="emit the twelve built-in demonstration tables")
    common(p)
    p.set_defaults(fn=_cmd_tables)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(json.dumps({"error": "ConfigError", "message": str(exc)}), file=sys.stderr)
        return 2
    except BonusMalusError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
