"""Command-line harness: sweeps from config files, gamma scans, pulse export.

Subcommands
-----------
sweep          run crosstalk sweeps from an INI config, one CSV per scenario
find-gamma     locate the cumulant-zeroing modulation ratio, emit the EC curve
export-pulse   sample a scenario's drive waveform to CSV
list-scenarios print the catalog

Sweep CSVs carry the fixed schema
``scenario,k,eta_ratio,fidelity,infidelity,converged,wall_ms`` (UTF-8, LF).
All numeric columns are reproducible bit-for-bit across reruns of the same
config; wall_ms is a measurement and is exempt.

The output directory may be overridden with the ``ZZMIT_OUT`` environment
variable (the only env override the harness honors).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import math
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .cumulant import NoCumulantZeroError, cumulant_curve, find_gamma
from .envelopes import write_waveform
from .propagate import PropagatorConfig
from .scenarios import FAMILIES, SweepRecord, get_scenario, run_sweep

CSV_HEADER = ["scenario", "k", "eta_ratio", "fidelity", "infidelity", "converged", "wall_ms"]

USAGE_EXIT = 2
FAILURE_EXIT = 1


class ConfigError(ValueError):
    pass


def _parse_area(text: str) -> float:
    """Accept plain floats plus the pi/4, pi/2, pi shorthands."""
    t = text.strip().lower().replace(" ", "")
    named = {"pi/4": math.pi / 4, "pi/2": math.pi / 2, "pi": math.pi}
    if t in named:
        return named[t]
    try:
        return float(t)
    except ValueError:
        raise ConfigError(f"cannot parse pulse area {text!r}") from None


def _split_list(text: str) -> List[str]:
    return [x.strip() for x in text.replace(",", " ").split() if x.strip()]


def load_run_config(path: str) -> Dict:
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    if "run" not in parser:
        raise ConfigError("config must have a [run] section")
    sec = parser["run"]

    families = _split_list(sec.get("scenarios", ""))
    if not families:
        raise ConfigError("config lists no scenarios")
    for fam in families:
        if fam not in FAMILIES:
            raise ConfigError(f"unknown scenario {fam!r}")
    schemes = _split_list(sec.get("schemes", "zzcm, dy"))
    for s in schemes:
        if s not in ("zzcm", "dy"):
            raise ConfigError(f"unknown scheme {s!r}")
    ks = [int(x) for x in _split_list(sec.get("k", "4"))]
    if any(k < 1 for k in ks):
        raise ConfigError("k values must be >= 1")

    eta_min = sec.getfloat("eta_min", -0.05)
    eta_max = sec.getfloat("eta_max", 0.05)
    eta_count = sec.getint("eta_count", 21)
    if eta_count < 1:
        raise ConfigError("eta_count must be >= 1")
    if eta_min > eta_max:
        raise ConfigError("eta_min must be <= eta_max")

    return dict(
        families=families,
        schemes=schemes,
        ks=ks,
        ratios=np.linspace(eta_min, eta_max, eta_count).tolist(),
        normalization=sec.get("normalization", None),
        steps_per_period=sec.getint("steps_per_period", 256),
        refine_tolerance=sec.getfloat("refine_tolerance", 1e-8),
        max_refinements=sec.getint("max_refinements", 2),
        workers=sec.getint("workers", 1),
        out=sec.get("out", "results"),
    )


def _write_records(path: Path, records: Sequence[SweepRecord]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([r.scenario, r.k, f"{r.eta_ratio:.12g}",
                        f"{r.fidelity:.12g}", f"{r.infidelity:.12g}",
                        int(r.converged), f"{r.wall_ms:.3f}"])


def cmd_sweep(args) -> int:
    try:
        cfg = load_run_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return USAGE_EXIT

    if args.steps_per_period:
        cfg["steps_per_period"] = args.steps_per_period
    if args.workers:
        cfg["workers"] = args.workers
    out_dir = Path(os.environ.get("ZZMIT_OUT") or args.out or cfg["out"])

    prop = PropagatorConfig(steps_per_period=cfg["steps_per_period"],
                            refine_tolerance=cfg["refine_tolerance"],
                            max_refinements=cfg["max_refinements"])
    all_converged = True
    for fam in cfg["families"]:
        schemes = cfg["schemes"]
        for scheme in schemes:
            k_list = cfg["ks"] if scheme == "zzcm" else [cfg["ks"][0]]
            for k in k_list:
                try:
                    scenario = get_scenario(fam, scheme=scheme, k=k,
                                            normalization=cfg["normalization"])
                except ValueError as exc:
                    print(f"config error: {exc}", file=sys.stderr)
                    return USAGE_EXIT
                records = run_sweep(scenario, cfg["ratios"], prop,
                                    workers=cfg["workers"])
                path = out_dir / f"{scenario.name}.csv"
                _write_records(path, records)
                bad = [r for r in records if not r.converged]
                all_converged &= not bad
                worst = max(r.infidelity for r in records)
                print(f"{scenario.name}: {len(records)} points -> {path} "
                      f"(worst infidelity {worst:.3e}"
                      + (f", {len(bad)} unconverged" if bad else "") + ")")
    if not all_converged:
        print("some sweep points failed the step-halving probe", file=sys.stderr)
        return FAILURE_EXIT
    return 0


def cmd_find_gamma(args) -> int:
    area = _parse_area(args.area)
    lo, hi = args.bracket
    try:
        root = find_gamma(area, k=args.k, bracket=(lo, hi), root_index=args.root_index)
    except NoCumulantZeroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILURE_EXIT
    print(f"gamma_star = {root.gamma:.4f}  (cumulant {root.cumulant:.3e}, "
          f"root index {root.index})")
    if args.out:
        gammas = np.arange(lo, hi + 1e-12, args.curve_step)
        ec = cumulant_curve(area, args.k, gammas)
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["gamma", "cumulant"])
            for g, e in zip(gammas, ec):
                w.writerow([f"{g:.12g}", f"{e:.12g}"])
        print(f"cumulant curve ({len(gammas)} points) -> {out}")
    return 0


def cmd_export_pulse(args) -> int:
    if args.rate <= 0:
        print("error: sample rate must be positive", file=sys.stderr)
        return USAGE_EXIT
    try:
        scenario = get_scenario(args.scenario, scheme=args.scheme, k=args.k,
                                normalization=args.normalization)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    if scenario.export_envelope is None:
        print(f"error: scenario {scenario.name} exports no waveform", file=sys.stderr)
        return FAILURE_EXIT
    out = Path(os.environ.get("ZZMIT_OUT") or ".") / (args.out or f"{scenario.name}-pulse.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    t0, t1 = scenario.export_window
    n = write_waveform(scenario.export_envelope, t0, t1, args.rate, out)
    print(f"{scenario.name}: {n} samples over [{t0:g}, {t1:g}] -> {out}")
    return 0


def cmd_list_scenarios(_args) -> int:
    print(f"{'family':<20} {'qubits':<7} {'normalizations':<36} description")
    for fam in sorted(FAMILIES):
        info = FAMILIES[fam]
        norms = ", ".join(info["normalizations"])
        print(f"{fam:<20} {info['qubits']:<7} {norms:<36} {info['description']}")
    print("\nschemes: zzcm (modulated drives), dy (plain pulses)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zzmit",
                                description="crosstalk-mitigated gate simulator")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sweep", help="run crosstalk sweeps from a config file")
    ps.add_argument("--config", required=True)
    ps.add_argument("--out", default=None, help="output directory (overrides config)")
    ps.add_argument("--workers", type=int, default=None)
    ps.add_argument("--steps-per-period", type=int, default=None)
    ps.set_defaults(func=cmd_sweep)

    pg = sub.add_parser("find-gamma", help="locate the cumulant-zeroing ratio")
    pg.add_argument("--area", required=True, help="pulse area: pi/4, pi/2 or a float")
    pg.add_argument("--k", type=int, default=4)
    pg.add_argument("--bracket", type=float, nargs=2, default=(0.5, 8.0),
                    metavar=("LO", "HI"))
    pg.add_argument("--root-index", type=int, default=1)
    pg.add_argument("--out", default=None, help="write the EC curve CSV here")
    pg.add_argument("--curve-step", type=float, default=0.01)
    pg.set_defaults(func=cmd_find_gamma)

    pe = sub.add_parser("export-pulse", help="sample a scenario drive waveform")
    pe.add_argument("--scenario", required=True)
    pe.add_argument("--scheme", default="zzcm", choices=("zzcm", "dy"))
    pe.add_argument("--k", type=int, default=4)
    pe.add_argument("--normalization", default=None)
    pe.add_argument("--rate", type=float, required=True,
                    help="samples per time unit")
    pe.add_argument("--out", default=None)
    pe.set_defaults(func=cmd_export_pulse)

    pl = sub.add_parser("list-scenarios", help="print the scenario catalog")
    pl.set_defaults(func=cmd_list_scenarios)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
