"""Command-line interface.

Subcommands: heff (coefficient reports), simulate (full vs effective
trajectories plus comparison), sweep (detuning-scale summary), validate.
Exit codes: 0 success, 2 configuration/validation, 3 method inapplicable,
4 integration quality.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import load_config
from .elimination import METHODS
from .errors import (
    ConfigError,
    InapplicableError,
    IntegrationQualityError,
    ValidationError,
)
from .experiments import (
    run_heff,
    run_simulate,
    run_sweep,
    sweep_csv_lines,
    write_heff,
    write_simulation,
    write_sweep,
    comparison_lines,
)
from .elimination import report_lines

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INAPPLICABLE = 3
EXIT_INTEGRATION = 4


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="config file path or preset name")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--json", action="store_true", help="also write JSON mirrors")
    p.add_argument("--quiet", action="store_true", help="suppress stdout report")


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--method",
        action="append",
        choices=METHODS,
        help="method to run (repeatable; overrides config)",
    )
    p.add_argument("--dt", type=float, help="integration step (overrides config)")
    p.add_argument("--t-final", type=float, help="simulation window (overrides config)")
    p.add_argument("--fock-cutoff", type=int, help="Fock cutoff (overrides config)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavelim",
        description="Effective Hamiltonians for driven multilevel atoms in a cavity",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("heff", "compute effective-Hamiltonian coefficient reports"),
        ("simulate", "propagate full and effective models and compare"),
        ("sweep", "run a detuning-scale sweep and summarize"),
        ("validate", "check a config file"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name in ("heff", "simulate"):
            _add_overrides(p)
    return parser


def _apply_overrides(cfg, args):
    if getattr(args, "fock_cutoff", None) is not None:
        system = dataclasses.replace(cfg.system, fock_cutoff=args.fock_cutoff)
        bad = system.violations()
        if bad:
            raise ConfigError("; ".join(bad))
        cfg = dataclasses.replace(cfg, system=system)
    sim = cfg.simulate
    if getattr(args, "dt", None) is not None:
        sim = dataclasses.replace(sim, dt=args.dt)
    if getattr(args, "t_final", None) is not None:
        sim = dataclasses.replace(sim, t_final=args.t_final)
    cfg = dataclasses.replace(cfg, simulate=sim)
    if args.out:
        cfg = dataclasses.replace(cfg, outputs=dataclasses.replace(cfg.outputs, directory=args.out))
    if args.json:
        cfg = dataclasses.replace(cfg, outputs=dataclasses.replace(cfg.outputs, json=True))
    methods = getattr(args, "method", None)
    if methods:
        for m in methods:
            if m in ("amplitude", "paulisch") and cfg.system.n != 2:
                raise ConfigError(f"method {m} applies only to the two-photon system")
        cfg = dataclasses.replace(cfg, methods=tuple(methods))
    return cfg


def _cmd_heff(cfg, quiet: bool) -> int:
    models = run_heff(cfg)
    written = write_heff(models, cfg.outputs)
    if not quiet:
        for method in sorted(models):
            for line in report_lines(models[method]):
                print(line)
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_simulate(cfg, quiet: bool) -> int:
    result = run_simulate(cfg)
    written = write_simulation(result, cfg.outputs)
    if not quiet:
        for line in comparison_lines(result):
            print(line)
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_sweep(cfg, quiet: bool) -> int:
    rows = run_sweep(cfg)
    written = write_sweep(rows, cfg.outputs)
    if not quiet:
        for line in sweep_csv_lines(rows):
            print(line)
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_validate(cfg, quiet: bool) -> int:
    if not quiet:
        print("config ok")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = _apply_overrides(cfg, args)
        handler = {
            "heff": _cmd_heff,
            "simulate": _cmd_simulate,
            "sweep": _cmd_sweep,
            "validate": _cmd_validate,
        }[args.command]
        return handler(cfg, args.quiet)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InapplicableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except IntegrationQualityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION


if __name__ == "__main__":
    sys.exit(main())
