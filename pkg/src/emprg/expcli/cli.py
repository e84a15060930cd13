"""Command-line entry point: ``emprg <subcommand> [options]``.

Options may also come from a flat ``key = value`` file given with
``--config``; keys are the long option names with or without dashes
(``kt-min`` and ``kt_min`` are the same key).  Command-line flags override
file values.

Exit status is 0 on success, 2 for configuration errors and 3 for numerical
failures.
"""
import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from ..errors import ConfigError
from ..lattice import ModelSpec
from ..renorm import OptimizerConfig
from . import csvio
from .experiments import (
    Fig1Row,
    RgCompareRow,
    RunConfig,
    run_correlator,
    run_fig1,
    run_ground,
    run_rg_compare,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

MODEL_ALIASES = {
    "heisenberg": "heisenberg",
    "transverse_ising": "transverse_ising",
    "ising": "transverse_ising",
    "tfim": "transverse_ising",
}

COMMANDS = {
    "fig1": "fig1",
    "rg-compare": "rg_compare",
    "correlator": "correlator",
    "ground": "ground",
}

# option name -> converter; also the set of keys accepted in config files
OPTIONS = {
    "model": str,
    "sites": int,
    "coupling": float,
    "field": float,
    "boundary": str,
    "m": str,
    "kt_min": float,
    "kt_max": float,
    "kt_steps": int,
    "seed": int,
    "restarts": int,
    "out": str,
    "site": int,
    "axes": str,
    "kt": float,
    "block_init": int,
    "max_iters": int,
    "jobs": int,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="emprg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "fig1": "EoF kept by DMRG and EMP block projections against temperature",
        "rg-compare": "ground-energy error of Wilson RG and DMRG",
        "correlator": "connected two-point correlators from one site",
        "ground": "ground-state energy, gap and half-chain entropy",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", metavar="FILE", help="flat key=value option file")
        p.add_argument("--model", help="heisenberg or transverse_ising (alias: ising)")
        p.add_argument("--sites", type=int)
        p.add_argument("--coupling", type=float, help="J")
        p.add_argument("--field", type=float, help="transverse field h")
        p.add_argument("--boundary", choices=("open", "periodic"))
        p.add_argument("--m", help="retained dimension(s), comma separated")
        p.add_argument("--kt-min", dest="kt_min", type=float)
        p.add_argument("--kt-max", dest="kt_max", type=float)
        p.add_argument("--kt-steps", dest="kt_steps", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--restarts", type=int, help="random EMP restarts per point")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--site", type=int, help="reference site for correlator")
        p.add_argument("--axes", help="Pauli axes for correlator, e.g. zz")
        p.add_argument("--kt", type=float, help="use the thermal state at this kT")
        p.add_argument("--block-init", dest="block_init", type=int)
        p.add_argument("--max-iters", dest="max_iters", type=int)
        p.add_argument("--jobs", type=int, help="worker processes for fig1")
    return parser


def read_config_file(path):
    """Parse a flat ``key = value`` file into converted option values."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    values = {}
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key = key.strip().lstrip("-").replace("-", "_")
        if key not in OPTIONS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        try:
            values[key] = OPTIONS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{n}: bad value for {key}: {value.strip()!r}") from exc
    return values


def _parse_m(text):
    try:
        return tuple(int(v) for v in str(text).replace(" ", "").split(",") if v)
    except ValueError as exc:
        raise ConfigError(f"bad --m value {text!r}") from exc


def make_config(command, options):
    """Build a :class:`RunConfig` from merged option values."""
    experiment = COMMANDS[command]
    kind = MODEL_ALIASES.get(str(options.get("model", "heisenberg")).lower())
    if kind is None:
        raise ConfigError(f"unknown model {options['model']!r}")
    defaults = ModelSpec()
    spec = ModelSpec(
        kind=kind,
        sites=options.get("sites", defaults.sites if experiment == "fig1" else 10),
        coupling=options.get("coupling", defaults.coupling),
        field=options.get("field", defaults.field),
        boundary=options.get("boundary", defaults.boundary),
    )
    m_values = _parse_m(options["m"]) if "m" in options else None
    if experiment == "fig1":
        if m_values not in (None, (2,)):
            raise ConfigError("fig1 compresses each half to a qubit; only m=2 is supported")
        m_values = (2,)
    seed = options.get("seed", 0)
    opt = OptimizerConfig(seed=seed)
    if "restarts" in options:
        if options["restarts"] < 0:
            raise ConfigError("restarts must be non-negative")
        opt = replace(opt, restarts=options["restarts"])
    axes = tuple(options.get("axes", "zz").lower())
    kwargs = {
        k: options[k]
        for k in ("kt_min", "kt_max", "kt_steps", "out", "site", "kt", "block_init", "max_iters", "jobs")
        if k in options
    }
    return RunConfig(
        model=spec,
        experiment=experiment,
        m_values=m_values or (8,),
        optimizer=opt,
        seed=seed,
        axes=axes,
        **kwargs,
    )


def execute(cfg):
    """Run the experiment; returns ``(header, rows, ok)``."""
    if cfg.experiment == "fig1":
        rows = run_fig1(cfg)
        ok = all(math.isfinite(r.eof_emp) for r in rows)
        return Fig1Row.FIELDS, [r.values() for r in rows], ok
    if cfg.experiment == "rg_compare":
        rows = run_rg_compare(cfg)
        return RgCompareRow.FIELDS, [r.values() for r in rows], True
    if cfg.experiment == "correlator":
        rows = run_correlator(cfg)
        return ("separation", "site", "value"), rows, True
    result = run_ground(cfg)
    return tuple(result), [list(result.values())], True


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        options = read_config_file(args.config) if args.config else {}
        flags = {k: v for k, v in vars(args).items() if k in OPTIONS and v is not None}
        options.update(flags)
        cfg = make_config(args.command, options)
    except (ConfigError, ValueError) as exc:
        print(f"emprg: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with np.errstate(all="ignore"):
            header, rows, ok = execute(cfg)
    except ConfigError as exc:
        print(f"emprg: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"emprg: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = csvio.write_csv(cfg.out, header, rows, cfg.metadata())
    if cfg.out is None or cfg.out == "-":
        sys.stdout.write(text)
    if not ok:
        print("emprg: optimizer found no usable projection at some points", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
