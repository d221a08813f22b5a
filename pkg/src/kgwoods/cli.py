"""Command-line interface: ``kgwoods <subcommand> [options]``.

All tabular output is CSV with a header row and 17 significant digits.
Exit codes: 0 success, 2 configuration error, 3 numerical-domain error,
4 verification failure.
"""

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, replace

import numpy as np

from . import bound, checks
from .errors import (ConfigError, KGWoodsError, NoBracketError, PoleError,
                     ResonanceDenominatorError)
from .potential import FREE_KEYS, NATURAL, TABLE_I, evaluate, make_symmetric, parse_config
from .scattering import transmission_reflection
from .settings import SolverSettings

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4

DEFAULT_MASS = 2.0
DEFAULT_XRANGE = "-12:12:1201"
POLE_NUDGE = 1e-9


@dataclass(frozen=True)
class SweepSpec:
    parameter_name: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.parameter_name not in FREE_KEYS + ("energy",):
            raise ConfigError(f"cannot sweep unknown parameter {self.parameter_name!r}")
        if not self.step > 0:
            raise ConfigError("sweep step must be positive")
        if not self.start < self.stop:
            raise ConfigError("sweep start must be below stop")

    def values(self):
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        return self.start + self.step * np.arange(n + 1)

    @classmethod
    def parse(cls, text):
        name, sep, rng = text.partition("=")
        parts = rng.split(":")
        if not sep or len(parts) != 3:
            raise ConfigError(f"--sweep expects name=start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"--sweep bounds are not numbers: {text!r}") from None
        return cls(name.strip(), start, stop, step)


@dataclass(frozen=True)
class RunConfig:
    params: object
    mass: float
    units: object = NATURAL
    settings: SolverSettings = SolverSettings()

    def __post_init__(self):
        if not self.mass > 0:
            raise ConfigError("mass must be positive")


def parse_xrange(text):
    parts = text.split(":")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise ConfigError(f"--xrange expects a:b:n, got {text!r}") from None
    if len(parts) != 3 or not a < b or n < 2:
        raise ConfigError(f"--xrange needs a < b and n >= 2, got {text!r}")
    return np.linspace(a, b, n)


def load_run_config(args):
    if args.config:
        try:
            with open(args.config) as fh:
                params, mass = parse_config(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
    else:
        params, mass = make_symmetric(**TABLE_I), None
    if getattr(args, "mass", None) is not None:
        mass = args.mass
    settings = SolverSettings()
    if getattr(args, "corrupt_branch", False):
        settings = replace(settings, branch="principal")
    return RunConfig(params=params, mass=DEFAULT_MASS if mass is None else mass,
                     settings=settings)


def fmt(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


@contextmanager
def open_output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_csv(path, header, rows):
    with open_output(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def warn(msg):
    print(f"kgwoods: {msg}", file=sys.stderr)


def cmd_potential(args):
    cfg = load_run_config(args)
    xs = parse_xrange(args.xrange)
    vs = evaluate(cfg.params, xs)
    write_csv(args.output, ["x", "V"], zip(xs, vs))
    return EXIT_OK


def _scatter_point(job):
    """One sweep row; returns ``(value, T, R, note)``.  Runs in a worker."""
    name, value, energy, cfg = job
    E = value if name == "energy" else energy
    try:
        params = cfg.params if name == "energy" else cfg.params.with_(**{name: value})
    except (ValueError, ZeroDivisionError) as exc:
        return value, math.nan, math.nan, f"{name}={value}: {exc}"
    note = ""
    try:
        try:
            r = transmission_reflection(E, cfg.mass, params, cfg.units, cfg.settings)
        except (PoleError, ResonanceDenominatorError):
            # measure-zero pole of the closed form: step off it
            r = transmission_reflection(E + POLE_NUDGE, cfg.mass, params, cfg.units,
                                        cfg.settings)
            note = f"E perturbed by {POLE_NUDGE:g} off a pole"
    except (KGWoodsError, ArithmeticError, ValueError) as exc:
        return value, math.nan, math.nan, f"{name}={value}: {exc}"
    return value, r.T, r.R, note


def _run_jobs(fn, jobs, n_workers):
    if n_workers <= 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        # map keeps input order
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * n_workers))))


def cmd_scatter(args):
    cfg = load_run_config(args)
    if not args.sweep:
        raise ConfigError("scatter needs --sweep name=start:stop:step")
    sweep = SweepSpec.parse(args.sweep)
    if sweep.parameter_name != "energy" and args.energy is None:
        raise ConfigError(f"sweeping {sweep.parameter_name} needs a fixed --energy")
    jobs = [(sweep.parameter_name, float(v), args.energy, cfg) for v in sweep.values()]
    results = _run_jobs(_scatter_point, jobs, args.jobs)
    rows = []
    for value, T, R, note in results:
        if note:
            warn(note)
        rows.append((value, T, R, T + R))
    write_csv(args.output, ["sweep_value", "T", "R", "T_plus_R"], rows)
    return EXIT_OK


def cmd_bound(args):
    cfg = load_run_config(args)
    try:
        spectrum = bound.scan_spectrum(cfg.params, cfg.mass, cfg.units, cfg.settings)
    except NoBracketError as exc:
        warn(f"no bound states found: {exc}")
        write_csv(args.output, ["n", "parity", "E_n", "residual", "nodes"], [])
        return EXIT_OK
    if not len(spectrum):
        warn("potential is nowhere negative; no bound states")
    rows = [(s.index, s.parity, s.energy, s.condition_residual, s.nodes) for s in spectrum]
    write_csv(args.output, ["n", "parity", "E_n", "residual", "nodes"], rows)
    return EXIT_OK


def cmd_wavefunction(args):
    cfg = load_run_config(args)
    spectrum = bound.scan_spectrum(cfg.params, cfg.mass, cfg.units, cfg.settings,
                                   with_nodes=False)
    if not 0 <= args.state < len(spectrum):
        raise ConfigError(f"--state {args.state} out of range: the spectrum has "
                          f"{len(spectrum)} states")
    xs = parse_xrange(args.xrange)
    phi = bound.wavefunction_grid(spectrum[args.state], xs, cfg.params, cfg.mass,
                                  cfg.units, cfg.settings)
    write_csv(args.output, ["x", "phi"], zip(xs, phi))
    return EXIT_OK


VERIFY_SUITES = {
    "scatter": lambda cfg: checks.scatter_checks(cfg.params, cfg.mass, cfg.units, cfg.settings),
    "bound": lambda cfg: checks.bound_checks(cfg.params, cfg.mass, cfg.units, cfg.settings),
    "special": lambda cfg: checks.special_checks(),
}


def cmd_verify(args):
    cfg = load_run_config(args)
    results = VERIFY_SUITES[args.mode](cfg)
    for c in results:
        status = "ok" if c.passed else "FAIL"
        print(f"[{status:>4}] {c.name}: {c.value:.3e} (tol {c.tolerance:.1e})",
              file=sys.stderr)
    write_csv(args.output, ["check", "value", "tolerance", "passed"],
              [(c.name, c.value, c.tolerance, str(c.passed).lower()) for c in results])
    return EXIT_OK if all(c.passed for c in results) else EXIT_VERIFY


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kgwoods",
        description="Klein-Gordon scattering and bound states in a q-deformed "
                    "Woods-Saxon potential.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value parameter file (default: the "
                                        "built-in barrier configuration)")
        p.add_argument("--mass", type=float, help="particle mass (default: config, else 2)")
        p.add_argument("--output", default="-", help="output file, '-' for stdout")
        return p

    p = common(sub.add_parser("potential", help="tabulate V(x)"))
    p.add_argument("--xrange", default=DEFAULT_XRANGE, help="a:b:n grid")
    p.set_defaults(func=cmd_potential)

    p = common(sub.add_parser("scatter", help="T and R along a sweep"))
    p.add_argument("--sweep", help="name=start:stop:step; name is 'energy' or a parameter")
    p.add_argument("--energy", type=float, help="fixed energy for parameter sweeps")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    p.set_defaults(func=cmd_scatter)

    p = common(sub.add_parser("bound", help="bound-state spectrum"))
    p.set_defaults(func=cmd_bound)

    p = common(sub.add_parser("wavefunction", help="unnormalised eigenfunction"))
    p.add_argument("--state", type=int, required=True, help="state index n")
    p.add_argument("--xrange", default=DEFAULT_XRANGE, help="a:b:n grid")
    p.set_defaults(func=cmd_wavefunction)

    p = common(sub.add_parser("verify", help="oracle and identity checks"))
    p.add_argument("mode", choices=sorted(VERIFY_SUITES))
    p.add_argument("--corrupt-branch", action="store_true",
                   help="debug: use literal principal powers of t0 (negative control)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        warn(f"config error: {exc}")
        return EXIT_CONFIG
    except (KGWoodsError, ArithmeticError, ValueError) as exc:
        warn(f"{type(exc).__name__}: {exc}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
