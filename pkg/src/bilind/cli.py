"""Command-line interface: simulate, reproduce, steady, validate.

Exit codes: 0 ok, 2 configuration error, 3 integration divergence,
4 degenerate steady state.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    BilindError,
    ConfigError,
    DegenerateSteadyStateError,
    IntegrationDivergedError,
)
from .evolve import TimeGrid, Trajectory, build_generator, occupation_observables, run_scenario
from .models import BathSpec, SystemSpec
from .svgplot import Series, line_chart
from .validation import run_oracle_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_DEGENERATE = 4

# Explicit Liouvillians (steady-state solves) are capped at composite dim 64.
STEADY_MAX_FOCK = {"oo": 8, "qo": 32}

FIGURES = {
    "4a": ("qq", 0.0),
    "4b": ("qq", 2.0),
    "5a": ("oo", 0.0),
    "5b": ("oo", 2.0),
    "6a": ("qo", 0.0),
    "6b": ("qo", 2.0),
}

OBS_DESCRIPTIONS = {
    "qq": ("excited-state population of qubit 1", "excited-state population of qubit 2"),
    "oo": ("mean occupation of oscillator a", "mean occupation of oscillator b"),
    "qo": ("mean occupation of the cavity", "excited-state population of the qubit"),
}

# curve styling for reproduce: RWA pair then full pair
FIGURE_STYLES = (
    ("red", ""),            # RWA, first observable: red solid
    ("black", "8 3 2 3"),   # RWA, second observable: black dot-dashed
    ("blue", ""),           # full, first observable: blue solid
    ("green", "7 4"),       # full, second observable: green dashed
)


@dataclass
class ScenarioConfig:
    """Flat run configuration; defaults are the published scenario parameters."""

    system: str = ""
    rwa: bool = False
    omega1: float = 1.0
    omega2: float = 1.0
    g: float = 0.2
    gamma: float = 0.01
    kappa: float = 0.01
    temperature: float = 0.0
    nbar: str = "bose"
    fock_dim: int = 20
    tmax: float = 50.0
    dt: float = 0.01
    out: str = "simulation.csv"
    svg: str = ""

    def system_spec(self) -> SystemSpec:
        if not self.system:
            raise ConfigError("no system selected (use --system or a config file)")
        return SystemSpec(
            system=self.system,
            omega1=self.omega1,
            omega2=self.omega2,
            g=self.g,
            rwa=self.rwa,
            fock_dim=self.fock_dim,
        )

    def bath_spec(self) -> BathSpec:
        return BathSpec(
            gamma=self.gamma,
            kappa=self.kappa,
            temperature=self.temperature,
            nbar_mapping=self.nbar,
        )

    def grid(self) -> TimeGrid:
        return TimeGrid(self.tmax, self.dt)


_BOOL_STRINGS = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def parse_config_file(path: str) -> dict:
    """Read a flat ``key = value`` file into typed config entries."""
    fields = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}
    defaults = ScenarioConfig()
    values: dict = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in fields:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        current = getattr(defaults, key)
        try:
            if isinstance(current, bool):
                values[key] = _BOOL_STRINGS[val.lower()]
            elif isinstance(current, int):
                values[key] = int(val)
            elif isinstance(current, float):
                values[key] = float(val)
            else:
                values[key] = val
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {val!r}") from exc
    return values


def merge_config(args: argparse.Namespace) -> ScenarioConfig:
    """Defaults, overridden by a config file, overridden by explicit flags."""
    values: dict = {}
    if getattr(args, "config", None):
        values.update(parse_config_file(args.config))
    for f in dataclasses.fields(ScenarioConfig):
        flag_val = getattr(args, f.name, None)
        if flag_val is not None:
            values[f.name] = flag_val
    try:
        return ScenarioConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def config_echo_lines(config: ScenarioConfig) -> list[str]:
    lines = [f"# bilind {__version__}"]
    for f in dataclasses.fields(ScenarioConfig):
        if f.name in ("out", "svg"):
            continue
        lines.append(f"# {f.name} = {getattr(config, f.name)}")
    n1_desc, n2_desc = OBS_DESCRIPTIONS[config.system]
    lines.append(f"# n1 = {n1_desc}")
    lines.append(f"# n2 = {n2_desc}")
    return lines


def write_trajectory_csv(path: str, traj: Trajectory, config: ScenarioConfig) -> None:
    names = list(traj.values)
    with open(path, "w", newline="\n") as fh:
        for line in config_echo_lines(config):
            fh.write(line + "\n")
        fh.write("t," + ",".join(names) + "\n")
        columns = [traj.values[name] for name in names]
        for i, t in enumerate(traj.times):
            row = [f"{t:.9g}"] + [f"{col[i]:.9g}" for col in columns]
            fh.write(",".join(row) + "\n")


def read_trajectory_csv(path: str) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Parse a file written by :func:`write_trajectory_csv`."""
    rows = []
    header: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if not header:
                header = line.split(",")
                continue
            rows.append([float(v) for v in line.split(",")])
    data = np.asarray(rows)
    return data[:, 0], {name: data[:, k + 1] for k, name in enumerate(header[1:])}


def trajectory_svg(path: str, runs: list[tuple[str, Trajectory]], title: str, system: str) -> None:
    series = []
    for idx, (label_prefix, traj) in enumerate(runs):
        for jdx, (name, vals) in enumerate(traj.values.items()):
            color, dash = FIGURE_STYLES[(2 * idx + jdx) % len(FIGURE_STYLES)]
            series.append(
                Series(
                    label=f"{label_prefix} {name}",
                    x=traj.times,
                    y=vals,
                    color=color,
                    dasharray=dash,
                )
            )
    ylabel = "occupation"
    svg = line_chart(series, title=title, xlabel="t", ylabel=ylabel)
    with open(path, "w", newline="\n") as fh:
        fh.write(svg)


def cmd_simulate(args: argparse.Namespace) -> int:
    config = merge_config(args)
    traj = run_scenario(config.system_spec(), config.bath_spec(), config.grid())
    write_trajectory_csv(config.out, traj, config)
    print(f"wrote {config.out}")
    if config.svg:
        label = "RWA" if config.rwa else "full"
        trajectory_svg(config.svg, [(label, traj)], f"{config.system} dynamics", config.system)
        print(f"wrote {config.svg}")
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    figure = args.figure
    system, temperature = FIGURES[figure]
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    runs = []
    for rwa in (True, False):
        config = ScenarioConfig(
            system=system, rwa=rwa, temperature=temperature, nbar="direct"
        )
        traj = run_scenario(config.system_spec(), config.bath_spec(), config.grid())
        suffix = "rwa" if rwa else "full"
        csv_path = outdir / f"fig{figure}_{suffix}.csv"
        write_trajectory_csv(str(csv_path), traj, config)
        print(f"wrote {csv_path}")
        runs.append(("RWA" if rwa else "full", traj))
    svg_path = outdir / f"fig{figure}.svg"
    title = f"{system} occupation, T = {temperature:g}"
    trajectory_svg(str(svg_path), runs, title, system)
    print(f"wrote {svg_path}")
    return EXIT_OK


def cmd_steady(args: argparse.Namespace) -> int:
    config = merge_config(args)
    cap = STEADY_MAX_FOCK.get(config.system)
    if cap is not None and config.fock_dim > cap:
        print(
            f"steady: reducing fock_dim {config.fock_dim} -> {cap} to keep the "
            "explicit Liouvillian tractable",
            file=sys.stderr,
        )
        config = dataclasses.replace(config, fock_dim=cap)
    spec = config.system_spec()
    gen = build_generator(spec, config.bath_spec())
    rho_ss = gen.steady_state()
    for line in config_echo_lines(config):
        print(line)
    for obs in occupation_observables(spec):
        val = float(np.einsum("ij,ji->", obs.operator, rho_ss).real)
        print(f"{obs.name} = {val:.9g}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    report = run_oracle_suite(dt=args.dt, t_end=args.tmax)
    print(report.format())
    return EXIT_OK if report.all_passed else 1


def _add_scenario_flags(parser: argparse.ArgumentParser, include_output: bool) -> None:
    parser.add_argument("--system", choices=("qq", "oo", "qo"), default=None)
    parser.add_argument("--rwa", action=argparse.BooleanOptionalAction, default=None)
    parser.add_argument("--omega1", type=float, default=None, help="slot-one frequency")
    parser.add_argument("--omega2", type=float, default=None, help="slot-two frequency")
    parser.add_argument("--g", type=float, default=None, help="coupling constant")
    parser.add_argument("--gamma", type=float, default=None)
    parser.add_argument("--kappa", type=float, default=None)
    parser.add_argument("--temp", dest="temperature", type=float, default=None)
    parser.add_argument("--nbar", dest="nbar", choices=("bose", "direct"), default=None)
    parser.add_argument("--fock-dim", dest="fock_dim", type=int, default=None)
    parser.add_argument("--tmax", type=float, default=None)
    parser.add_argument("--dt", type=float, default=None)
    parser.add_argument("--config", default=None, help="flat key = value file; flags win")
    if include_output:
        parser.add_argument("--out", default=None, help="CSV output path")
        parser.add_argument("--svg", default=None, help="also write an SVG chart here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilind",
        description="Open (Lindblad) dynamics of bipartite quantum systems",
    )
    parser.add_argument("--version", action="version", version=f"bilind {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate one scenario and write CSV")
    _add_scenario_flags(p_sim, include_output=True)
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("reproduce", help="run a preset scenario pair (RWA + full)")
    p_rep.add_argument("figure", choices=sorted(FIGURES))
    p_rep.add_argument("--outdir", default=".")
    p_rep.set_defaults(func=cmd_reproduce)

    p_std = sub.add_parser("steady", help="print steady-state observables")
    _add_scenario_flags(p_std, include_output=False)
    p_std.set_defaults(func=cmd_steady)

    p_val = sub.add_parser("validate", help="run the oracle/invariant suite")
    p_val.add_argument("--dt", type=float, default=0.01)
    p_val.add_argument("--tmax", type=float, default=50.0)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationDivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except DegenerateSteadyStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except BilindError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())
