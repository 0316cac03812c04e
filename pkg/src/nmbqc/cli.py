"""Command-line front end: table/curve data files and the verification run.

Every command writes plain data (CSV by default, JSON on request) whose
first lines are ``#`` comments echoing the parameters and tool version.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, kernels
from .channels import ADParams, PDParams, ad_p, pd_L
from .closedform import closed_form_average
from .fidelity import (
    average_gate_fidelity,
    cluster_fidelity_curve,
    resource_gate_fidelity,
    stddev_map,
)
from .grid import SCHEMES, BlochGrid, grid_kets
from .mbqc import BranchConvention, GateKind, MeasurementSchedule, ResourceKind, gate_fidelities
from .reference import GATE_TABLE, RESOURCE_TABLE, TABLE_TOL

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3

EQUIVALENCE_TOL = 1e-10
MEMORY_TAUS = (30.0, 10.0, 5.0, 2.0)

GATE_CODES = sorted(GATE_TABLE)
RESOURCE_CODES = sorted(RESOURCE_TABLE)

CODE_HELP = """\
measurement-time codes (times in channel units):
  code   amplitude damping (pi/d)   dephasing (pi)
  1      2                          1      (t = pi)
  2      3                          1.5    (t = 3pi/2)
  3      4                          2      (t = 2pi)
  with d = sqrt(2*gamma0*lambda - lambda^2)

--schedule takes codes joined by '-' (1-2-2-2) or explicit times in
channel units joined by ',' (2,3,3,3.5). Gate commands take four entries,
resource commands three.

config file: one 'key = value' per line, '#' starts a comment; keys are
the long flag names with '-' or '_'. Flags override the file, the file
overrides defaults.

exit codes: 0 ok, 1 verification failure, 2 argument error, 3 I/O error
"""

DEFAULTS = {
    "channel": "ad",
    "lambda": 1e-3,
    "gamma0": 10.0,
    "a": 1.0,
    "tau": 30.0,
    "gate": "x",
    "schedule": None,
    "grid": "101x100",
    "scheme": "angles",
    "branch_convention": "weighted",
    "out": "-",
    "format": "csv",
    "method": None,
    "t_max": None,
    "t_step": None,
    "noiseless": False,
}

_FLOAT_KEYS = {"lambda", "gamma0", "a", "tau", "t_max", "t_step"}
_CHOICES = {
    "channel": ("ad", "pd"),
    "gate": ("x", "z"),
    "scheme": SCHEMES,
    "branch_convention": ("weighted", "uniform"),
    "format": ("csv", "json"),
    "method": ("closed", "simulate"),
}


class UsageError(ValueError):
    """Bad flag or config value; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    channel: str
    ad: ADParams
    pd: PDParams
    gate: str
    schedule: str | None
    grid: BlochGrid
    convention: BranchConvention
    out: str
    format: str
    method: str | None
    t_max: float | None
    t_step: float | None
    noiseless: bool
    explicit: frozenset = field(default=frozenset(), repr=False)  # keys set by flag or file

    @property
    def params(self):
        return self.ad if self.channel == "ad" else self.pd

    def echo(self) -> dict:
        return {
            "lambda": self.ad.lam,
            "gamma0": self.ad.gamma0,
            "a": self.pd.a,
            "tau": self.pd.tau,
            "grid": f"{self.grid.theta_count}x{self.grid.phi_count}",
            "scheme": self.grid.scheme,
            "branch_convention": self.convention.value,
        }


# config handling


def read_config(path: str) -> dict:
    """Parse a flat ``key = value`` file into raw strings."""
    out = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _convert(key: str, value):
    if value is None:
        return None
    if key in _FLOAT_KEYS:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise UsageError(f"{key}: not a number: {value!r}") from None
    if key == "noiseless":
        if isinstance(value, bool):
            return value
        return str(value).strip().lower() in ("1", "true", "yes", "on")
    value = str(value)
    if key in _CHOICES and value not in _CHOICES[key]:
        raise UsageError(f"{key}: expected one of {_CHOICES[key]}, got {value!r}")
    return value


def parse_grid(text: str, scheme: str) -> BlochGrid:
    try:
        nt, np_ = (int(s) for s in text.lower().split("x"))
        return BlochGrid(nt, np_, scheme)
    except ValueError as exc:
        raise UsageError(f"grid: expected <n_theta>x<n_phi>, got {text!r} ({exc})") from None


def build_config(args: argparse.Namespace) -> RunConfig:
    file_values = read_config(args.config) if getattr(args, "config", None) else {}
    merged = {}
    explicit = set(file_values)
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            merged[key] = _convert(key, flag)
            explicit.add(key)
        elif key in file_values:
            merged[key] = _convert(key, file_values[key])
        else:
            merged[key] = default
    try:
        ad = ADParams(lam=merged["lambda"], gamma0=merged["gamma0"])
        pd = PDParams(a=merged["a"], tau=merged["tau"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(
        channel=merged["channel"],
        ad=ad,
        pd=pd,
        gate=merged["gate"],
        schedule=merged["schedule"],
        grid=parse_grid(merged["grid"], merged["scheme"]),
        convention=BranchConvention(merged["branch_convention"]),
        out=merged["out"],
        format=merged["format"],
        method=merged["method"],
        t_max=merged["t_max"],
        t_step=merged["t_step"],
        noiseless=merged["noiseless"],
        explicit=frozenset(explicit),
    )


def parse_schedule(text: str, channel, length: int) -> MeasurementSchedule:
    """Codes ``1-2-2-2`` or times in channel units ``2,3,3,3.5``."""
    try:
        if "," in text or "." in text:
            times = [float(s) * channel.time_unit for s in text.split(",")]
            sched = MeasurementSchedule(tuple(times))
        else:
            sched = MeasurementSchedule.from_codes([int(s) for s in text.split("-")], channel)
    except ValueError as exc:
        raise UsageError(f"schedule {text!r}: {exc}") from None
    if len(sched.times) != length:
        raise UsageError(f"schedule {text!r}: expected {length} entries")
    return sched


def parse_codes(text: str, length: int) -> tuple[int, ...]:
    try:
        codes = tuple(int(s) for s in text.split("-"))
    except ValueError:
        raise UsageError(f"schedule {text!r}: table commands take codes like 1-2-2-2") from None
    if len(codes) != length or any(c not in (1, 2, 3) for c in codes):
        raise UsageError(f"schedule {text!r}: expected {length} codes from {{1,2,3}}")
    return codes


def code_label(codes: Sequence[int]) -> str:
    return "-".join(str(c) for c in codes)


# output


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render(command: str, cfg: RunConfig, extra: dict, columns, rows, fmt: str) -> str:
    header = {"tool": f"nmbqc {__version__}", "command": command, **cfg.echo(), **extra}
    if fmt == "json":
        payload = {"header": header, "columns": list(columns), "rows": [list(r) for r in rows]}
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    for key, value in header.items():
        buf.write(f"# {key}={_fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    p = Path(path)
    if p.parent and not p.parent.exists():
        raise OSError(f"directory does not exist: {p.parent}")
    p.write_text(text)


def companion_path(path: str, suffix: str, ext: str | None = None) -> str:
    p = Path(path)
    return str(p.with_name(p.stem + suffix + (ext if ext is not None else p.suffix)))


def time_samples(t_max: float, t_step: float, unit: float) -> np.ndarray:
    if t_step <= 0 or t_max < 0:
        raise UsageError("need t_step > 0 and t_max >= 0")
    count = int(math.floor(t_max / t_step + 1e-9)) + 1
    return np.arange(count) * t_step * unit


# commands


def cmd_cluster_curve(cfg: RunConfig) -> int:
    channel = cfg.params
    t_max = cfg.t_max if cfg.t_max is not None else (6.0 if cfg.channel == "ad" else 3.0)
    t_step = cfg.t_step if cfg.t_step is not None else 0.02
    times = time_samples(t_max, t_step, channel.time_unit)
    values = cluster_fidelity_curve(times, channel, cfg.grid)
    rows = [(float(t), float(f)) for t, f in zip(times, values)]
    extra = {"channel": cfg.channel, "t_max_units": t_max, "t_step_units": t_step, "time_unit": channel.time_unit}
    write_output(cfg.out, render("cluster-curve", cfg, extra, ("t", "fidelity"), rows, cfg.format))
    return EXIT_OK


def _gate_value(codes, channel, cfg: RunConfig, method: str) -> float:
    sched = MeasurementSchedule.from_codes(codes, channel)
    if method == "closed":
        return closed_form_average(channel, sched, cfg.grid)
    return average_gate_fidelity(GateKind(cfg.gate), channel, sched, cfg.grid, convention=cfg.convention).value


def _table_rows(values_ad, values_pd, codes_list):
    return [
        (code_label(c), f"{fa:.3f}", f"{fp:.3f}", fa, fp) for c, fa, fp in zip(codes_list, values_ad, values_pd)
    ]


TABLE_COLUMNS = ("code", "fidelity_ad", "fidelity_pd", "fidelity_ad_raw", "fidelity_pd_raw")


def cmd_gate_table(cfg: RunConfig) -> int:
    method = cfg.method or "closed"
    codes_list = [parse_codes(cfg.schedule, 4)] if cfg.schedule else GATE_CODES
    ad = [_gate_value(c, cfg.ad, cfg, method) for c in codes_list]
    pd = [_gate_value(c, cfg.pd, cfg, method) for c in codes_list]
    extra = {"gate": cfg.gate, "method": method}
    write_output(cfg.out, render("gate-table", cfg, extra, TABLE_COLUMNS, _table_rows(ad, pd, codes_list), cfg.format))
    return EXIT_OK


def cmd_resource_table(cfg: RunConfig) -> int:
    kind = ResourceKind(cfg.gate)
    codes_list = [parse_codes(cfg.schedule, 3)] if cfg.schedule else RESOURCE_CODES

    def value(codes, channel):
        sched = MeasurementSchedule.from_codes(codes, channel)
        return resource_gate_fidelity(kind, channel, sched, convention=cfg.convention).value

    ad = [value(c, cfg.ad) for c in codes_list]
    pd = [value(c, cfg.pd) for c in codes_list]
    extra = {"resource": kind.value}
    write_output(cfg.out, render("resource-table", cfg, extra, TABLE_COLUMNS, _table_rows(ad, pd, codes_list), cfg.format))
    return EXIT_OK


def cmd_memory_curves(cfg: RunConfig) -> int:
    t_max = cfg.t_max if cfg.t_max is not None else 4.0
    t_step = cfg.t_step if cfg.t_step is not None else 0.005
    times = time_samples(t_max, t_step, math.pi)
    curves = [PDParams(a=cfg.pd.a, tau=tau) for tau in MEMORY_TAUS]
    columns = ("t",) + tuple(f"L_tau{tau:g}" for tau in MEMORY_TAUS)
    rows = [(float(t),) + tuple(pd_L(float(t), c) for c in curves) for t in times]
    extra = {"t_max_units": t_max, "t_step_units": t_step, "time_unit": math.pi}
    write_output(cfg.out, render("memory-curves", cfg, extra, columns, rows, cfg.format))
    if cfg.out != "-":
        ad_times = time_samples(t_max * 1.5, t_step * 1.5, cfg.ad.time_unit)
        p_rows = [(float(t), ad_p(float(t), cfg.ad)) for t in ad_times]
        p_extra = {"t_max_units": t_max * 1.5, "t_step_units": t_step * 1.5, "time_unit": cfg.ad.time_unit}
        write_output(companion_path(cfg.out, "_p"), render("memory-curves", cfg, p_extra, ("t", "p"), p_rows, cfg.format))
    return EXIT_OK


def cmd_stddev_map(cfg: RunConfig) -> int:
    # defaults differ from the other commands: dephasing, 1-2-2-2
    channel_name = cfg.channel if "channel" in cfg.explicit else "pd"
    channel = cfg.ad if channel_name == "ad" else cfg.pd
    sched = parse_schedule(cfg.schedule or "1-2-2-2", channel, 4)
    method = cfg.method or "simulate"
    rep = stddev_map(GateKind(cfg.gate), channel, sched, cfg.grid, method=method, convention=cfg.convention)
    dev = np.abs(rep.per_state - rep.value)
    rows = [(float(t), float(p), float(f), float(d)) for t, p, f, d in zip(rep.theta, rep.phi, rep.per_state, dev)]
    summary = {
        "mean": rep.value,
        "std_dev": rep.std_dev,
        "max_dev": rep.max_dev,
        "mean_abs_dev": rep.mean_abs_dev,
        "count": len(rows),
    }
    extra = {"channel": channel_name, "gate": cfg.gate, "schedule": list(sched.times), "method": method}
    columns = ("theta", "phi", "fidelity", "abs_deviation")
    text = render("stddev-map", cfg, {**extra, **{f"summary_{k}": v for k, v in summary.items()}}, columns, rows, cfg.format)
    write_output(cfg.out, text)
    summary_text = json.dumps({"tool": f"nmbqc {__version__}", **extra, **summary}, indent=1) + "\n"
    if cfg.out == "-":
        sys.stderr.write(summary_text)
    else:
        write_output(companion_path(cfg.out, ".summary", ".json"), summary_text)
    return EXIT_OK


def run_verify(cfg: RunConfig) -> tuple[bool, str]:
    """Simulation against closed form on every table schedule; returns (ok, report)."""
    lines = [f"# nmbqc {__version__} verify", f"# grid={cfg.grid.theta_count}x{cfg.grid.phi_count} scheme={cfg.grid.scheme}"]
    lines.append(f"# branch_convention={cfg.convention.value} noiseless={cfg.noiseless}")
    kets = grid_kets(cfg.grid)
    max_diff = 0.0
    ok = True
    for name, channel, col in (("ad", cfg.ad, 0), ("pd", cfg.pd, 1)):
        for codes in GATE_CODES:
            times = (0.0,) * 4 if cfg.noiseless else MeasurementSchedule.from_codes(codes, channel).times
            label = f"{name} {code_label(codes)}"
            try:
                sched = MeasurementSchedule(times)
                closed = closed_form_average(channel, sched, cfg.grid)
                sims = [
                    float(np.mean(gate_fidelities(kets, gate, channel, sched, cfg.convention))) for gate in GateKind
                ]
            except (ArithmeticError, ValueError) as exc:
                lines.append(f"FAIL {label}: {type(exc).__name__}: {exc}")
                ok = False
                continue
            diff = max(abs(s - closed) for s in sims)
            row_ok = diff <= EQUIVALENCE_TOL
            if math.isnan(diff):
                row_ok = False
            else:
                max_diff = max(max_diff, diff)
            ref = 1.0 if cfg.noiseless else GATE_TABLE[codes][col]
            table_ok = abs(closed - ref) <= TABLE_TOL
            row_ok = row_ok and table_ok
            ok = ok and row_ok
            lines.append(
                f"{'ok  ' if row_ok else 'FAIL'} {label}: closed={closed:.12f} sim_x={sims[0]:.12f} "
                f"sim_z={sims[1]:.12f} diff={diff:.3e} ref={ref:.3f}"
            )
    lines.append(f"max discrepancy: {max_diff:.3e} (tolerance {EQUIVALENCE_TOL:.0e})")
    lines.append("verify: " + ("PASS" if ok else "FAIL"))
    return ok, "\n".join(lines) + "\n"


def cmd_verify(cfg: RunConfig) -> int:
    ok, report = run_verify(cfg)
    sys.stdout.write(report)
    if cfg.out != "-":
        write_output(cfg.out, report)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "cluster-curve": (cmd_cluster_curve, "grid-averaged fidelity of the decaying cluster state vs time"),
    "gate-table": (cmd_gate_table, "average gate fidelity for all 15 four-code schedules"),
    "resource-table": (cmd_resource_table, "resource gate fidelity for all 10 three-code schedules"),
    "memory-curves": (cmd_memory_curves, "L(t) for tau in 30, 10, 5, 2 (plus p(t) companion file)"),
    "stddev-map": (cmd_stddev_map, "per-input fidelity surface and deviation statistics"),
    "verify": (cmd_verify, "simulation vs closed form on every table schedule"),
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--channel", choices=_CHOICES["channel"])
    shared.add_argument("--lambda", dest="lambda", type=float, help="bath linewidth (default 1e-3)")
    shared.add_argument("--gamma0", type=float, help="system rate (default 10)")
    shared.add_argument("--a", type=float, help="dephasing coupling (default 1)")
    shared.add_argument("--tau", type=float, help="dephasing time scale (default 30)")
    shared.add_argument("--gate", choices=_CHOICES["gate"], help="gate or resource kind (default x)")
    shared.add_argument("--schedule", help="codes 1-2-2-2 or times in channel units 2,3,3,4")
    shared.add_argument("--grid", help="Bloch grid <n_theta>x<n_phi> (default 101x100)")
    shared.add_argument("--scheme", choices=SCHEMES)
    shared.add_argument("--branch-convention", dest="branch_convention", choices=_CHOICES["branch_convention"])
    shared.add_argument("--method", choices=_CHOICES["method"], help="closed form or full simulation")
    shared.add_argument("--t-max", dest="t_max", type=float, help="end of time range in channel units")
    shared.add_argument("--t-step", dest="t_step", type=float, help="time step in channel units")
    shared.add_argument("--out", help="output path, '-' for stdout (default)")
    shared.add_argument("--format", choices=_CHOICES["format"])
    shared.add_argument("--config", help="flat key = value file")

    parser = argparse.ArgumentParser(
        prog="nmbqc",
        description="Five-qubit cluster MBQC under non-Markovian noise.",
        epilog=CODE_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"nmbqc {__version__} ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(
            name, parents=[shared], help=help_text, description=help_text,
            epilog=CODE_HELP, formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        if name == "verify":
            p.add_argument("--noiseless", action="store_true", help="all measurement times zero; rows must be 1")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        func = COMMANDS[args.command][0]
        return func(cfg)
    except UsageError as exc:
        print(f"nmbqc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nmbqc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"nmbqc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
