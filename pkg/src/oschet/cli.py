"""Command line driver.

Subcommands:

  solve-heteroclinic   minimize a windowed discrete connection, JSON report
  shoot                bisection shooting for the lattice connection, JSON report
  solve-dirichlet      sample the explicit D_r Dirichlet solution, CSV or JSON
  converge-study       lattice-to-continuum error table, JSON
  bounds               explicit energy upper bounds, JSON
  validate-potential   grid checks of the double-well hypotheses, JSON

Exit codes: 0 success, 1 unknown subcommand, 2 precondition or domain
error (including bad flag values), 3 non-convergence.

A --config FILE of key=value lines supplies defaults for any long flag
of the chosen subcommand; explicit flags win.  Relative --out paths are
resolved against $OSCHET_OUT_DIR when that variable is set.  Output is
deterministic: the same invocation writes identical bytes.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import asymptotics, dirichlet, heteroclinic, potential
from .errors import (
    ConvergenceError,
    DomainError,
    NoBracketError,
    PreconditionError,
    UnsupportedOperationError,
)

__all__ = ["RunConfig", "run", "main"]

USAGE = """\
usage: oschet SUBCOMMAND [options]

subcommands:
  solve-heteroclinic   minimize a windowed discrete connection (JSON report)
  shoot                shooting method for the lattice connection (JSON report)
  solve-dirichlet      explicit nonlocal Dirichlet solution (CSV or JSON)
  converge-study       error table against the classical profile (JSON)
  bounds               explicit energy upper bounds (JSON)
  validate-potential   double-well hypothesis checks (JSON)

run 'oschet SUBCOMMAND --help' for the options of one subcommand.
"""


@dataclass
class RunConfig:
    """One parsed invocation: subcommand, its options, and the output sink."""

    subcommand: str
    options: argparse.Namespace
    out: Optional[Path] = None


def _parse(p: argparse.ArgumentParser, cmd: str, argv: list) -> RunConfig:
    """Apply --config defaults, parse flags, and resolve the output sink."""
    _apply_config(p, argv)
    args = p.parse_args(argv)
    return RunConfig(subcommand=cmd, options=args, out=_resolve_out(args.out))


def _make_potential(name: str) -> potential.DoubleWell:
    if name == "quartic":
        return potential.quartic()
    if name == "pendulum":
        return potential.pendulum()
    raise PreconditionError(f"unknown potential {name!r}; choose quartic or pendulum")


def _resolve_out(out: str) -> Optional[Path]:
    if out == "-":
        return None
    path = Path(out)
    env_dir = os.environ.get("OSCHET_OUT_DIR")
    if env_dir and not path.is_absolute():
        path = Path(env_dir) / path
    return path


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _json_line(obj) -> str:
    return json.dumps(obj) + "\n"


def _load_config(path: str) -> dict:
    cfg = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise PreconditionError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise PreconditionError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        cfg[key.strip()] = value.strip()
    return cfg


def _apply_config(parser: argparse.ArgumentParser, argv: list) -> None:
    if "--config" not in argv:
        return
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise PreconditionError("--config needs a file path")
    cfg = _load_config(argv[i + 1])
    actions = {a.dest: a for a in parser._actions}
    for key, raw in cfg.items():
        dest = key.replace("-", "_")
        action = actions.get(dest)
        if action is None or dest in ("help", "config"):
            raise PreconditionError(f"config key {key!r} is not an option here")
        try:
            value = action.type(raw) if action.type else raw
        except (TypeError, ValueError) as exc:
            raise PreconditionError(f"config key {key!r}: bad value {raw!r}") from exc
        if action.choices and value not in action.choices:
            raise PreconditionError(
                f"config key {key!r}: {value!r} not in {sorted(action.choices)}"
            )
        parser.set_defaults(**{dest: value})
        # A required option satisfied by the config no longer has to
        # appear on the command line (flags still override the default).
        action.required = False


def _parser(cmd: str, description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=f"oschet {cmd}", description=description)
    p.add_argument("--config", type=str, default=None, help="key=value defaults file")
    p.add_argument("--out", type=str, default="-", help="output path, '-' for stdout")
    return p


def _profile_report(K: int, r: float, kind: str, prof, value, res, converged) -> dict:
    return {
        "K": int(K),
        "r": float(r),
        "potential": kind,
        "value": float(value),
        "el_residual": float(res),
        "values": [float(v) for v in prof.values],
        "symmetry": prof.symmetry,
        "converged": bool(converged),
    }


def _cmd_solve_heteroclinic(argv: list) -> int:
    p = _parser("solve-heteroclinic", "minimize a windowed discrete connection")
    p.add_argument("--K", type=int, required=True, help="number of free plateaus")
    p.add_argument("--r", type=float, required=True, help="interaction range")
    p.add_argument("--potential", type=str, default="quartic", choices=["quartic", "pendulum"])
    p.add_argument(
        "--symmetry",
        type=str,
        default="none",
        choices=["none", "node", "bond"],
        help="none: pinned ends; node/bond: odd symmetric problems",
    )
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=100_000)
    p.add_argument("--multistart", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    cfg = _parse(p, "solve-heteroclinic", argv)
    args = cfg.options
    W = _make_potential(args.potential)
    opts = heteroclinic.SolverOptions(
        tol=args.tol, max_iters=args.max_iters, multistart=args.multistart, seed=args.seed
    )
    solver = {
        "none": heteroclinic.solve_discrete_dirichlet,
        "node": heteroclinic.solve_symmetric_node,
        "bond": heteroclinic.solve_symmetric_bond,
    }[args.symmetry]
    report = solver(args.K, args.r, W, opts)
    obj = _profile_report(
        args.K, args.r, args.potential, report.minimizer,
        report.value, report.el_residual, report.converged,
    )
    _emit(_json_line(obj), cfg.out)
    return 0 if report.converged else 3


def _cmd_shoot(argv: list) -> int:
    p = _parser("shoot", "shooting method for the lattice connection")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--potential", type=str, default="quartic", choices=["quartic", "pendulum"])
    p.add_argument("--symmetry", type=str, default="node", choices=["node", "bond"])
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--horizon", type=int, default=1000)
    cfg = _parse(p, "shoot", argv)
    args = cfg.options
    W = _make_potential(args.potential)
    prof = heteroclinic.shoot_heteroclinic(
        args.r, W, symmetry=args.symmetry + "_odd", tol=args.tol, horizon=args.horizon
    )
    value = heteroclinic.discrete_energy(prof, W, prof.n_min - 1, prof.n_max)
    res = heteroclinic.el_residual(prof, W)
    obj = _profile_report(prof.n_max, args.r, args.potential, prof, value, res, True)
    _emit(_json_line(obj), cfg.out)
    return 0


def _cmd_solve_dirichlet(argv: list) -> int:
    p = _parser("solve-dirichlet", "explicit nonlocal Dirichlet solution")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--h", type=float, required=True, help="sample step")
    p.add_argument("--alpha-const", type=float, default=0.0, help="left collar value")
    p.add_argument("--beta-const", type=float, default=1.0, help="right collar value")
    p.add_argument("--f-const", type=float, default=0.0, help="constant source")
    p.add_argument(
        "--f-poly",
        type=str,
        default=None,
        help="comma separated c0,c1,... for f(x) = c0 + c1 x + ...; overrides --f-const",
    )
    p.add_argument("--format", type=str, default="csv", choices=["csv", "json"])
    cfg = _parse(p, "solve-dirichlet", argv)
    args = cfg.options
    if args.f_poly is not None:
        try:
            coeffs = [float(c) for c in args.f_poly.split(",")]
        except ValueError as exc:
            raise PreconditionError(f"--f-poly: bad coefficient list {args.f_poly!r}") from exc
        f = lambda x: np.polynomial.polynomial.polyval(x, coeffs)
    else:
        fc = args.f_const
        f = lambda x: fc + 0.0 * np.asarray(x, dtype=float)
    ac, bc = args.alpha_const, args.beta_const
    problem = dirichlet.DrProblem(
        a=args.a, b=args.b, r=args.r,
        alpha=lambda x: ac + 0.0 * np.asarray(x, dtype=float),
        beta=lambda x: bc + 0.0 * np.asarray(x, dtype=float),
        f=f,
    )
    sol = dirichlet.solve_dr_on_grid(problem, args.h)
    out = cfg.out
    if args.format == "json":
        xs = sol.samples.xs()
        obj = {
            "a": args.a,
            "b": args.b,
            "r": args.r,
            "h": args.h,
            "x": [float(x) for x in xs],
            "value": [float(v) for v in sol.samples.values],
            "jumps": [float(j) for j in sol.jump_points],
        }
        _emit(_json_line(obj), out)
    else:
        buf = io.StringIO()
        sol.samples.to_csv(buf)
        _emit(buf.getvalue(), out)
        if out is not None:
            sys.stdout.write(_json_line([float(j) for j in sol.jump_points]))
    return 0


def _cmd_converge_study(argv: list) -> int:
    p = _parser("converge-study", "error table against the classical profile")
    p.add_argument("--r-list", type=str, required=True, help="comma separated, decreasing")
    p.add_argument("--potential", type=str, default="quartic", choices=["quartic", "pendulum"])
    p.add_argument("--horizon", type=int, default=2000)
    cfg = _parse(p, "converge-study", argv)
    args = cfg.options
    try:
        rs = [float(r) for r in args.r_list.split(",")]
    except ValueError as exc:
        raise PreconditionError(f"--r-list: bad float list {args.r_list!r}") from exc
    W = _make_potential(args.potential)
    table = asymptotics.convergence_study(W, rs, horizon=args.horizon)
    obj = {
        "potential": args.potential,
        "rows": [
            {"r": row.r, "err": row.err, "err_aligned": row.err_aligned, "energy": row.energy}
            for row in table.rows
        ],
    }
    _emit(_json_line(obj), cfg.out)
    return 0


def _cmd_bounds(argv: list) -> int:
    p = _parser("bounds", "explicit energy upper bounds")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--potential", type=str, default="quartic", choices=["quartic", "pendulum"])
    cfg = _parse(p, "bounds", argv)
    args = cfg.options
    W = _make_potential(args.potential)
    rep = heteroclinic.energy_upper_bounds(args.r, W)
    obj = {
        "four_over_r": rep.four_over_r,
        "four_plus_cw": rep.four_plus_cw,
        "ramp": rep.ramp,
    }
    _emit(_json_line(obj), cfg.out)
    return 0


def _cmd_validate_potential(argv: list) -> int:
    p = _parser("validate-potential", "double-well hypothesis checks")
    p.add_argument("--potential", type=str, default="quartic", choices=["quartic", "pendulum"])
    p.add_argument("--grid-step", type=float, default=1e-3)
    cfg = _parse(p, "validate-potential", argv)
    args = cfg.options
    W = _make_potential(args.potential)
    report = potential.validate_double_well(W, grid_step=args.grid_step)
    obj = {
        "potential": args.potential,
        "all_passed": report.all_passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks
        ],
    }
    _emit(_json_line(obj), cfg.out)
    return 0


_COMMANDS = {
    "solve-heteroclinic": _cmd_solve_heteroclinic,
    "shoot": _cmd_shoot,
    "solve-dirichlet": _cmd_solve_dirichlet,
    "converge-study": _cmd_converge_study,
    "bounds": _cmd_bounds,
    "validate-potential": _cmd_validate_potential,
}


def run(argv) -> int:
    """Entry point used by tests and by main(); returns the exit code."""
    argv = list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(USAGE)
        return 0 if argv else 1
    cmd = argv[0]
    handler = _COMMANDS.get(cmd)
    if handler is None:
        sys.stderr.write(f"error: unknown subcommand {cmd!r}\n")
        sys.stderr.write(USAGE)
        return 1
    try:
        return handler(argv[1:])
    except SystemExit as exc:
        # argparse already printed its message; --help exits with 0
        return 0 if exc.code in (0, None) else 2
    except (PreconditionError, DomainError, UnsupportedOperationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (NoBracketError, ConvergenceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))
