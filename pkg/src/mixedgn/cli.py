"""Command-line front end: ``mixedgn solve | verify | sweep | oracle``.

Exit codes: 0 ok, 1 a verification or oracle check failed, 2 bad
parameters, 3 the solver did not converge (the report is still written),
4 file I/O problems. Every failure also prints a JSON error object on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np
import scipy

from . import __version__
from .errors import DegenerateInputError, FieldFormatError, ParameterError
from .field import GridSpec, norm_triple, synth_gaussian
from .fieldio import load_field, save_field
from .functionals import Params, cramer_dets, g3_g4
from .solver import SolverConfig, build_Q, petviashvili_solve
from .verify import (
    ZERO_MODES,
    check_identities,
    derivative_checks,
    failed_checks,
    gaussian_oracle,
    gn_sample_details,
    published_tolerances,
)

EXIT_OK, EXIT_CHECK, EXIT_PARAM, EXIT_NOCONV, EXIT_IO = 0, 1, 2, 3, 4

SWEEP_COLUMNS = ("N", "s", "p", "a", "b", "m", "c", "C_best", "nehari_res", "pohozaev_res", "iterations", "converged")

ORACLE_TOL = {"gaussian": 1e-5, "cramer": 1e-12, "dJdz": 1e-6, "gateaux": 1e-5}


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.code, self.kind, self.extra = code, kind, extra


@dataclass
class RunConfig:
    subcommand: str
    params: Params
    grid: GridSpec
    solver: SolverConfig
    seed: int = 0
    samples: int = 0
    in_path: Optional[Path] = None
    out_path: Optional[Path] = None
    report_path: Optional[Path] = None
    axis: str = "p"
    sweep_values: list = field(default_factory=list)
    timestamp: bool = True


# ------------------------------------------------------------------ helpers

def _finite_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _versions() -> dict:
    return {"mixedgn": __version__, "numpy": np.__version__, "scipy": scipy.__version__, "python": platform.python_version()}


def _schema():
    text = resources.files("mixedgn").joinpath("report_schema.json").read_text()
    return json.loads(text)


def validate_report(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` unless ``report`` matches the published schema."""
    jsonschema.validate(report, _schema())


def _identities(rep) -> dict:
    return {k: _finite_or_none(v) for k, v in rep.as_dict().items()}


def _emit_report(report: dict, cfg: RunConfig) -> None:
    if cfg.timestamp:
        report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    validate_report(report)
    text = json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if cfg.report_path is None:
        sys.stdout.write(text)
        return
    try:
        cfg.report_path.write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, "io", f"cannot write report {cfg.report_path}: {exc}") from exc


def _base(kind: str, cfg: RunConfig) -> dict:
    p = cfg.params
    return {
        "kind": kind,
        "params": {"N": p.N, "s": p.s, "p": p.p},
        "grid": {"n": cfg.grid.n, "L": cfg.grid.half_width},
        "versions": _versions(),
    }


# --------------------------------------------------------------- commands

def run_solve(cfg: RunConfig) -> int:
    params, grid = cfg.params, cfg.grid
    u, rep = petviashvili_solve(params, grid, cfg.solver)
    ident = rep.identity_report
    report = _base("solve", cfg)
    report.update(
        solver={
            "tol": cfg.solver.tol,
            "max_iter": cfg.solver.max_iter,
            "gamma": rep.gamma,
            "dealias": cfg.solver.dealias,
            "zero_mode": cfg.solver.zero_mode,
        },
        triple=dict(zip("abm", rep.final_triple.as_tuple())),
        energy_c=rep.energy_c,
        best_constant={"from_Q": _finite_or_none(ident.best_constant_from_Q), "from_c": _finite_or_none(ident.best_constant_from_c)},
        identities=_identities(ident),
        gn_sample_min=None,
        convergence={
            "iterations": rep.iterations,
            "residuals": rep.residual_history,
            "stabilizers": rep.stabilizer_history,
            "converged": rep.converged,
        },
    )
    try:
        q = build_Q(u, params)
        report["build_Q"] = {
            "lambda1": q.lambda1,
            "lambda2": q.lambda2,
            "predicted": dict(zip("abm", q.predicted.as_tuple())),
            "measured": dict(zip("abm", q.measured.as_tuple())),
            "outside_fraction": q.outside_fraction,
        }
    except (DegenerateInputError, ArithmeticError) as exc:
        report["build_Q"] = {"error": str(exc)}
    if cfg.samples > 0 and rep.converged:
        gs = gn_sample_details(rep.final_triple, params, grid, seed=cfg.seed, count=cfg.samples)
        report["gn_sample_min"] = gs.minimum
        report["gn_sample_resampled"] = gs.resampled
    if cfg.timestamp:
        report["wall_time"] = rep.wall_time
    if cfg.out_path is not None:
        try:
            save_field(u, cfg.out_path)
        except OSError as exc:
            raise CliError(EXIT_IO, "io", f"cannot write field {cfg.out_path}: {exc}") from exc
        report["field_path"] = str(cfg.out_path)
    _emit_report(report, cfg)
    if not rep.converged:
        raise CliError(
            EXIT_NOCONV,
            "not_converged",
            f"no convergence in {rep.iterations} iterations (residual {rep.residual_history[-1]:.3e})",
            report=str(cfg.report_path) if cfg.report_path else None,
        )
    return EXIT_OK


def run_verify(cfg: RunConfig) -> int:
    if cfg.in_path is None:
        raise CliError(EXIT_PARAM, "parameter", "verify needs --in FIELD", bound="--in")
    try:
        u = load_field(cfg.in_path)
    except (OSError, FieldFormatError) as exc:
        raise CliError(EXIT_IO, "io", str(exc)) from exc
    cfg.grid = u.grid
    t = norm_triple(u, cfg.params)
    ident = check_identities(t, cfg.params, u, cfg.solver.zero_mode)
    tol = published_tolerances(u.grid)
    bad = failed_checks(ident, tol)
    report = _base("verify", cfg)
    report.update(identities=_identities(ident), tolerances=tol, failed=bad, passed=not bad)
    _emit_report(report, cfg)
    return EXIT_CHECK if bad else EXIT_OK


def sweep_rows(cfg: RunConfig) -> list[dict]:
    """Solve at every sweep point; failures become rows with converged=False."""
    rows = []
    base = cfg.params
    for v in cfg.sweep_values:
        params = Params(base.N, v, base.p) if cfg.axis == "s" else Params(base.N, base.s, v)
        row = dict.fromkeys(SWEEP_COLUMNS, math.nan)
        row.update(N=params.N, s=params.s, p=params.p, iterations=0, converged=False)
        try:
            _, rep = petviashvili_solve(params, cfg.grid, cfg.solver)
        except (DegenerateInputError, ArithmeticError, FloatingPointError) as exc:
            print(json.dumps({"warning": "sweep point failed", "axis": cfg.axis, "value": v, "message": str(exc)}), file=sys.stderr)
            rows.append(row)
            continue
        t, ident = rep.final_triple, rep.identity_report
        row.update(
            a=t.a, b=t.b, m=t.m, c=rep.energy_c, C_best=rep.best_constant,
            nehari_res=ident.nehari_residual, pohozaev_res=ident.pohozaev_residual,
            iterations=rep.iterations, converged=rep.converged,
        )
        rows.append(row)
    return rows


def format_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        out = []
        for key in SWEEP_COLUMNS:
            v = row[key]
            if isinstance(v, bool):
                out.append("true" if v else "false")
            elif isinstance(v, int):
                out.append(str(v))
            else:
                out.append(format(float(v), ".17g"))
        w.writerow(out)
    return buf.getvalue()


def run_sweep(cfg: RunConfig) -> int:
    rows = sweep_rows(cfg)
    text = format_csv(rows)
    if cfg.out_path is None:
        sys.stdout.write(text)
    else:
        try:
            cfg.out_path.write_text(text)
        except OSError as exc:
            raise CliError(EXIT_IO, "io", f"cannot write {cfg.out_path}: {exc}") from exc
    missed = [r[cfg.axis] for r in rows if not r["converged"]]
    if missed:
        raise CliError(EXIT_NOCONV, "not_converged", f"{len(missed)} sweep point(s) did not converge", points=missed)
    return EXIT_OK


def oracle_report(cfg: RunConfig) -> dict:
    params, grid = cfg.params, cfg.grid
    failed = []
    gauss = gaussian_oracle(params, grid)
    for row in gauss:
        row["computed"], row["exact"], row["rel_error"] = float(row["computed"]), float(row["exact"]), float(row["rel_error"])
        row["ok"] = row["rel_error"] <= ORACLE_TOL["gaussian"]
        if not row["ok"]:
            failed.append(f"gaussian:{row['quantity']}")

    res = cramer_dets(params, 1.0)
    cramer = []
    scale = max(abs(v) for v in res.closed)
    for name, num, closed in zip(res.closed._fields, res.numeric, res.closed):
        err = abs(num - closed) / max(abs(closed), scale)
        ok = err <= ORACLE_TOL["cramer"]
        cramer.append({"quantity": name, "numeric": num, "closed": closed, "rel_error": err, "ok": ok})
        if not ok:
            failed.append(f"cramer:{name}")

    ts = np.concatenate([np.geomspace(0.05, 0.95, 40), np.geomspace(1.05, 20.0, 40)])
    g = np.array([g3_g4(float(t), params.N, params.s) for t in ts])
    g_min = float(g.min())
    if g_min < 0:
        failed.append("g3_g4:negative")
    # interior samples must be strictly positive, t = 1 is the only zero
    if np.any(g <= 0):
        failed.append("g3_g4:zero_off_t1")

    u = synth_gaussian(grid, 1.0, 1.0)
    d = derivative_checks(u, params, seed=cfg.seed)
    deriv = {"dJdz_error": d.dJdz_error, "gateaux_error": d.gateaux_error, "eps": d.eps, "z": d.z}
    if not d.dJdz_error <= ORACLE_TOL["dJdz"]:
        failed.append("derivatives:dJdz")
    if not d.gateaux_error <= ORACLE_TOL["gateaux"]:
        failed.append("derivatives:gateaux")

    report = _base("oracle", cfg)
    report.update(
        gaussian=gauss,
        cramer=cramer,
        g3_g4_min=g_min,
        g3_g4_samples=int(ts.size),
        derivatives=deriv,
        tolerances=ORACLE_TOL,
        failed=failed,
        passed=not failed,
    )
    return report


def format_oracle(report: dict) -> str:
    lines = [f"{'quantity':<10}{'computed':>24}{'exact':>24}{'rel_error':>12}  ok"]
    for r in report["gaussian"]:
        lines.append(f"{r['quantity']:<10}{r['computed']:>24.16g}{r['exact']:>24.16g}{r['rel_error']:>12.3e}  {r['ok']}")
    lines.append("")
    lines.append(f"{'cramer':<10}{'numeric':>24}{'closed':>24}{'rel_error':>12}  ok")
    for r in report["cramer"]:
        lines.append(f"{r['quantity']:<10}{r['numeric']:>24.16g}{r['closed']:>24.16g}{r['rel_error']:>12.3e}  {r['ok']}")
    lines.append("")
    lines.append(f"g3/g4 scan: {report['g3_g4_samples']} samples away from t=1, min {report['g3_g4_min']:.6g}")
    d = report["derivatives"]
    lines.append(f"dJ/dz vs central difference: {d['dJdz_error']:.3e}")
    lines.append(f"Gateaux derivative of W vs symmetric difference: {d['gateaux_error']:.3e}")
    lines.append("PASS" if report["passed"] else "FAIL: " + ", ".join(report["failed"]))
    return "\n".join(lines) + "\n"


def run_oracle(cfg: RunConfig) -> int:
    report = oracle_report(cfg)
    sys.stdout.write(format_oracle(report))
    if cfg.report_path is not None:
        if cfg.timestamp:
            report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
        validate_report(report)
        try:
            cfg.report_path.write_text(json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n")
        except OSError as exc:
            raise CliError(EXIT_IO, "io", f"cannot write report {cfg.report_path}: {exc}") from exc
    return EXIT_OK if report["passed"] else EXIT_CHECK


COMMANDS = {"solve": run_solve, "verify": run_verify, "sweep": run_sweep, "oracle": run_oracle}


# ----------------------------------------------------------------- parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_PARAM, "usage", message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--dim", type=int, default=3, help="space dimension N (default 3)")
    common.add_argument("--s", type=float, default=0.5, help="fractional order s in (0, 1)")
    common.add_argument("--p", type=float, default=4.0, help="nonlinearity exponent")
    common.add_argument("--grid", type=int, default=64, help="points per axis (power of two)")
    common.add_argument("--box", type=float, default=None, help="half-width L of the box [-L, L)^3")
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--max-iter", type=int, default=500)
    common.add_argument("--gamma", type=float, default=None, help="stabiliser exponent (default (p-1)/(p-2))")
    common.add_argument("--dealias", action="store_true", help="2/3-rule dealiasing of the nonlinearity")
    common.add_argument("--zero-mode", choices=ZERO_MODES, default="projected", help="treatment of the k=0 mode of K")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=0, help="random fields for the GN sampling check")
    common.add_argument("--in", dest="in_path", type=Path, default=None)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--report", type=Path, default=None)
    common.add_argument("--no-timestamp", action="store_true", help="omit wall-clock fields for reproducible output")

    parser = _Parser(prog="mixedgn", description="Ground states of -Δu + (-Δ)^s u = |u|^{p-2}u and the GN best constant.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="compute a ground state")
    sub.add_parser("verify", parents=[common], help="check a stored field against the identity chain")
    sw = sub.add_parser("sweep", parents=[common], help="solve along a line in p or s, write CSV")
    sw.add_argument("--axis", choices=("p", "s"), default="p")
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--steps", type=int, required=True)
    sub.add_parser("oracle", parents=[common], help="closed-form and finite-difference oracles")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """Validate every numeric flag before any computation starts."""
    cmd = args.subcommand
    params = Params(args.dim, args.s, args.p)
    box = args.box if args.box is not None else (10.0 if cmd == "oracle" else 12.0)
    grid = GridSpec(args.grid, box, args.dim)
    solver = SolverConfig(
        tol=args.tol, max_iter=args.max_iter, gamma=args.gamma, dealias=args.dealias, zero_mode=args.zero_mode
    )
    if args.samples < 0:
        raise ParameterError("--samples must be >= 0", bound="samples >= 0")
    cfg = RunConfig(
        subcommand=cmd, params=params, grid=grid, solver=solver, seed=args.seed, samples=args.samples,
        in_path=args.in_path, out_path=args.out, report_path=args.report, timestamp=not args.no_timestamp,
    )
    if cmd == "sweep":
        if args.steps < 1:
            raise ParameterError(f"--steps must be >= 1, got {args.steps}", bound="steps >= 1")
        values = np.linspace(args.start, args.stop, args.steps).tolist()
        for v in values:  # every point must be admissible up front
            Params(args.dim, v, args.p) if args.axis == "s" else Params(args.dim, args.s, v)
        cfg.axis, cfg.sweep_values = args.axis, values
    return cfg


def _fail(code: int, kind: str, message: str, **extra) -> int:
    payload = {"error": {"code": code, "type": kind, "message": message, **{k: v for k, v in extra.items() if v is not None}}}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = make_config(args)
        return COMMANDS[cfg.subcommand](cfg)
    except CliError as exc:
        return _fail(exc.code, exc.kind, str(exc), **exc.extra)
    except ParameterError as exc:
        return _fail(EXIT_PARAM, "parameter", str(exc), bound=exc.bound)
    except DegenerateInputError as exc:
        return _fail(EXIT_PARAM, "degenerate_input", str(exc))
    except (FieldFormatError, OSError) as exc:
        return _fail(EXIT_IO, "io", str(exc))
    except jsonschema.ValidationError as exc:
        return _fail(EXIT_CHECK, "schema", f"report failed schema validation: {exc.message}")


if __name__ == "__main__":
    sys.exit(main())
