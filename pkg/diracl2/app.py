# diracl2/app.py
"""
Command-line entry point: verify, solve, kernel and sweep.

Exit codes: 0 every check passed, 1 a check failed or a solve did not
converge, 2 configuration or validation error, 3 numeric error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .config import COMMANDS, RunConfig, parse_rhs, resolve_run_config
from .errors import ConfigError, DiracL2Error, DimensionError, GridError, NumericError, WeightError
from .fields.field import bump_battery
from .fields.grid import Grid
from .fields.weights import Quadratic0, WeightSpec, make_weight
from .solver.ladder import SWEEP_COLUMNS, box_ladder, build_rhs, refinement_ladder
from .solver.minnorm import minimality_check, necessity_check, slab_bound_report, solve_min_norm
from .solver.operator import DiscreteDiracOperator
from .solver.weak import cauchy_annulus_check, kernel_weak_check
from .storage.field_writer import write_field_binary, write_field_csv
from .storage.report_writer import write_report, write_rows
from .util.logger import get_logger
from .util.thread_utils import ordered_map
from .verify.calculus import CALCULUS_MAX_N, run_calculus_suites
from .verify.exact import run_all_suites

logger = get_logger("diracl2")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

CALCULUS_TRIALS = 100
KERNEL_MIN_ORDER = 1.5

BOX_COLUMNS = ("radius", "h", "nodes", "bound_ratio", "bound_ratio_unscaled", "converged")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diracl2", description="Weighted L2 estimates for the Clifford Dirac operator.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key=value file overriding the defaults")
        p.add_argument("--n", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--output", help="report path; stdout if omitted")
        p.add_argument("--workers", type=int, help="worker threads (capped by DIRACL2_THREADS)")
        if name == "verify":
            p.add_argument("--trials", type=int)
            continue
        p.add_argument("--grid", help="node counts per axis, e.g. 129,129")
        p.add_argument("--domain", help="low:high per axis, e.g. -1:1,-1:1")
        p.add_argument("--weight", help="zero, quadratic0, aniso_quadratic or axial_poly[:axis]")
        p.add_argument("--weight-params", dest="weight_params")
        p.add_argument("--margin", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--max-iter", dest="max_iter", type=int)
        p.add_argument("--levels", type=int)
        if name in ("solve", "sweep"):
            p.add_argument("--rhs", help="bump:<blade> or zero")
            p.add_argument("--rhs-scale", dest="rhs_scale", type=float)
            p.add_argument("--rhs-center", dest="rhs_center")
        if name == "solve":
            p.add_argument("--snapshot", help="write u as .csv or binary field snapshot")
        if name == "sweep":
            p.add_argument("--radii", help="growing-box radii, e.g. 1,2,4")
    return parser


# values that may start with a minus sign, e.g. --domain -1:1,-1:1
SIGNED_VALUE_FLAGS = ("--domain", "--rhs-center", "--weight-params")


def attach_signed_values(argv: Sequence[str]) -> List[str]:
    """Rewrite `--flag value` as `--flag=value` so argparse keeps a leading minus as data."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in SIGNED_VALUE_FLAGS and i + 1 < len(argv) and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


_NON_CONFIG = ("command", "config", "workers", "snapshot")


def _flag_values(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}


# ---------------------------------------------------------------------------
# shared setup
# ---------------------------------------------------------------------------

def _grid(cfg: RunConfig) -> Grid:
    return Grid(cfg.n, cfg.grid, tuple(lo for lo, _ in cfg.domain), tuple(hi for _, hi in cfg.domain))


def _weight(cfg: RunConfig) -> WeightSpec:
    return make_weight(cfg.weight, cfg.n, cfg.weight_params)


def _ladder_grids(cfg: RunConfig) -> List[Grid]:
    """Base grid refined levels - 1 times; the finest must respect the desk cap."""
    caps = {int(k): int(v) for k, v in cfg.settings["grid"]["desk_caps"].items()}
    grids = [_grid(cfg)]
    for _ in range(cfg.levels - 1):
        grids.append(grids[-1].refine())
    finest = max(grids[-1].extents)
    if finest > caps[cfg.n]:
        raise ConfigError(f"{cfg.levels} levels from {cfg.grid} reach {finest} nodes, above the desk cap {caps[cfg.n]}")
    return grids


def _rhs_descriptor(cfg: RunConfig) -> Dict[str, Any]:
    family, component = parse_rhs(cfg.rhs)
    return {
        "family": family,
        "component": component,
        "scale": cfg.rhs_scale,
        "center": list(cfg.rhs_center) if cfg.rhs_center is not None else None,
        "margin": cfg.margin,
    }


def _emit(payload: Dict[str, Any], cfg: RunConfig) -> None:
    text = write_report(payload, Path(cfg.output) if cfg.output else None)
    if not cfg.output:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def run_verify(cfg: RunConfig, workers: Optional[int] = None) -> Tuple[int, Dict[str, Any]]:
    reports = run_all_suites(cfg.n, cfg.trials, cfg.seed, workers)
    if cfg.n <= CALCULUS_MAX_N:
        reports += run_calculus_suites(cfg.n, min(cfg.trials, CALCULUS_TRIALS), cfg.seed, workers)
    passed = all(r.passed for r in reports)
    payload = {
        "command": "verify",
        "config": cfg.to_dict(),
        "passed": passed,
        "suites": [r.to_dict() for r in reports],
    }
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), payload


def run_solve(cfg: RunConfig, workers: Optional[int] = None,
              snapshot: Optional[str] = None) -> Tuple[int, Dict[str, Any]]:
    grid = _grid(cfg)
    w = _weight(cfg)
    family, component = parse_rhs(cfg.rhs)
    f = build_rhs(grid, family, component, cfg.margin, cfg.rhs_center, cfg.rhs_scale)
    op = DiscreteDiracOperator(grid, w)
    u, report = solve_min_norm(f, w, tol=cfg.tol, max_iter=cfg.max_iter, op=op)
    report.rhs = _rhs_descriptor(cfg)

    solver_cfg = cfg.settings["solver"]
    if isinstance(w, Quadratic0):
        report.slab = slab_bound_report(u, f, w)
    alphas = bump_battery(grid, cfg.margin, int(solver_cfg["necessity_alphas"]), cfg.seed)
    report.necessity = necessity_check(u, f, w, alphas, float(solver_cfg["necessity_slack"]), workers)
    report.minimality = minimality_check(op, u, int(solver_cfg["minimality_samples"]), cfg.seed,
                                         cfg.tol, cfg.max_iter, workers)

    slack = float(solver_cfg["bound_slack"])
    # n = 1 carries the sharper bound without the 2^{2n} factor
    bound_ok = report.rhs_functional is None or report.bound_holds(slack, scaled=cfg.n != 1)
    passed = report.converged and bound_ok and report.necessity["holds"]

    if snapshot:
        path = Path(snapshot)
        if path.suffix.lower() == ".csv":
            write_field_csv(u, path)
        else:
            write_field_binary(u, path)

    payload = {
        "command": "solve",
        "config": cfg.to_dict(),
        "passed": passed,
        "weight_hypotheses": w.check_hypotheses(grid).to_dict(),
        "report": report.to_dict(),
    }
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), payload


def run_kernel(cfg: RunConfig, workers: Optional[int] = None) -> Tuple[int, Dict[str, Any]]:
    grids = _ladder_grids(cfg)
    kcfg = cfg.settings["kernel"]
    annulus = cauchy_annulus_check(grids, float(kcfg["r_in"]), float(kcfg["r_out"]))
    weak = ordered_map(
        lambda g: kernel_weak_check(g, cfg.margin, float(kcfg["amplitude"]), float(kcfg["defect_tolerance"])),
        grids, workers)
    last_order = annulus[-1]["observed_order"]
    monogenic_ok = last_order is not None and last_order >= KERNEL_MIN_ORDER
    passed = monogenic_ok and weak[-1]["passes"]
    payload = {
        "command": "kernel",
        "config": cfg.to_dict(),
        "passed": passed,
        "annulus": annulus,
        "weak_defect": weak,
    }
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), payload


def run_sweep(cfg: RunConfig, workers: Optional[int] = None) -> Tuple[int, Dict[str, Any]]:
    w = _weight(cfg)
    family, component = parse_rhs(cfg.rhs)
    slack = float(cfg.settings["solver"]["bound_slack"])
    if cfg.radii:
        rows = box_ladder(cfg.n, cfg.radii, int(cfg.settings["sweep"]["points_per_unit"]), w,
                          component=component, tol=cfg.tol, max_iter=cfg.max_iter, workers=workers)
        columns: Sequence[str] = BOX_COLUMNS
    else:
        _ladder_grids(cfg)
        rows = refinement_ladder(_grid(cfg), w, cfg.levels, family, component, cfg.margin,
                                 cfg.rhs_center, cfg.rhs_scale, cfg.tol, cfg.max_iter, workers)
        columns = SWEEP_COLUMNS
    passed = all(r["converged"] for r in rows) and all(
        r["bound_ratio"] is None or r["bound_ratio"] <= 1.0 + slack for r in rows)
    payload = {
        "command": "sweep",
        "config": cfg.to_dict(),
        "passed": passed,
        "columns": list(columns),
        "rows": rows,
    }
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), payload


def _emit_sweep(payload: Dict[str, Any], cfg: RunConfig) -> None:
    """CSV table at --output, with the full JSON report beside it."""
    precision = int(cfg.settings["report"]["csv_precision"])
    if cfg.output:
        out = Path(cfg.output)
        write_rows(payload["rows"], payload["columns"], out, precision)
        write_report(payload, out.with_suffix(".json"))
    else:
        sys.stdout.write(write_rows(payload["rows"], payload["columns"], None, precision))


# ---------------------------------------------------------------------------
# main
# ---------------------------------------------------------------------------

def run(cfg: RunConfig, workers: Optional[int] = None, snapshot: Optional[str] = None) -> int:
    if cfg.command == "verify":
        status, payload = run_verify(cfg, workers)
    elif cfg.command == "solve":
        status, payload = run_solve(cfg, workers, snapshot)
    elif cfg.command == "kernel":
        status, payload = run_kernel(cfg, workers)
    else:
        status, payload = run_sweep(cfg, workers)
        _emit_sweep(payload, cfg)
        return status
    _emit(payload, cfg)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(attach_signed_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = resolve_run_config(args.command, _flag_values(args), args.config)
        status = run(cfg, args.workers, getattr(args, "snapshot", None))
    except (ConfigError, DimensionError, GridError, WeightError) as exc:
        logger.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    except NumericError as exc:
        logger.error("numeric error: %s", exc)
        return EXIT_NUMERIC
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_IO
    except DiracL2Error as exc:
        logger.error("%s", exc)
        return EXIT_NUMERIC
    if status != EXIT_OK:
        logger.warning("%s finished with failing checks", cfg.command)
    return status


if __name__ == "__main__":
    sys.exit(main())
