"""Command line front end.

Subcommands: ``solve`` (one solve, knot table plus error report), ``sweep``
(mesh-ratio grid sweep), ``tune`` (golden-section ratio search), ``converge``
(element-doubling study), and ``verify`` (the built-in oracle suite).

Outputs are a CSV table, a JSON summary, and plain two-column plot-data
files, all under a common prefix.  Numbers are written with 17 significant
digits so reruns with the same configuration are byte-identical except for
the wall-clock field in the JSON summary.

Settings resolve as: command-line flag, then config file (flat ``key = value``
lines), then the LAYERFEM_QUAD_ORDER environment variable (quadrature order
only), then built-in defaults.  Exit codes: 0 success, 1 usage error,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from .analysis import (
    SOLVERS,
    convergence_study,
    linf_error_at_knots,
    optimize_sigma_golden,
    sweep_sigma,
)
from .basis import evaluate_solution
from .mesh import build_graded_mesh
from .numerics import DEFAULT_QUAD_ORDER, MAX_QUAD_ORDER, gauss_legendre_rule
from .problem import CATALOG, problem_from_expressions
from .validation import check_int
from .verify import run_all_checks

QUAD_ORDER_ENV = "LAYERFEM_QUAD_ORDER"

_METHOD_CHOICES = ("galerkin", "subdomain", "both")
_PROBLEM_CHOICES = ("lorenz", "manufactured", "custom")


class UsageError(Exception):
    """Bad flags, bad config, or unresolvable problem definitions."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# key -> (default, caster) per subcommand; config files may only set these keys.
_PROBLEM_KEYS = {
    "problem": ("lorenz", str),
    "eps": (0.5, float),
    "p_expr": (None, str),
    "q_expr": (None, str),
    "f_expr": (None, str),
    "exact_expr": (None, str),
    "u0": (0.0, float),
    "u1": (0.0, float),
}
_OUTPUT_KEYS = {
    "quad_order": (None, int),
    "out": (None, str),
}
_COMMAND_KEYS = {
    "solve": {
        **_PROBLEM_KEYS,
        **_OUTPUT_KEYS,
        "n_elements": (64, int),
        "sigma": (1.0, float),
        "method": ("galerkin", str),
        "samples": (201, int),
    },
    "sweep": {
        **_PROBLEM_KEYS,
        **_OUTPUT_KEYS,
        "n_elements": (20, int),
        "grid": ("0.5:0.05:1.0", str),
        "method": ("galerkin", str),
    },
    "tune": {
        **_PROBLEM_KEYS,
        **_OUTPUT_KEYS,
        "n_elements": (20, int),
        "lo": (0.5, float),
        "hi": (1.0, float),
        "tol": (1e-3, float),
        "method": ("galerkin", str),
    },
    "converge": {
        **_PROBLEM_KEYS,
        **_OUTPUT_KEYS,
        "n_list": ("32,64,128,256", str),
        "sigma": (1.0, float),
        "method": ("galerkin", str),
    },
    "verify": {},
}


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="layerfem", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add_common(p):
        p.add_argument("--config", help="flat key = value config file; flags take precedence")
        p.add_argument("--problem", choices=_PROBLEM_CHOICES)
        p.add_argument("--eps", type=float, help="diffusion parameter epsilon")
        p.add_argument("--p-expr", dest="p_expr", help="p(x) for --problem custom")
        p.add_argument("--q-expr", dest="q_expr", help="q(x) for --problem custom")
        p.add_argument("--f-expr", dest="f_expr", help="f(x) for --problem custom")
        p.add_argument("--exact-expr", dest="exact_expr", help="optional exact solution")
        p.add_argument("--u0", type=float, help="left boundary value")
        p.add_argument("--u1", type=float, help="right boundary value")
        p.add_argument("--quad-order", dest="quad_order", type=int,
                       help=f"Gauss-Legendre order (default {DEFAULT_QUAD_ORDER}, "
                            f"env {QUAD_ORDER_ENV})")
        p.add_argument("--out", help="output path prefix (default layerfem_<command>)")

    p_solve = sub.add_parser("solve", help="solve once and emit the knot table")
    add_common(p_solve)
    p_solve.add_argument("--N", dest="n_elements", type=int, help="number of elements")
    p_solve.add_argument("--sigma", type=float, help="mesh ratio")
    p_solve.add_argument("--method", choices=_METHOD_CHOICES)
    p_solve.add_argument("--samples", type=int, help="points per plot-data curve")

    p_sweep = sub.add_parser("sweep", help="solve over a mesh-ratio grid")
    add_common(p_sweep)
    p_sweep.add_argument("--N", dest="n_elements", type=int)
    p_sweep.add_argument("--grid", help="ratio grid as start:step:stop")
    p_sweep.add_argument("--method", choices=_METHOD_CHOICES)

    p_tune = sub.add_parser("tune", help="golden-section search for the mesh ratio")
    add_common(p_tune)
    p_tune.add_argument("--N", dest="n_elements", type=int)
    p_tune.add_argument("--lo", type=float, help="lower end of the search interval")
    p_tune.add_argument("--hi", type=float, help="upper end of the search interval")
    p_tune.add_argument("--tol", type=float, help="bracket width tolerance")
    p_tune.add_argument("--method", choices=_METHOD_CHOICES)

    p_conv = sub.add_parser("converge", help="element-doubling convergence study")
    add_common(p_conv)
    p_conv.add_argument("--N-list", dest="n_list", help="comma-separated doubling counts")
    p_conv.add_argument("--sigma", type=float)
    p_conv.add_argument("--method", choices=_METHOD_CHOICES)

    sub.add_parser("verify", help="run the built-in oracle suite")
    return parser


def _read_config(path: str) -> dict:
    settings = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
                key, value = line.split("=", 1)
                settings[key.strip()] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return settings


def resolve_settings(args: argparse.Namespace) -> dict:
    """Merge flags, config file, environment, and defaults into one dict."""
    command = args.command
    keyspec = _COMMAND_KEYS[command]
    config = _read_config(args.config) if getattr(args, "config", None) else {}
    unknown = sorted(set(config) - set(keyspec))
    if unknown:
        raise UsageError(
            f"config keys not accepted by '{command}': {', '.join(unknown)}"
        )

    resolved = {"command": command}
    for key, (default, caster) in keyspec.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in config:
            try:
                resolved[key] = caster(config[key])
            except ValueError as exc:
                raise UsageError(f"config key {key}: {exc}") from exc
        else:
            resolved[key] = default

    if "quad_order" in keyspec and resolved["quad_order"] is None:
        env = os.environ.get(QUAD_ORDER_ENV)
        if env is not None:
            try:
                resolved["quad_order"] = int(env)
            except ValueError as exc:
                raise UsageError(f"{QUAD_ORDER_ENV} must be an integer, got {env!r}") from exc
        else:
            resolved["quad_order"] = DEFAULT_QUAD_ORDER
    if "out" in keyspec and resolved["out"] is None:
        resolved["out"] = f"layerfem_{command}"
    if "method" in resolved and resolved["method"] not in _METHOD_CHOICES:
        raise UsageError(
            f"method must be one of {', '.join(_METHOD_CHOICES)}, got {resolved['method']!r}"
        )
    if "quad_order" in resolved and not 1 <= resolved["quad_order"] <= MAX_QUAD_ORDER:
        raise UsageError(f"quad_order must be in 1..{MAX_QUAD_ORDER}, got {resolved['quad_order']}")
    return resolved


def _make_problem(cfg: dict):
    name = cfg["problem"]
    if name not in _PROBLEM_CHOICES:
        raise UsageError(f"unknown problem {name!r}")
    if name == "custom":
        missing = [k for k in ("p_expr", "q_expr", "f_expr") if not cfg.get(k)]
        if missing:
            raise UsageError(f"--problem custom requires {', '.join(missing)}")
        return problem_from_expressions(
            epsilon=cfg["eps"],
            p=cfg["p_expr"],
            q=cfg["q_expr"],
            f=cfg["f_expr"],
            exact=cfg.get("exact_expr"),
            left_value=cfg["u0"],
            right_value=cfg["u1"],
        )
    return CATALOG[name](cfg["eps"])


def _methods(cfg: dict) -> list[str]:
    return ["galerkin", "subdomain"] if cfg["method"] == "both" else [cfg["method"]]


def _fmt(value) -> str:
    if value is None:
        return ""
    return format(float(value), ".17g")


def _open_out(path: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="\n")


def _write_csv(path: str, header: list[str], rows) -> None:
    with _open_out(path) as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
            handle.write("\n")


def _write_json(path: str, payload: dict) -> None:
    with _open_out(path) as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _write_curve(path: str, xs, ys) -> None:
    with _open_out(path) as handle:
        for x, y in zip(xs, ys):
            handle.write(f"{_fmt(x)} {_fmt(y)}\n")


def _config_echo(cfg: dict) -> dict:
    echo = {k: v for k, v in cfg.items() if k != "command"}
    return echo


def write_reports(results: dict, config: dict) -> list[str]:
    """Write the knot-table CSV, JSON summary, and plot-data curves.

    ``results`` carries the solve outputs: ``problem``, ``mesh``,
    ``solutions`` (method name to :class:`Solution`), ``reports`` (method
    name to :class:`ErrorReport`, empty when no exact solution is known),
    and ``started`` (perf-counter stamp for the wall-clock field).  Error
    columns and the exact-solution column are omitted when not computed; the
    JSON ``linf`` field is null in that case.  Returns the written paths.
    """
    problem = results["problem"]
    mesh = results["mesh"]
    solutions = results["solutions"]
    reports = results["reports"]
    out = config["out"]
    written = []

    header = ["x"]
    columns = [mesh.knots]
    if problem.exact is not None:
        header.append("u_exact")
        columns.append(np.array([problem.exact(float(x)) for x in mesh.knots]))
    for m in ("galerkin", "subdomain"):
        if m in solutions:
            header.append(f"u_{m}")
            columns.append(solutions[m].knot_values)
    for m in ("galerkin", "subdomain"):
        if m in reports:
            header.append(f"err_{m}")
            columns.append(reports[m].pointwise[:, 3])
    _write_csv(f"{out}.csv", header, zip(*columns))
    written.append(f"{out}.csv")

    samples = check_int("samples", config["samples"], minimum=2)
    xs = np.linspace(mesh.a, mesh.b, samples)
    if problem.exact is not None:
        _write_curve(f"{out}_exact.dat", xs, [problem.exact(float(x)) for x in xs])
        written.append(f"{out}_exact.dat")
    for m, sol in solutions.items():
        _write_curve(f"{out}_{m}.dat", xs, evaluate_solution(mesh, sol.deltas, xs))
        written.append(f"{out}_{m}.dat")

    methods = list(solutions)
    summary = {
        "command": "solve",
        "config": _config_echo(config),
        "linf": {m: reports[m].linf for m in methods} if reports else None,
        "argmax_x": {m: reports[m].argmax_x for m in methods} if reports else None,
        "wall_clock_seconds": time.perf_counter() - results["started"],
    }
    _write_json(f"{out}.json", summary)
    written.append(f"{out}.json")
    return written


def _cmd_solve(cfg: dict) -> int:
    started = time.perf_counter()
    problem = _make_problem(cfg)
    n = check_int("N", cfg["n_elements"], minimum=2)
    mesh = build_graded_mesh(0.0, 1.0, n, cfg["sigma"])
    rule = gauss_legendre_rule(cfg["quad_order"])

    solutions = {m: SOLVERS[m](problem, mesh, rule) for m in _methods(cfg)}
    reports = {}
    if problem.exact is not None:
        reports = {m: linf_error_at_knots(sol, problem.exact) for m, sol in solutions.items()}
    write_reports(
        {
            "problem": problem,
            "mesh": mesh,
            "solutions": solutions,
            "reports": reports,
            "started": started,
        },
        cfg,
    )
    return 0


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:step:stop, got {text!r}")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"grid must be numeric start:step:stop, got {text!r}") from exc
    if step <= 0 or stop < start:
        raise UsageError(f"grid requires step > 0 and stop >= start, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def _cmd_sweep(cfg: dict) -> int:
    started = time.perf_counter()
    problem = _make_problem(cfg)
    grid = _parse_grid(cfg["grid"])
    rule = gauss_legendre_rule(cfg["quad_order"])
    methods = _methods(cfg)

    results = {m: sweep_sigma(problem, cfg["n_elements"], m, grid, rule) for m in methods}

    header = ["sigma"] + [f"linf_{m}" for m in methods]
    rows = []
    for k, sigma in enumerate(grid):
        rows.append([sigma] + [results[m].grid[k][1] for m in methods])
    _write_csv(f"{cfg['out']}.csv", header, rows)

    summary = {
        "command": "sweep",
        "config": _config_echo(cfg),
        "best_sigma": {m: results[m].best_sigma for m in methods},
        "best_linf": {m: results[m].best_linf for m in methods},
        "failures": {m: [list(f) for f in results[m].failures] for m in methods},
        "wall_clock_seconds": time.perf_counter() - started,
    }
    _write_json(f"{cfg['out']}.json", summary)
    return 0


def _cmd_tune(cfg: dict) -> int:
    started = time.perf_counter()
    problem = _make_problem(cfg)
    rule = gauss_legendre_rule(cfg["quad_order"])
    methods = _methods(cfg)

    results = {
        m: optimize_sigma_golden(
            problem, cfg["n_elements"], m, (cfg["lo"], cfg["hi"]), cfg["tol"], rule
        )
        for m in methods
    }

    rows = []
    for m in methods:
        for sigma, err in results[m].grid:
            rows.append([m, sigma, err])
    _write_csv(f"{cfg['out']}.csv", ["method", "sigma", "linf"], rows)

    summary = {
        "command": "tune",
        "config": _config_echo(cfg),
        "best_sigma": {m: results[m].best_sigma for m in methods},
        "best_linf": {m: results[m].best_linf for m in methods},
        "wall_clock_seconds": time.perf_counter() - started,
    }
    _write_json(f"{cfg['out']}.json", summary)
    return 0


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"N list must be comma-separated integers, got {text!r}") from exc
    if not values:
        raise UsageError("N list must not be empty")
    return values


def _cmd_converge(cfg: dict) -> int:
    started = time.perf_counter()
    problem = _make_problem(cfg)
    n_values = _parse_n_list(cfg["n_list"])
    rule = gauss_legendre_rule(cfg["quad_order"])
    methods = _methods(cfg)

    tables = {
        m: convergence_study(problem, m, cfg["sigma"], n_values, rule) for m in methods
    }

    header = ["N"]
    for m in methods:
        header += [f"linf_{m}", f"order_{m}"]
    rows = []
    for k, n in enumerate(n_values):
        row = [float(n)]
        for m in methods:
            entry = tables[m].rows[k]
            row += [entry.linf, entry.observed_order if entry.observed_order is not None else ""]
        rows.append(row)
    _write_csv(f"{cfg['out']}.csv", header, rows)

    summary = {
        "command": "converge",
        "config": _config_echo(cfg),
        "linf": {m: [r.linf for r in tables[m].rows] for m in methods},
        "observed_orders": {m: [r.observed_order for r in tables[m].rows] for m in methods},
        "wall_clock_seconds": time.perf_counter() - started,
    }
    _write_json(f"{cfg['out']}.json", summary)
    return 0


def _cmd_verify() -> int:
    checks = run_all_checks()
    failed = 0
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status}: {check.name} ({check.detail})")
        failed += 0 if check.passed else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 2


_DISPATCH = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "tune": _cmd_tune,
    "converge": _cmd_converge,
}


def run_command(argv) -> int:
    """Parse ``argv`` (no program name), run the command, return an exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.command is None:
            raise UsageError("a subcommand is required (solve, sweep, tune, converge, verify)")
        if args.command == "verify":
            return _cmd_verify()
        cfg = resolve_settings(args)
        return _DISPATCH[args.command](cfg)
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: usage: {_one_line(exc)}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: usage: {_one_line(exc)}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"error: numerical: {_one_line(exc)}", file=sys.stderr)
        return 2


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split())


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
