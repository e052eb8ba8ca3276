"""Command-line front end.

Usage::

    semilag run CONFIG
    semilag order-study CONFIG
    semilag list-problems
    semilag list-methods

CONFIG is an INI-style key/value file::

    [problem]
    id = benchmark_1d_coupled

    [method]
    kind = slrk4            ; order-study: comma separated list
    interp_order = 4        ; optional, defaults to the method order
    iterations = 5

    [grid]
    M = 50                  ; 2D: Mx, My (or M for both)

    [time]
    T = 1
    N = 50

    [output]
    dir = out
    residual_series = true
    final_field = true

    [order_study]
    taus = 1/50, 1/100, 1/200, 1/400
    h_ratio = 1             ; h = h_ratio * tau (default 1 in 1D, 2 in 2D)

Exit status: 0 success, 1 solver failure, 2 configuration error. The
``SEMILAG_MAX_WORKERS`` environment variable caps the number of worker
processes used by ``order-study``.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
import time as _time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (estimate_order, make_grid, max_residual, residual_at,
                       residual_series, run as run_solver)
from .grid import Grid2D, TimeGrid
from .io import write_csv
from .problems import DESCRIPTIONS, REGISTRY, get_problem, is_2d
from .steppers import METHOD_DESCRIPTIONS, METHODS, Method, SolverError

logger = logging.getLogger(__name__)

WORKERS_ENV = "SEMILAG_MAX_WORKERS"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    problem: str
    methods: list
    interp_order: int | None = None
    iterations: int = 5
    M: int | None = None
    Mx: int | None = None
    My: int | None = None
    T: float = 1.0
    N: int | None = None
    out_dir: Path = Path(".")
    residual_series: bool = True
    final_field: bool = True
    taus: list = field(default_factory=list)
    h_ratio: float | None = None
    source: str = ""

    def method(self, kind=None) -> Method:
        return Method(kind or self.methods[0], self.interp_order, self.iterations)

    def resolved(self) -> list:
        """``(key, value)`` pairs describing the configuration, for the manifest."""
        items = [("problem", self.problem), ("methods", ",".join(self.methods)),
                 ("interp_order", self.interp_order if self.interp_order else "default"),
                 ("iterations", self.iterations), ("M", self.M), ("Mx", self.Mx), ("My", self.My),
                 ("T", repr(self.T)), ("N", self.N), ("out_dir", self.out_dir),
                 ("residual_series", self.residual_series), ("final_field", self.final_field)]
        if self.taus:
            items += [("taus", ",".join(repr(t) for t in self.taus)), ("h_ratio", self.h_ratio)]
        return items


def _get(cp, section, key, conv, default=None, required=False):
    if not cp.has_option(section, key):
        if required:
            raise ConfigError(f"missing required field [{section}] {key}")
        return default
    raw = cp.get(section, key)
    try:
        return conv(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid value for [{section}] {key} = {raw!r}: {exc}") from None


def _positive_int(raw):
    v = int(raw)
    if v < 1:
        raise ValueError("must be a positive integer")
    return v


def _positive_float(raw):
    v = float(Fraction(raw.strip())) if "/" in raw else float(raw)
    if not v > 0:
        raise ValueError("must be positive")
    return v


def _bool(raw):
    v = raw.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected true/false")


def _taus(raw):
    taus = [_positive_float(t) for t in raw.split(",") if t.strip()]
    if any(b >= a for a, b in zip(taus, taus[1:])):
        raise ValueError("tau list must be strictly decreasing")
    return taus


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {source}: {exc}") from None
    for section in ("problem", "method"):
        if not cp.has_section(section):
            raise ConfigError(f"{source}: missing section [{section}]")

    problem = _get(cp, "problem", "id", str.strip, required=True)
    if problem not in REGISTRY:
        raise ConfigError(f"[problem] id = {problem!r} is not registered; "
                          f"valid problems: {', '.join(REGISTRY)}")
    kinds = [k.strip().lower() for k in _get(cp, "method", "kind", str, required=True).split(",")]
    for k in kinds:
        if k not in METHODS:
            raise ConfigError(f"[method] kind = {k!r} is not a method; "
                              f"valid methods: {', '.join(METHODS)}")
    cfg = RunConfig(
        problem=problem,
        methods=kinds,
        interp_order=_get(cp, "method", "interp_order", _positive_int),
        iterations=_get(cp, "method", "iterations", _positive_int, 5),
        M=_get(cp, "grid", "M", _positive_int),
        Mx=_get(cp, "grid", "Mx", _positive_int),
        My=_get(cp, "grid", "My", _positive_int),
        T=_get(cp, "time", "T", _positive_float, 1.0),
        N=_get(cp, "time", "N", _positive_int),
        out_dir=Path(_get(cp, "output", "dir", str.strip, ".")),
        residual_series=_get(cp, "output", "residual_series", _bool, True),
        final_field=_get(cp, "output", "final_field", _bool, True),
        taus=_get(cp, "order_study", "taus", _taus, []),
        h_ratio=_get(cp, "order_study", "h_ratio", _positive_float),
        source=source,
    )
    for kind in kinds:
        try:
            cfg.method(kind)
        except ValueError as exc:
            raise ConfigError(f"[method] {exc}") from None
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, str(path))


def _grid_for(cfg: RunConfig, problem):
    if is_2d(problem):
        Mx, My = cfg.Mx or cfg.M, cfg.My or cfg.M
        if Mx is None or My is None:
            raise ConfigError("[grid] needs M, or Mx and My, for a 2D problem")
        return make_grid(problem, Mx, My)
    if cfg.M is None:
        raise ConfigError("[grid] M is required")
    return make_grid(problem, cfg.M)


def _node_columns(grid, problem):
    if isinstance(grid, Grid2D):
        X, Y = grid.mesh()
        return ["x", "y"], [X.ravel(), Y.ravel()]
    return ["x"], [grid.nodes]


def _write_manifest(out_dir, cfg, command, extra, wall):
    lines = [f"command = {command}", f"version = {__version__}"]
    lines += [f"{k} = {v}" for k, v in cfg.resolved()]
    lines += [f"{k} = {v}" for k, v in extra]
    lines.append(f"wall_time_s = {wall:.3f}")
    (out_dir / "manifest.txt").write_text("\n".join(lines) + "\n")


def run(cfg: RunConfig) -> None:
    """Solve one configured problem and write its CSV outputs."""
    start = _time.perf_counter()
    problem = get_problem(cfg.problem)
    if cfg.N is None:
        raise ConfigError("[time] N is required")
    if len(cfg.methods) != 1:
        raise ConfigError("[method] kind must name a single method for 'run'")
    if cfg.residual_series and not problem.has_exact:
        raise ConfigError(f"[output] residual_series requires an exact solution; "
                          f"{cfg.problem} has none")
    grid = _grid_for(cfg, problem)
    time = TimeGrid(cfg.T, cfg.N)
    method = cfg.method()
    cfg.out_dir.mkdir(parents=True, exist_ok=True)

    if cfg.residual_series:
        series, final = residual_series(problem, grid, time, method)
        rows = [[k, t] + list(v) for k, (t, v) in enumerate(zip(series.times, series.values))]
        write_csv(cfg.out_dir / "residuals.csv",
                  ["step", "t"] + [f"max_res_{n}" for n in problem.names], rows)
    else:
        final = run_solver(problem, grid, time, method)

    if cfg.final_field:
        names, coords = _node_columns(grid, problem)
        cols = coords + [c.ravel() for c in final]
        header = names + list(problem.names)
        if problem.has_exact:
            exact = _signed_exact(problem, grid, time.T)
            cols += [c.ravel() for c in exact]
            header += [f"exact_{n}" for n in problem.names]
        write_csv(cfg.out_dir / "final_field.csv", header, list(zip(*cols)))

    extra = [("tau", repr(time.tau))]
    if problem.has_exact:
        extra.append(("final_max_residual",
                      ",".join(repr(float(v)) for v in max_residual(
                          residual_at(final, problem.exact, time.T, grid)))))
    _write_manifest(cfg.out_dir, cfg, "run", extra, _time.perf_counter() - start)


def _signed_exact(problem, grid, t):
    if isinstance(grid, Grid2D):
        X, Y = grid.mesh()
        return np.asarray(problem.exact(t, X, Y), dtype=float)
    return np.asarray(problem.exact(t, grid.nodes), dtype=float)


def _integer_count(length, step, what):
    count = length / step
    n = int(round(count))
    if n < 1 or abs(count - n) > 1e-9 * max(1.0, count):
        raise ConfigError(f"{what}: {length!r}/{step!r} is not a whole number of steps")
    return n


def _order_sample(problem_id, kind, order, iterations, M, N, T):
    """Max residual per component at ``T``; top level so it can run in a worker."""
    problem = get_problem(problem_id)
    grid = make_grid(problem, M)
    final = run_solver(problem, grid, TimeGrid(T, N), Method(kind, order, iterations))
    return max_residual(residual_at(final, problem.exact, T, grid))


def max_workers(jobs: int) -> int:
    raw = os.environ.get(WORKERS_ENV)
    cap = os.cpu_count() or 1
    if raw:
        try:
            cap = max(1, int(raw))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV}={raw!r} is not an integer") from None
    return max(1, min(cap, jobs))


def summarize_orders(samples_by_method, names):
    """Fit one order per method from ``{method: [(tau, h, residuals), ...]}``.

    Samples whose largest component residual is zero are dropped with a
    warning. Returns ``(table_rows, summary_rows)``.
    """
    rows, summary = [], []
    for kind, samples in samples_by_method.items():
        kept = []
        for tau, h, res in samples:
            rows.append([kind, tau, h] + list(res))
            worst = float(np.max(res))
            if worst > 0:
                kept.append((tau, worst))
            else:
                logger.warning("%s: zero residual at tau=%r dropped from the fit", kind, tau)
        if len(kept) < 3:
            raise ValueError(f"{kind}: only {len(kept)} usable samples, need at least 3")
        est = estimate_order(kept)
        if not est.reliable:
            logger.warning("%s: R^2 = %.4f < 0.98, order estimate unreliable", kind, est.r_squared)
        summary.append([kind, est.slope, est.intercept, est.r_squared, est.reliable])
    return rows, summary


def order_study(cfg: RunConfig) -> dict:
    """Run every configured method at every tau and write ``orders.csv``.

    Returns the summary as ``{method: (slope, r_squared)}``.
    """
    start = _time.perf_counter()
    problem = get_problem(cfg.problem)
    if not problem.has_exact:
        raise ConfigError(f"order study needs an exact solution; {cfg.problem} has none")
    if len(cfg.taus) < 3:
        raise ConfigError("[order_study] taus needs at least 3 values")
    ratio = cfg.h_ratio or (2.0 if is_2d(problem) else 1.0)
    length = problem.domain[1] - problem.domain[0]
    jobs = []
    for kind in cfg.methods:
        method = cfg.method(kind)
        for tau in cfg.taus:
            M = _integer_count(length, ratio * tau, f"grid for tau={tau!r}")
            N = _integer_count(cfg.T, tau, f"time steps for tau={tau!r}")
            jobs.append((kind, tau, length / M, (cfg.problem, kind, method.order,
                                                 method.iterations, M, N, cfg.T)))
    workers = max_workers(len(jobs))
    if workers == 1:
        results = [_order_sample(*args) for *_, args in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_order_sample, *zip(*(args for *_, args in jobs))))

    by_method = {}
    for (kind, tau, h, _), res in zip(jobs, results):
        by_method.setdefault(kind, []).append((tau, h, res))
    rows, summary = summarize_orders(by_method, problem.names)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(cfg.out_dir / "orders.csv",
              ["method", "tau", "h"] + [f"max_res_{n}" for n in problem.names], rows,
              (["method", "slope", "intercept", "r_squared", "reliable"], summary))
    _write_manifest(cfg.out_dir, cfg, "order-study", [("h_ratio_used", ratio)],
                    _time.perf_counter() - start)
    return {s[0]: (s[1], s[3]) for s in summary}


def _list_problems(out):
    for name in REGISTRY:
        dim = "2D" if is_2d(get_problem(name)) else "1D"
        print(f"{name:22s} {dim}  {DESCRIPTIONS[name]}", file=out)


def _list_methods(out):
    for name in METHODS:
        print(f"{name:6s} {METHOD_DESCRIPTIONS[name]}", file=out)


def build_parser():
    parser = argparse.ArgumentParser(prog="semilag", description="Semi-Lagrangian advection solvers")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="solve one configured problem")
    p.add_argument("config")
    p = sub.add_parser("order-study", help="estimate convergence orders over a tau list")
    p.add_argument("config")
    sub.add_parser("list-problems", help="list registered problems")
    sub.add_parser("list-methods", help="list available methods")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.command == "list-problems":
        _list_problems(sys.stdout)
        return 0
    if args.command == "list-methods":
        _list_methods(sys.stdout)
        return 0
    try:
        cfg = load_config(args.config)
        if args.command == "run":
            run(cfg)
        else:
            summary = order_study(cfg)
            for kind, (slope, r2) in summary.items():
                flag = "" if r2 >= 0.98 else "  (unreliable)"
                print(f"{kind:6s} slope {slope:7.3f}  R^2 {r2:.4f}{flag}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure at step {exc.step}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
