"""Residuals against exact solutions, convergence orders and stability probes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid1D, Grid2D, TimeGrid
from .problems import is_2d
from .steppers import Method, initial_field, solve
from .steppers2d import initial_field_2d, solve_2d

RELIABLE_R2 = 0.98


class MissingExactSolution(ValueError):
    pass


def _exact_on_nodes(exact, t, grid):
    if exact is None:
        raise MissingExactSolution("problem has no exact solution")
    if isinstance(grid, Grid2D):
        X, Y = grid.mesh()
        return np.asarray(exact(t, X, Y), dtype=float)
    return np.asarray(exact(t, grid.nodes), dtype=float)


def residual_at(numeric, exact, t, grid) -> np.ndarray:
    """Nodewise ``|exact(t, node) - numeric|`` for every component."""
    ref = _exact_on_nodes(exact, t, grid)
    numeric = np.asarray(numeric, dtype=float)
    return np.abs(ref.reshape(numeric.shape) - numeric)


def max_residual(residual) -> np.ndarray:
    """Per-component maximum over all nodes."""
    residual = np.asarray(residual, dtype=float)
    if residual.size == 0:
        raise ValueError("empty residual field")
    return residual.reshape(residual.shape[0], -1).max(axis=1)


@dataclass
class ResidualSeries:
    """Max residual per component at every time level ``t_0 .. t_N``."""

    method: str
    names: tuple
    times: list = field(default_factory=list)
    values: list = field(default_factory=list)  # one array (n_components,) per level
    params: dict = field(default_factory=dict)

    def append(self, t, maxres):
        self.times.append(float(t))
        self.values.append(np.asarray(maxres, dtype=float))

    def as_array(self) -> np.ndarray:
        return np.array(self.values).reshape(len(self.times), len(self.names))

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]


def make_grid(problem, M, My=None):
    if is_2d(problem):
        a, b, c, d = problem.domain
        return Grid2D(a, b, c, d, M, M if My is None else My)
    a, b = problem.domain
    return Grid1D(a, b, M)


def run(problem, grid, time: TimeGrid, method: Method, observer=None):
    if is_2d(problem):
        return solve_2d(problem, grid, time, method, observer)
    return solve(problem, grid, time, method, observer)


def residual_series(problem, grid, time: TimeGrid, method: Method):
    """Run ``method`` and record the max residual at each level.

    Returns ``(series, final_field)``.
    """
    if isinstance(method, str):
        method = Method(method)
    series = ResidualSeries(method.kind, tuple(problem.names),
                            params={"tau": time.tau, "T": time.T, "N": time.N})

    def observe(k, t, y):
        series.append(t, max_residual(residual_at(y, problem.exact, t, grid)))

    if problem.exact is None:
        raise MissingExactSolution(f"{problem.name or 'problem'} has no exact solution")
    final = run(problem, grid, time, method, observe)
    return series, final


@dataclass(frozen=True)
class OrderEstimate:
    slope: float
    intercept: float
    r_squared: float
    taus: tuple
    residuals: tuple

    @property
    def reliable(self) -> bool:
        return self.r_squared >= RELIABLE_R2


def estimate_order(samples) -> OrderEstimate:
    """Least-squares fit of ``log r = slope * log tau + intercept``.

    ``samples`` is a sequence of ``(tau, residual)`` pairs, at least three,
    with strictly decreasing ``tau``.
    """
    samples = [(float(t), float(r)) for t, r in samples]
    if len(samples) < 3:
        raise ValueError("need at least 3 (tau, residual) samples")
    taus = np.array([s[0] for s in samples])
    res = np.array([s[1] for s in samples])
    if np.any(np.diff(taus) >= 0):
        raise ValueError("tau values must be strictly decreasing")
    if np.any(taus <= 0):
        raise ValueError("tau values must be positive")
    if np.any(res <= 0):
        raise ValueError("a residual is zero (solution exact to machine precision); "
                         "use a larger T or coarser tau")
    lx, ly = np.log(taus), np.log(res)
    slope, intercept = np.polyfit(lx, ly, 1)
    fit = slope * lx + intercept
    ss_res = float(np.sum((ly - fit) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return OrderEstimate(float(slope), float(intercept), r2, tuple(taus), tuple(res))


def stability_probe(problem, grid, time: TimeGrid, method: Method, delta: float) -> float:
    """Growth of a uniform initial perturbation of size ``delta`` over ``[0, T]``.

    Returns ``max|y_delta(T) - y(T)| / delta``.
    """
    if not delta > 0:
        raise ValueError("perturbation size delta must be positive")
    if isinstance(method, str):
        method = Method(method)
    if is_2d(problem):
        base = initial_field_2d(problem, grid)
        a = solve_2d(problem, grid, time, method, U0=base)
        b = solve_2d(problem, grid, time, method, U0=base + delta)
    else:
        base = initial_field(problem, grid)
        a = solve(problem, grid, time, method, y0=base)
        b = solve(problem, grid, time, method, y0=base + delta)
    return float(np.max(np.abs(b - a)) / delta)
