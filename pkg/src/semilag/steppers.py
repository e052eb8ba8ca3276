"""Semi-Lagrangian one-step methods of orders 1-4 in one space dimension.

Each step traces the characteristic through every arrival node back to its
departure point, interpolates the level-k solution there and integrates
``dy/dt = f(t, x, y)`` along the characteristic with a Runge-Kutta rule:

=======  ==========  =========================  ===================
method   RK rule     trajectory quadrature      min. interp. order
=======  ==========  =========================  ===================
slem     Euler       left endpoint              1
mslem    Heun        trapezoid                  2
slrk3    Kutta 3     Simpson (RK3 half step)    3
slrk4    classic 4   Simpson (RK4 half step)    4
=======  ==========  =========================  ===================

All arrival nodes are processed together as numpy arrays; each node's
computation only reads the frozen level-k field, so the vectorised form is
the per-node algorithm applied elementwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .departure import (DEFAULT_ITERATIONS, check_departure, departure_euler,
                        departure_simpson, departure_trapezoid)
from .grid import Grid1D, TimeGrid
from .interp import check_order, interp1d

METHODS = {"slem": 1, "mslem": 2, "slrk3": 3, "slrk4": 4}

METHOD_DESCRIPTIONS = {
    "slem": "semi-Lagrangian Euler (order 1)",
    "mslem": "modified semi-Lagrangian Euler, Heun + trapezoid departure (order 2)",
    "slrk3": "semi-Lagrangian Runge-Kutta, Kutta-3 + Simpson departure (order 3)",
    "slrk4": "semi-Lagrangian Runge-Kutta, classic RK4 + Simpson departure (order 4)",
}

PERIODIC_TOL = 1e-10


class StepError(ArithmeticError):
    """A step produced a non-finite or inconsistent value."""


class SolverError(RuntimeError):
    """Failure while time marching; ``step`` is the index of the failed step."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class Method:
    """A method choice with its interpolation order and departure iterations.

    ``order`` defaults to the method's nominal order and may not be lower.
    """

    kind: str
    order: Optional[int] = None
    iterations: int = DEFAULT_ITERATIONS

    def __post_init__(self):
        if self.kind not in METHODS:
            raise ValueError(f"unknown method {self.kind!r}; valid methods: {', '.join(METHODS)}")
        if self.order is None:
            object.__setattr__(self, "order", METHODS[self.kind])
        check_order(self.order)
        if self.order < METHODS[self.kind]:
            raise ValueError(
                f"{self.kind} needs interpolation order >= {METHODS[self.kind]}, got {self.order}")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValueError("departure iterations must be a positive integer")

    @property
    def nominal_order(self) -> int:
        return METHODS[self.kind]


def rk_update(kind, f, t, tau, xD, wD, xA, yD):
    """One Runge-Kutta step along the characteristic from ``(t, xD, yD)``.

    Intermediate stages sit at ``xD + (tau/2) wD``; the last stage sits at the
    arrival point ``xA``. Returns ``(yA, k1)``.
    """
    k1 = f(t, xD, yD)
    if kind == "slem":
        return yD + tau * k1, k1
    t1 = t + tau
    if kind == "mslem":
        k2 = f(t1, xA, yD + tau * k1)
        return yD + 0.5 * tau * (k1 + k2), k1
    th, xm = t + 0.5 * tau, xD + 0.5 * tau * wD
    if kind == "slrk3":
        k2 = f(th, xm, yD + 0.5 * tau * k1)
        k3 = f(t1, xA, yD - tau * k1 + 2 * tau * k2)
        return yD + tau / 6 * (k1 + 4 * k2 + k3), k1
    k2 = f(th, xm, yD + 0.5 * tau * k1)
    k3 = f(th, xm, yD + 0.5 * tau * k2)
    k4 = f(t1, xA, yD + tau * k3)
    return yD + tau / 6 * (k1 + 2 * k2 + 2 * k3 + k4), k1


def half_step_state(kind, f, t, tau, xD, wD, yD, k1):
    """Solution estimate at the trajectory midpoint ``t + tau/2``.

    The same RK rule as the full step, applied over half a step with stages
    at the quarter point ``xD + (tau/4) wD`` and the midpoint.
    """
    tq, xq = t + 0.25 * tau, xD + 0.25 * tau * wD
    th, xm = t + 0.5 * tau, xD + 0.5 * tau * wD
    k2 = f(tq, xq, yD + 0.25 * tau * k1)
    if kind == "slrk3":
        k3 = f(th, xm, yD - 0.5 * tau * k1 + tau * k2)
        return yD + tau / 12 * (k1 + 4 * k2 + k3)
    k3 = f(tq, xq, yD + 0.25 * tau * k2)
    # RK4 over a half step: last stage advances by (tau/2) k3
    k4 = f(th, xm, yD + 0.5 * tau * k3)
    return yD + tau / 12 * (k1 + 2 * k2 + 2 * k3 + k4)


def _speed_only_departure(kind, omega, xA, t, tau, n, grid, x0):
    """Departure points for speeds that do not depend on the solution."""
    if omega.kind == "constant":
        return xA - tau * omega.value
    x = xA.copy() if x0 is None else np.array(x0, dtype=float)
    wA = omega(t + tau, xA)
    for _ in range(n - 1):
        wD = omega(t, x)
        if kind == "mslem":
            x = departure_trapezoid(xA, wD, wA, tau)
        else:
            wI = omega(t + 0.5 * tau, x + 0.5 * tau * wD)
            x = departure_simpson(xA, wD, wI, wA, tau)
        check_departure(x, grid, xA)
    return x


def _finish(yA, grid, t_k):
    bad = ~np.isfinite(yA)
    if np.any(bad):
        comp, node = np.argwhere(bad)[0]
        raise StepError(f"non-finite value at node {node}, component {comp}, t_k={t_k!r}")
    gap = np.max(np.abs(yA[:, -1] - yA[:, 0]))
    if gap > PERIODIC_TOL:
        raise StepError(f"periodic seam mismatch {gap:.3e} after step from t_k={t_k!r}")
    yA[:, -1] = yA[:, 0]
    return yA


def _step(kind, field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
          x0=None, return_departure=False):
    method = Method(kind, order, iterations)
    order, n = method.order, method.iterations
    field = np.asarray(field, dtype=float)
    if field.ndim != 2 or field.shape[1] != grid.M + 1:
        raise ValueError(f"field must have shape (n, {grid.M + 1}), got {field.shape}")
    if tau <= 0:
        raise ValueError("tau must be positive")
    omega, f = problem.omega, problem.rhs
    xA = grid.nodes
    t1 = t_k + tau

    if kind == "slem":
        xD = departure_euler(xA, omega, field, grid, t_k, tau, n, order, x0)
        yD = interp1d(field, grid, xD, order)
        yA, _ = rk_update(kind, f, t_k, tau, xD, None, xA, yD)
    elif not omega.needs_state:
        xD = _speed_only_departure(kind, omega, xA, t_k, tau, n, grid, x0)
        yD = interp1d(field, grid, xD, order)
        wD = omega(t_k, xD, yD)
        yA, _ = rk_update(kind, f, t_k, tau, xD, wD, xA, yD)
    else:
        xD = xA.copy() if x0 is None else np.array(x0, dtype=float)
        for i in range(1, n + 1):
            yD = interp1d(field, grid, xD, order)
            wD = omega(t_k, xD, yD)
            yA, k1 = rk_update(kind, f, t_k, tau, xD, wD, xA, yD)
            if i <= n - 1:
                wA = omega(t1, xA, yA)
                if kind == "mslem":
                    xD = departure_trapezoid(xA, wD, wA, tau)
                else:
                    yI = half_step_state(kind, f, t_k, tau, xD, wD, yD, k1)
                    wI = omega(t_k + 0.5 * tau, xD + 0.5 * tau * wD, yI)
                    xD = departure_simpson(xA, wD, wI, wA, tau)
                check_departure(xD, grid, xA)

    yA = _finish(np.array(yA, dtype=float), grid, t_k)
    return (yA, xD) if return_departure else yA


def step_slem(field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
              x0=None, return_departure=False):
    """Semi-Lagrangian Euler step: ``y_A = y_D + tau f(t_k, x_D, y_D)``."""
    return _step("slem", field, t_k, problem, grid, tau, order, iterations, x0, return_departure)


def step_mslem(field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
               x0=None, return_departure=False):
    """Heun step along the characteristic with trapezoid departure refinement."""
    return _step("mslem", field, t_k, problem, grid, tau, order, iterations, x0, return_departure)


def step_slrk3(field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
               x0=None, return_departure=False):
    return _step("slrk3", field, t_k, problem, grid, tau, order, iterations, x0, return_departure)


def step_slrk4(field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
               x0=None, return_departure=False):
    return _step("slrk4", field, t_k, problem, grid, tau, order, iterations, x0, return_departure)


STEPPERS = {
    "slem": step_slem,
    "mslem": step_mslem,
    "slrk3": step_slrk3,
    "slrk4": step_slrk4,
}


def initial_field(problem, grid: Grid1D) -> np.ndarray:
    y0 = np.array(problem.initial(grid.nodes), dtype=float).reshape(problem.n_components, -1)
    y0[:, -1] = y0[:, 0]
    return y0


def solve(problem, grid: Grid1D, time: TimeGrid, method: Method,
          observer: Optional[Callable] = None, y0=None) -> np.ndarray:
    """March ``problem`` from ``t = 0`` to ``time.T`` in ``time.N`` steps.

    ``observer(k, t_k, field)`` is called with the initial field (``k = 0``)
    and after every step; ``field`` is a read-only view. Departure points of
    each step seed the iteration of the next. Returns the final field.
    """
    if isinstance(method, str):
        method = Method(method)
    field = initial_field(problem, grid) if y0 is None else np.array(y0, dtype=float)
    step = STEPPERS[method.kind]
    xD = None

    def notify(k, t, y):
        if observer is not None:
            view = y.view()
            view.flags.writeable = False
            observer(k, t, view)

    notify(0, 0.0, field)
    for k in range(time.N):
        t_k = time.t(k)
        try:
            field, xD = step(field, t_k, problem, grid, time.tau, method.order,
                             method.iterations, x0=xD, return_departure=True)
        except (ArithmeticError, ValueError) as exc:
            raise SolverError(f"step {k} (t={t_k:.6g}) failed: {exc}", step=k) from exc
        notify(k + 1, time.t(k + 1), field)
    return field
