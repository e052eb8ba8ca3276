"""Semi-Lagrangian steppers for two-dimensional nonlinear advection.

The solution ``U = (u, v)`` is also the advecting velocity, so the departure
point of each arrival node ``(xA, yA)`` solves

    (xD, yD) = (xA, yA) - integral of (u, v) dt

along the trajectory. Order 1 uses the left endpoint; order 2 the trapezoid
rule; orders 3 and 4 Simpson's rule with a half-step RK estimate of the
midpoint state, mirroring the 1D methods with ``(u, v)`` in place of omega
for each coordinate. Both coordinates are updated together in each pass.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .departure import DEFAULT_ITERATIONS, DepartureDivergence, departure_euler_2d
from .grid import Grid2D, TimeGrid
from .interp import interp2d
from .steppers import PERIODIC_TOL, Method, SolverError, StepError


def _check(xD, yD, grid: Grid2D):
    for coord, g, name in ((xD, grid.xgrid, "x"), (yD, grid.ygrid, "y")):
        lo, hi = g.a - g.length, g.b + g.length
        bad = ~np.isfinite(coord) | (coord < lo) | (coord > hi)
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            raise DepartureDivergence(
                f"departure iteration diverged in {name} at arrival node ({i}, {j}): "
                f"{name}_D={coord[i, j]!r}; reduce the time step", node=(int(i), int(j)))


def _rk(kind, F, t, tau, xD, yD, UD, xA, yA):
    """RK step along the 2D characteristic; returns ``(UA, k1)``."""
    k1 = F(t, xD, yD, UD)
    if kind == "slem":
        return UD + tau * k1, k1
    t1 = t + tau
    if kind == "mslem":
        k2 = F(t1, xA, yA, UD + tau * k1)
        return UD + 0.5 * tau * (k1 + k2), k1
    th = t + 0.5 * tau
    xm, ym = xD + 0.5 * tau * UD[0], yD + 0.5 * tau * UD[1]
    k2 = F(th, xm, ym, UD + 0.5 * tau * k1)
    if kind == "slrk3":
        k3 = F(t1, xA, yA, UD - tau * k1 + 2 * tau * k2)
        return UD + tau / 6 * (k1 + 4 * k2 + k3), k1
    k3 = F(th, xm, ym, UD + 0.5 * tau * k2)
    k4 = F(t1, xA, yA, UD + tau * k3)
    return UD + tau / 6 * (k1 + 2 * k2 + 2 * k3 + k4), k1


def _half_step(kind, F, t, tau, xD, yD, UD, k1):
    tq, th = t + 0.25 * tau, t + 0.5 * tau
    xq, yq = xD + 0.25 * tau * UD[0], yD + 0.25 * tau * UD[1]
    xm, ym = xD + 0.5 * tau * UD[0], yD + 0.5 * tau * UD[1]
    k2 = F(tq, xq, yq, UD + 0.25 * tau * k1)
    if kind == "slrk3":
        k3 = F(th, xm, ym, UD - 0.5 * tau * k1 + tau * k2)
        return UD + tau / 12 * (k1 + 4 * k2 + k3), (xm, ym)
    k3 = F(tq, xq, yq, UD + 0.25 * tau * k2)
    k4 = F(th, xm, ym, UD + 0.5 * tau * k3)
    return UD + tau / 12 * (k1 + 2 * k2 + 2 * k3 + k4), (xm, ym)


def _step2d(kind, field, t_k, problem, grid: Grid2D, tau, order=None,
            iterations=DEFAULT_ITERATIONS, x0=None, return_departure=False):
    method = Method(kind, order, iterations)
    order, n = method.order, method.iterations
    field = np.asarray(field, dtype=float)
    if field.shape != (2,) + grid.shape:
        raise ValueError(f"2D field must have shape {(2,) + grid.shape}, got {field.shape}")
    if tau <= 0:
        raise ValueError("tau must be positive")
    F = problem.rhs
    xA, yA = grid.mesh()
    if x0 is None:
        xD, yD = xA.copy(), yA.copy()
    else:
        xD, yD = (np.array(c, dtype=float) for c in x0)

    if kind == "slem":
        for _ in range(n):
            UD = interp2d(field, grid, xD, yD, order)
            xD, yD = departure_euler_2d(xA, yA, UD[0], UD[1], tau)
            _check(xD, yD, grid)
        UD = interp2d(field, grid, xD, yD, order)
        UA, _ = _rk(kind, F, t_k, tau, xD, yD, UD, xA, yA)
    else:
        for i in range(1, n + 1):
            UD = interp2d(field, grid, xD, yD, order)
            UA, k1 = _rk(kind, F, t_k, tau, xD, yD, UD, xA, yA)
            if i <= n - 1:
                if kind == "mslem":
                    disp = 0.5 * tau * (UD + UA)
                else:
                    UI, _ = _half_step(kind, F, t_k, tau, xD, yD, UD, k1)
                    disp = tau / 6 * (UD + 4 * UI + UA)
                if not np.all(np.isfinite(disp)):
                    raise StepError("non-finite departure displacement")
                xD, yD = xA - disp[0], yA - disp[1]
                _check(xD, yD, grid)

    UA = np.array(UA, dtype=float)
    bad = ~np.isfinite(UA)
    if np.any(bad):
        c, i, j = np.argwhere(bad)[0]
        raise StepError(f"non-finite value at node ({i}, {j}), component {c}, t_k={t_k!r}")
    gap = max(np.max(np.abs(UA[:, -1, :] - UA[:, 0, :])), np.max(np.abs(UA[:, :, -1] - UA[:, :, 0])))
    if gap > PERIODIC_TOL:
        raise StepError(f"periodic seam mismatch {gap:.3e} after step from t_k={t_k!r}")
    UA[:, -1, :] = UA[:, 0, :]
    UA[:, :, -1] = UA[:, :, 0]
    return (UA, (xD, yD)) if return_departure else UA


def step_slem_2d(field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
                 x0=None, return_departure=False):
    """First-order step: ``U_A = U_D + tau F(t_k, x_D, y_D, U_D)``."""
    return _step2d("slem", field, t_k, problem, grid, tau, order, iterations, x0, return_departure)


def step_rk2_2d(field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
                x0=None, return_departure=False):
    return _step2d("mslem", field, t_k, problem, grid, tau, order, iterations, x0, return_departure)


def step_rk3_2d(field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
                x0=None, return_departure=False):
    return _step2d("slrk3", field, t_k, problem, grid, tau, order, iterations, x0, return_departure)


def step_rk4_2d(field, t_k, problem, grid, tau, order=None, iterations=DEFAULT_ITERATIONS,
                x0=None, return_departure=False):
    return _step2d("slrk4", field, t_k, problem, grid, tau, order, iterations, x0, return_departure)


STEPPERS_2D = {
    "slem": step_slem_2d,
    "mslem": step_rk2_2d,
    "slrk3": step_rk3_2d,
    "slrk4": step_rk4_2d,
}


def initial_field_2d(problem, grid: Grid2D) -> np.ndarray:
    X, Y = grid.mesh()
    U = np.array(problem.initial(X, Y), dtype=float)
    U[:, -1, :] = U[:, 0, :]
    U[:, :, -1] = U[:, :, 0]
    return U


def solve_2d(problem, grid: Grid2D, time: TimeGrid, method: Method,
             observer: Optional[Callable] = None, U0=None) -> np.ndarray:
    """2D counterpart of :func:`semilag.steppers.solve`."""
    if isinstance(method, str):
        method = Method(method)
    field = initial_field_2d(problem, grid) if U0 is None else np.array(U0, dtype=float)
    step = STEPPERS_2D[method.kind]
    dep = None

    def notify(k, t, U):
        if observer is not None:
            view = U.view()
            view.flags.writeable = False
            observer(k, t, view)

    notify(0, 0.0, field)
    for k in range(time.N):
        t_k = time.t(k)
        try:
            field, dep = step(field, t_k, problem, grid, time.tau, method.order,
                              method.iterations, x0=dep, return_departure=True)
        except (ArithmeticError, ValueError) as exc:
            raise SolverError(f"step {k} (t={t_k:.6g}) failed: {exc}", step=k) from exc
        notify(k + 1, time.t(k + 1), field)
    return field
