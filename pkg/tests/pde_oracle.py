"""Central-difference PDE residuals of claimed exact solutions."""

import numpy as np

STEP = 1e-5


def residual_1d(problem, t, x, d=STEP):
    e = problem.exact
    y = e(t, x)
    yt = (e(t + d, x) - e(t - d, x)) / (2 * d)
    yx = (e(t, x + d) - e(t, x - d)) / (2 * d)
    om = problem.omega(t, np.asarray(x, dtype=float), y)
    return yt + om * yx - problem.rhs(t, x, y)


def residual_2d(problem, t, x, y, d=STEP):
    e = problem.exact
    U = e(t, x, y)
    Ut = (e(t + d, x, y) - e(t - d, x, y)) / (2 * d)
    Ux = (e(t, x + d, y) - e(t, x - d, y)) / (2 * d)
    Uy = (e(t, x, y + d) - e(t, x, y - d)) / (2 * d)
    return Ut + U[0] * Ux + U[1] * Uy - problem.rhs(t, x, y, U)
