r"""
Nonlinear advection in 2D
=========================

Here the solution (u, v) is its own advecting velocity. The exact solution
grows like e^t, so the peak of |u| at t = 1 should be close to e.
"""

import numpy as np

from semilag import Grid2D, TimeGrid, benchmark_2d, solve_2d
from semilag.analysis import max_residual, residual_at

problem = benchmark_2d()

grid = Grid2D(0, 1, 0, 1, 50, 50)
U = solve_2d(problem, grid, TimeGrid(1.0, 50), "slrk4")
print(f"peak |u| at t=1: {np.abs(U[0]).max():.5f} (e = {np.e:.5f})")

# %%
# Method comparison at h = 0.04, tau = 0.02.
grid = Grid2D(0, 1, 0, 1, 25, 25)
for kind in ("slem", "mslem", "slrk3", "slrk4"):
    U = solve_2d(problem, grid, TimeGrid(1.0, 50), kind)
    print(f"{kind:6s} max residual at t=1: {max_residual(residual_at(U, problem.exact, 1.0, grid)).max():.3e}")

# %%
# The orders 3 and 4 constructions place their intermediate stages at
# x_D + (tau/2)(u_D, v_D), a first-order estimate of the trajectory
# midpoint. Because the right-hand side here depends on x and y, their
# global error behaves like tau^2, which is why they sit close together.
