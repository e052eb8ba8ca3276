r"""
Convergence orders
==================

Halving tau and h together should cut the error at t = 1 by 2^p for a
method of order p. The slope of log(max residual) against log(tau) gives p.
"""

from semilag import Grid1D, TimeGrid, benchmark_1d_coupled, estimate_order
from semilag.analysis import max_residual, residual_at
from semilag.steppers import Method, solve

problem = benchmark_1d_coupled()

for kind in ("slem", "mslem", "slrk3", "slrk4"):
    samples = []
    for M in (50, 100, 200, 400):
        grid = Grid1D(0.0, 1.0, M)
        y = solve(problem, grid, TimeGrid(1.0, M), Method(kind))
        samples.append((1 / M, max_residual(residual_at(y, problem.exact, 1.0, grid)).max()))
    est = estimate_order(samples)
    print(f"{kind:6s} slope {est.slope:.3f}   R^2 {est.r_squared:.4f}")

# %%
# The same study from the command line writes orders.csv:
#
#     semilag order-study demos/configs/order_study_1d.ini
