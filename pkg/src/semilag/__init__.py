"""Semi-Lagrangian one-step methods for systems of advection equations."""

__version__ = "0.1.0"

from .analysis import (OrderEstimate, ResidualSeries, estimate_order, max_residual,
                       residual_at, residual_series, stability_probe)
from .departure import (DepartureDivergence, Omega, departure_euler, departure_euler_2d,
                        departure_simpson, departure_trapezoid)
from .grid import Grid1D, Grid2D, TimeGrid, locate, node, wrap
from .interp import interp1d, interp2d
from .problems import (ProblemSpec, ProblemSpec2D, benchmark_1d_coupled, benchmark_2d,
                       get_problem, synthetic_case1, synthetic_case2)
from .steppers import (Method, SolverError, StepError, solve, step_mslem, step_slem,
                       step_slrk3, step_slrk4)
from .steppers2d import solve_2d, step_rk2_2d, step_rk3_2d, step_rk4_2d, step_slem_2d
