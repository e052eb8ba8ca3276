import numpy as np
import pytest

from semilag.analysis import estimate_order
from semilag.grid import Grid2D, TimeGrid
from semilag.problems import ProblemSpec2D, benchmark_2d
from semilag.steppers import Method, SolverError
from semilag.steppers2d import STEPPERS_2D, initial_field_2d, solve_2d, step_slem_2d

RK = {"slem": 1.1, "mslem": 1.105, "slrk3": 1.1051666666666666, "slrk4": 1.1051708333333333}


def constant_problem(c1, c2, rhs=None):
    return ProblemSpec2D(
        rhs=rhs or (lambda t, x, y, U: np.zeros_like(U)),
        initial=lambda x, y: np.stack([np.full(np.shape(x), c1), np.full(np.shape(x), c2)]),
    )


@pytest.mark.parametrize("kind", list(STEPPERS_2D))
def test_constant_field_unchanged(kind):
    g = Grid2D(0, 1, 0, 1, 10, 12)
    p = constant_problem(0.6, -0.3)
    U = solve_2d(p, g, TimeGrid(0.5, 5), Method(kind))
    assert np.all(U[0] == 0.6) and np.all(U[1] == -0.3)


@pytest.mark.parametrize("kind", list(STEPPERS_2D))
def test_zero_field_identity(kind):
    g = Grid2D(0, 1, 0, 1, 6, 6)
    U = solve_2d(constant_problem(0.0, 0.0), g, TimeGrid(1.0, 4), Method(kind))
    assert np.all(U == 0.0)


@pytest.mark.parametrize("kind", list(STEPPERS_2D))
def test_ode_reduction_growth(kind):
    # spatially constant state: departure points move but interpolation is exact
    g = Grid2D(0, 1, 0, 1, 8, 8)
    p = constant_problem(1.0, 1.0, rhs=lambda t, x, y, U: U)
    U1 = STEPPERS_2D[kind](initial_field_2d(p, g), 0.0, p, g, 0.1)
    assert np.allclose(U1, RK[kind], rtol=1e-13, atol=0)


def test_one_step_slem_error_is_second_order():
    p = benchmark_2d()
    errs, taus = [], [0.02, 0.01, 0.005]
    for tau in taus:
        M = int(round(1 / tau))
        g = Grid2D(0, 1, 0, 1, M, M)
        X, Y = g.mesh()
        U1 = step_slem_2d(initial_field_2d(p, g), 0.0, p, g, tau)
        errs.append(np.abs(U1 - p.exact(tau, X, Y)).max())
    slope = np.polyfit(np.log(taus), np.log(errs), 1)[0]
    assert abs(slope - 2) < 0.3, (slope, errs)


@pytest.mark.parametrize("kind, p", [("slem", 1), ("mslem", 2)])
def test_global_order_low(kind, p):
    prob = benchmark_2d()
    samples = []
    for tau in (1 / 40, 1 / 80, 1 / 160):
        M = int(round(1 / (2 * tau)))
        g = Grid2D(0, 1, 0, 1, M, M)
        X, Y = g.mesh()
        U = solve_2d(prob, g, TimeGrid(1.0, int(round(1 / tau))), Method(kind))
        samples.append((tau, np.abs(U - prob.exact(1.0, X, Y)).max()))
    est = estimate_order(samples)
    assert abs(est.slope - p) <= 0.35, est


@pytest.mark.parametrize("kind", ["slrk3", "slrk4"])
def test_high_order_local_error(kind):
    # one-step error from exact data shrinks faster than second order globally needs
    prob = benchmark_2d()
    errs, taus = [], [0.02, 0.01]
    for tau in taus:
        M = int(round(1 / tau))
        g = Grid2D(0, 1, 0, 1, M, M)
        X, Y = g.mesh()
        U1 = STEPPERS_2D[kind](initial_field_2d(prob, g), 0.0, prob, g, tau)
        errs.append(np.abs(U1 - prob.exact(tau, X, Y)).max())
    assert np.log2(errs[0] / errs[1]) >= 2.7, errs


def test_shape_validation():
    g = Grid2D(0, 1, 0, 1, 4, 4)
    with pytest.raises(ValueError):
        step_slem_2d(np.zeros((2, 4, 4)), 0.0, benchmark_2d(), g, 0.1)


def test_divergence_reported():
    g = Grid2D(0, 1, 0, 1, 4, 4)
    with pytest.raises(SolverError, match="diverged"):
        solve_2d(constant_problem(40.0, 0.0), g, TimeGrid(1.0, 2), Method("slem"))
