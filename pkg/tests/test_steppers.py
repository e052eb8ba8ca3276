import numpy as np
import pytest

from semilag.departure import Omega
from semilag.grid import Grid1D, TimeGrid
from semilag.interp import interp1d
from semilag.problems import ProblemSpec, benchmark_1d_coupled, synthetic_case1
from semilag.steppers import (STEPPERS, Method, SolverError, initial_field, solve, step_mslem,
                              step_slem, step_slrk3, step_slrk4)

TAU = 0.1


def textbook(kind, f, y, h):
    """Classic explicit one-step ODE methods for autonomous y' = f(y)."""
    k1 = f(y)
    if kind == "slem":
        return y + h * k1
    if kind == "mslem":
        return y + h / 2 * (k1 + f(y + h * k1))
    if kind == "slrk3":
        k2 = f(y + h / 2 * k1)
        k3 = f(y - h * k1 + 2 * h * k2)
        return y + h / 6 * (k1 + 4 * k2 + k3)
    k2 = f(y + h / 2 * k1)
    k3 = f(y + h / 2 * k2)
    k4 = f(y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def growth_problem(omega):
    return ProblemSpec(omega=omega, rhs=lambda t, x, y: y,
                       initial=lambda x: np.ones((1,) + np.shape(x)), n_components=1)


def zero_rhs(omega, initial):
    return ProblemSpec(omega=omega, rhs=lambda t, x, y: np.zeros_like(y),
                       initial=initial, n_components=1)


# Taylor polynomials of e^0.1 truncated at the method order
HAND = {"slem": 1.1, "mslem": 1.105, "slrk3": 1 + 0.1 + 0.005 + 0.1 ** 3 / 6,
        "slrk4": 1 + 0.1 + 0.005 + 0.1 ** 3 / 6 + 0.1 ** 4 / 24}


@pytest.mark.parametrize("kind", list(STEPPERS))
@pytest.mark.parametrize("omega", [Omega.constant(0.0), Omega.tx(lambda t, x: 0 * x),
                                   Omega.txy(lambda t, x, y: 0 * y[0])], ids=["const", "tx", "txy"])
def test_ode_reduction(kind, omega):
    g = Grid1D(0.0, 1.0, 8)
    p = growth_problem(omega)
    y1 = STEPPERS[kind](initial_field(p, g), 0.0, p, g, TAU)
    ref = textbook(kind, lambda y: y, 1.0, TAU)
    assert ref == pytest.approx(HAND[kind], rel=1e-15)
    assert np.allclose(y1, ref, rtol=1e-13, atol=0)


@pytest.mark.parametrize("kind", list(STEPPERS))
def test_exact_one_node_shift(kind):
    g = Grid1D(0.0, 1.0, 20)
    tau = 0.05
    c = g.h / tau
    p = zero_rhs(Omega.constant(c), lambda x: np.sin(2 * np.pi * x)[None] + np.cos(6 * np.pi * x)[None])
    y0 = initial_field(p, g)
    y1 = STEPPERS[kind](y0, 0.0, p, g, tau)
    assert np.allclose(y1[:, 1:], y0[:, :-1], atol=1e-15, rtol=0)


@pytest.mark.parametrize("kind", list(STEPPERS))
def test_one_period_identity(kind):
    p = synthetic_case1(1.0)
    g = Grid1D(0.0, 1.0, 40)
    y = solve(p, g, TimeGrid(1.0, 40), Method(kind))
    assert np.max(np.abs(y - initial_field(p, g))) < 1e-12


@pytest.mark.parametrize("kind", list(STEPPERS))
def test_zero_rhs_is_pure_translation(kind):
    # f = 0: result is the interpolated level-k field at the departure points
    p = zero_rhs(Omega.tx(lambda t, x: 1.0 + 0.3 * np.sin(2 * np.pi * x)),
                 lambda x: np.cos(2 * np.pi * x)[None])
    g = Grid1D(0.0, 1.0, 32)
    y0 = initial_field(p, g)
    y1, xD = STEPPERS[kind](y0, 0.0, p, g, 0.03, return_departure=True)
    assert np.allclose(y1, interp1d(y0, g, xD, Method(kind).order), atol=1e-14)


@pytest.mark.parametrize("kind", list(STEPPERS))
@pytest.mark.parametrize("omega", [Omega.constant(0.7), Omega.tx(lambda t, x: np.sin(2 * np.pi * x) + t),
                                   Omega.txy(lambda t, x, y: 3 * y[0])], ids=["const", "tx", "txy"])
def test_constant_state_is_stationary(kind, omega):
    p = zero_rhs(omega, lambda x: np.full((1,) + np.shape(x), 0.25))
    g = Grid1D(0.0, 1.0, 16)
    y = solve(p, g, TimeGrid(0.5, 10), Method(kind))
    assert np.all(y == 0.25)


def test_slem_one_step_error_bound():
    p = benchmark_1d_coupled()
    tau = 0.005
    g = Grid1D(0.0, 1.0, 200)
    y1 = step_slem(initial_field(p, g), 0.0, p, g, tau)
    assert np.abs(y1 - p.exact(tau, g.nodes)).max() <= 100 * tau ** 2


@pytest.mark.parametrize("kind, p", [("slem", 1), ("mslem", 2), ("slrk3", 3), ("slrk4", 4)])
def test_local_error_order(kind, p):
    prob = benchmark_1d_coupled()
    taus = [0.01, 0.005, 0.0025]
    errs = []
    for tau in taus:
        g = Grid1D(0.0, 1.0, int(round(1 / tau)))
        y1 = STEPPERS[kind](initial_field(prob, g), 0.0, prob, g, tau)
        errs.append(np.abs(y1 - prob.exact(tau, g.nodes)).max())
    slope = np.polyfit(np.log(taus), np.log(errs), 1)[0]
    assert abs(slope - (p + 1)) <= 0.3, (slope, errs)


def test_stability_bound_slem():
    from semilag.analysis import stability_probe

    L = _sampled_lipschitz()
    growth = stability_probe(benchmark_1d_coupled(), Grid1D(0, 1, 50), TimeGrid(1.0, 50),
                             Method("slem"), 1e-6)
    assert np.isfinite(growth)
    assert growth <= 1.1 * np.exp(1.0 * L)


def _sampled_lipschitz(bound=1.2, n=241):
    # infinity-norm of the Jacobian of f over |u|, |v| <= bound
    u, v = np.meshgrid(np.linspace(-bound, bound, n), np.linspace(-bound, bound, n))
    tp = 2 * np.pi
    row1 = tp * (np.abs(v) + np.abs(2 * v + u - 1))
    row2 = tp * (np.abs(1 - 2 * u - v) + np.abs(u))
    return float(max(row1.max(), row2.max()))


@pytest.mark.parametrize("kind", list(STEPPERS))
def test_consistency_increment_tends_to_f(kind):
    p = benchmark_1d_coupled()
    g = Grid1D(0.0, 1.0, 64)
    y0 = initial_field(p, g)
    tau = 1e-6
    y1, xD = STEPPERS[kind](y0, 0.0, p, g, tau, return_departure=True)
    yD = interp1d(y0, g, xD, Method(kind).order)
    phi = (y1 - yD) / tau
    f = p.rhs(0.0, g.nodes, y0)
    assert np.abs(phi - f).max() < 1e-3 * np.abs(f).max()


def test_observer_and_zero_steps():
    p = benchmark_1d_coupled()
    g = Grid1D(0, 1, 20)
    seen = []
    y = solve(p, g, TimeGrid(1.0, 0), Method("slem"), observer=lambda k, t, f: seen.append((k, t)))
    assert np.array_equal(y, initial_field(p, g))
    assert seen == [(0, 0.0)]

    seen.clear()

    def obs(k, t, f):
        seen.append((k, t))
        with pytest.raises(ValueError):
            f[0, 0] = 1.0

    solve(p, g, TimeGrid(0.2, 4), Method("mslem"), observer=obs)
    assert [k for k, _ in seen] == [0, 1, 2, 3, 4]
    assert seen[-1][1] == 0.2


def test_deterministic():
    p = benchmark_1d_coupled()
    g = Grid1D(0, 1, 30)
    a = solve(p, g, TimeGrid(0.5, 15), Method("slrk4"))
    b = solve(p, g, TimeGrid(0.5, 15), Method("slrk4"))
    assert np.array_equal(a, b)


def test_method_validation():
    with pytest.raises(ValueError, match="valid methods"):
        Method("rk7")
    with pytest.raises(ValueError):
        Method("slrk4", order=3)
    with pytest.raises(ValueError):
        Method("slem", iterations=0)
    assert Method("slrk3").order == 3
    assert Method("slem", order=4).order == 4


def test_failure_names_step():
    p = ProblemSpec(omega=Omega.constant(0.0), rhs=lambda t, x, y: np.exp(1e3 * y),
                    initial=lambda x: np.ones((1,) + np.shape(x)), n_components=1)
    with pytest.raises(SolverError) as info:
        with np.errstate(over="ignore"):
            solve(p, Grid1D(0, 1, 8), TimeGrid(1.0, 4), Method("slem"))
    assert info.value.step == 0
    assert "component 0" in str(info.value)


def test_divergent_departure_reported():
    p = ProblemSpec(omega=Omega.tx(lambda t, x: 50.0 + 0 * x), rhs=lambda t, x, y: 0 * y,
                    initial=lambda x: np.ones((1,) + np.shape(x)), n_components=1)
    with pytest.raises(SolverError, match="diverged"):
        solve(p, Grid1D(0, 1, 8), TimeGrid(1.0, 2), Method("slem"))
