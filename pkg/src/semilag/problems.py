"""Benchmark and synthetic advection problems.

1D problems solve ``y_t + omega y_x = f(t, x, y)`` for a vector ``y`` of
``n`` components. 2D problems solve the nonlinear system

    u_t + u u_x + v u_y = f(t, x, y, u, v)
    v_t + u v_x + v v_y = g(t, x, y, u, v)

with the right-hand sides stacked into one callable returning ``(f, g)``.
All callables are vectorised: coordinates are arrays, states carry a leading
component axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .departure import Omega

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ProblemSpec:
    omega: Omega
    rhs: Callable  # (t, x, y) -> array (n, ...)
    initial: Callable  # x -> array (n, ...)
    n_components: int
    domain: tuple = (0.0, 1.0)
    exact: Optional[Callable] = None  # (t, x) -> array (n, ...)
    names: tuple = ()
    name: str = ""

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"y{i + 1}" for i in range(self.n_components)))
        if len(self.names) != self.n_components:
            raise ValueError("one name per component required")

    @property
    def has_exact(self) -> bool:
        return self.exact is not None


@dataclass(frozen=True)
class ProblemSpec2D:
    rhs: Callable  # (t, x, y, U) -> array (2, ...)
    initial: Callable  # (x, y) -> array (2, ...)
    domain: tuple = (0.0, 1.0, 0.0, 1.0)
    exact: Optional[Callable] = None  # (t, x, y) -> array (2, ...)
    names: tuple = ("u", "v")
    name: str = ""
    n_components: int = 2

    @property
    def has_exact(self) -> bool:
        return self.exact is not None


def benchmark_1d_coupled() -> ProblemSpec:
    """Coupled pair advected with speed ``u + v``; exact solution is a unit-speed
    translation of ``(sin 2 pi x, cos 2 pi x)``."""

    def omega(t, x, y):
        return y[0] + y[1]

    def rhs(t, x, y):
        u, v = y[0], y[1]
        return np.stack([TWO_PI * (v * v + u * v - v), TWO_PI * (u - u * u - u * v)])

    def exact(t, x):
        phase = TWO_PI * (np.asarray(x, dtype=float) - t)
        return np.stack([np.sin(phase), np.cos(phase)])

    return ProblemSpec(
        omega=Omega.txy(omega),
        rhs=rhs,
        initial=lambda x: exact(0.0, x),
        n_components=2,
        domain=(0.0, 1.0),
        exact=exact,
        names=("u", "v"),
        name="benchmark_1d_coupled",
    )


def benchmark_2d() -> ProblemSpec2D:
    """Nonlinear 2D advection whose exact solution grows like ``e^t``."""

    def rhs(t, x, y, U):
        u, v = U[0], U[1]
        sx, cx = np.sin(TWO_PI * x), np.cos(TWO_PI * x)
        sy, cy = np.sin(TWO_PI * y), np.cos(TWO_PI * y)
        g = TWO_PI * np.exp(t)
        return np.stack([
            u + g * (u * cx * sy + v * sx * cy),
            v - g * (u * sx * cy + v * cx * sy),
        ])

    def exact(t, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        e = np.exp(t)
        return np.stack([
            e * np.sin(TWO_PI * x) * np.sin(TWO_PI * y),
            e * np.cos(TWO_PI * x) * np.cos(TWO_PI * y),
        ])

    return ProblemSpec2D(
        rhs=rhs,
        initial=lambda x, y: exact(0.0, x, y),
        exact=exact,
        name="benchmark_2d",
    )


def synthetic_case1(c: float = 1.0) -> ProblemSpec:
    """Pure translation at constant speed ``c`` of ``sin 2 pi x``."""
    L = 1.0

    def exact(t, x):
        xs = np.mod(np.asarray(x, dtype=float) - c * t, L)
        return np.sin(TWO_PI * xs)[None]

    return ProblemSpec(
        omega=Omega.constant(c),
        rhs=lambda t, x, y: np.zeros_like(y),
        initial=lambda x: exact(0.0, x),
        n_components=1,
        domain=(0.0, L),
        exact=exact,
        names=("y",),
        name=f"synthetic_case1(c={c:g})",
    )


def synthetic_case2() -> ProblemSpec:
    """Speed ``sin(2 pi x) + 2`` depending on position only; no closed form."""
    return ProblemSpec(
        omega=Omega.tx(lambda t, x: np.sin(TWO_PI * x) + 2.0),
        rhs=lambda t, x, y: np.zeros_like(y),
        initial=lambda x: np.sin(TWO_PI * np.asarray(x, dtype=float))[None],
        n_components=1,
        domain=(0.0, 1.0),
        names=("y",),
        name="synthetic_case2",
    )


REGISTRY = {
    "benchmark_1d_coupled": benchmark_1d_coupled,
    "benchmark_2d": benchmark_2d,
    "synthetic_case1": synthetic_case1,
    "synthetic_case2": synthetic_case2,
}

DESCRIPTIONS = {
    "benchmark_1d_coupled": "1D coupled pair, omega = u + v, exact translation (sin, cos)",
    "benchmark_2d": "2D nonlinear advection, exact e^t sin sin / e^t cos cos",
    "synthetic_case1": "1D constant speed c = 1 translation of sin(2 pi x)",
    "synthetic_case2": "1D speed sin(2 pi x) + 2, f = 0, no exact solution",
}


def get_problem(name: str):
    try:
        return REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; choose from {sorted(REGISTRY)}") from None


def is_2d(problem) -> bool:
    return isinstance(problem, ProblemSpec2D)
