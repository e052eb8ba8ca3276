"""Departure points of backward characteristics.

A particle reaching the arrival node ``xA`` at ``t_{k+1}`` left from

    xD = xA - integral of omega dt over [t_k, t_{k+1}],

which is implicit in ``xD`` and solved by fixed-point iteration. The three
quadratures used by the steppers (left endpoint, trapezoid, Simpson) are
provided here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import interp as _interp
from .grid import Grid1D

DEFAULT_ITERATIONS = 5


class DepartureDivergence(ArithmeticError):
    """The departure fixed-point iteration left the admissible band."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


@dataclass(frozen=True)
class Omega:
    """Advection speed in one of three forms.

    ``kind`` is ``"constant"`` (``value`` holds the speed), ``"tx"``
    (``func(t, x)``) or ``"txy"`` (``func(t, x, y)`` with ``y`` shaped
    ``(n, ...)`` like ``x`` with a leading component axis).
    """

    kind: str
    value: float = 0.0
    func: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in ("constant", "tx", "txy"):
            raise ValueError(f"unknown omega kind {self.kind!r}")
        if self.kind == "constant" and not np.isfinite(self.value):
            raise ValueError("constant speed must be finite")
        if self.kind != "constant" and self.func is None:
            raise ValueError(f"omega of kind {self.kind!r} needs a function")

    @classmethod
    def constant(cls, c: float) -> "Omega":
        return cls("constant", value=float(c))

    @classmethod
    def tx(cls, func) -> "Omega":
        return cls("tx", func=func)

    @classmethod
    def txy(cls, func) -> "Omega":
        return cls("txy", func=func)

    @property
    def needs_state(self) -> bool:
        return self.kind == "txy"

    def __call__(self, t, x, y=None):
        if self.kind == "constant":
            return np.full(np.shape(x), self.value)
        if self.kind == "tx":
            return np.broadcast_to(np.asarray(self.func(t, x), dtype=float), np.shape(x))
        if y is None:
            raise ValueError("solution-dependent omega evaluated without a state")
        return np.asarray(self.func(t, x, y), dtype=float)


def check_departure(xD, grid: Grid1D, xA=None):
    """Raise :class:`DepartureDivergence` if any iterate is non-finite or more
    than one period outside ``[a, b]``."""
    xD = np.asarray(xD)
    lo, hi = grid.a - grid.length, grid.b + grid.length
    bad = ~np.isfinite(xD) | (xD < lo) | (xD > hi)
    if np.any(bad):
        j = int(np.flatnonzero(bad.ravel())[0])
        where = f"arrival node {j}"
        if xA is not None:
            where += f" (x_A={np.ravel(xA)[j]!r})"
        raise DepartureDivergence(
            f"departure iteration diverged at {where}: x_D={np.ravel(xD)[j]!r}; "
            "reduce the time step",
            node=j,
        )
    return xD


def _finite(*args):
    for a in args:
        if not np.all(np.isfinite(a)):
            raise ValueError("non-finite input to departure update")


def departure_euler(xA, omega: Omega, prev_field, grid: Grid1D, t_k, tau,
                    n=DEFAULT_ITERATIONS, order=1, x0=None):
    """Left-endpoint departure points: iterate ``x <- xA - tau*omega(t_k, x, y(x))``.

    ``y(x)`` is the interpolant of ``prev_field`` (the level-k solution) and is
    only formed when ``omega`` depends on the solution. A constant speed gives
    ``xA - tau*omega`` directly. Returned points are not wrapped.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    if n < 1:
        raise ValueError("need at least one departure iteration")
    xA = np.asarray(xA, dtype=float)
    if omega.kind == "constant":
        return xA - tau * omega.value
    x = xA.copy() if x0 is None else np.array(x0, dtype=float)
    for _ in range(n):
        if omega.needs_state:
            y = _interp.interp1d(prev_field, grid, x, order)
            w = omega(t_k, x, y)
        else:
            w = omega(t_k, x)
        x = check_departure(xA - tau * w, grid, xA)
    return x if x.ndim else float(x)


def departure_trapezoid(xA, wD, wA, tau):
    """``xA - tau/2 (wD + wA)``."""
    _finite(xA, wD, wA, tau)
    return xA - 0.5 * tau * (wD + wA)


def departure_simpson(xA, wD, wI, wA, tau):
    """``xA - tau/6 (wD + 4 wI + wA)`` with ``wI`` the midpoint speed."""
    _finite(xA, wD, wI, wA, tau)
    return xA - tau / 6.0 * (wD + 4.0 * wI + wA)


def departure_euler_2d(xA, yA, uD, vD, tau):
    _finite(xA, yA, uD, vD, tau)
    return xA - tau * uD, yA - tau * vD
