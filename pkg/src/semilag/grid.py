"""Uniform periodic grids in space and time."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# index-space distance below which a coordinate is snapped onto a node
_SNAP = 8 * np.finfo(float).eps


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on ``[a, b]`` with ``M`` cells and periodic topology.

    Nodes are ``x_i = a + i*h`` for ``i = 0..M``; node ``M`` is the periodic
    image of node 0.
    """

    a: float
    b: float
    M: int
    h: float = field(init=False)

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M!r}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or self.b <= self.a:
            raise ValueError(f"invalid interval [{self.a}, {self.b}]")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "h", (self.b - self.a) / self.M)

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def nodes(self) -> np.ndarray:
        return self.a + np.arange(self.M + 1) * self.h

    def node(self, i: int) -> float:
        return node(self, i)

    def wrap(self, x):
        return wrap(self, x)

    def locate(self, x):
        return locate(self, x)


@dataclass(frozen=True)
class Grid2D:
    """Tensor product of two uniform periodic grids, x first."""

    ax: float
    bx: float
    cy: float
    dy: float
    Mx: int
    My: int

    def __post_init__(self):
        # validates both axes
        self.xgrid, self.ygrid

    @property
    def xgrid(self) -> Grid1D:
        return Grid1D(self.ax, self.bx, self.Mx)

    @property
    def ygrid(self) -> Grid1D:
        return Grid1D(self.cy, self.dy, self.My)

    @property
    def hx(self) -> float:
        return (self.bx - self.ax) / self.Mx

    @property
    def hy(self) -> float:
        return (self.dy - self.cy) / self.My

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Mx + 1, self.My + 1)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinates as two ``(Mx+1, My+1)`` arrays ('ij' indexing)."""
        return np.meshgrid(self.xgrid.nodes, self.ygrid.nodes, indexing="ij")


@dataclass(frozen=True)
class TimeGrid:
    T: float
    N: int
    tau: float = field(init=False)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 0:
            raise ValueError(f"N must be a non-negative integer, got {self.N!r}")
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValueError(f"T must be positive, got {self.T!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "tau", self.T / self.N if self.N else self.T)

    def t(self, k: int) -> float:
        if k == self.N:
            return self.T
        return k * self.tau

    @property
    def times(self) -> np.ndarray:
        t = np.arange(self.N + 1) * self.tau
        t[-1] = self.T
        return t


def node(grid: Grid1D, i: int) -> float:
    if not 0 <= i <= grid.M:
        raise IndexError(f"node index {i} outside 0..{grid.M}")
    if i == grid.M:
        return grid.b
    return grid.a + i * grid.h


def wrap(grid: Grid1D, x):
    """Map ``x`` into ``[a, b)`` modulo the period ``b - a``."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot wrap a non-finite coordinate")
    L = grid.length
    xw = grid.a + np.mod(x - grid.a, L)
    # np.mod can round up to exactly L for tiny negative offsets
    xw = np.where(xw >= grid.b, grid.a, xw)
    return xw if xw.ndim else float(xw)


def _locate_index(grid: Grid1D, x):
    u = (np.asarray(x, dtype=float) - grid.a) / grid.h
    r = np.rint(u)
    u = np.where(np.abs(u - r) <= _SNAP * np.maximum(1.0, np.abs(u)), r, u)
    u = np.mod(u, grid.M)
    i = np.floor(u).astype(np.intp)
    # u within rounding of M after the mod
    i = np.minimum(i, grid.M - 1)
    return i, u - i


def locate(grid: Grid1D, x):
    """Return ``(i, theta)`` with ``node(i) <= x < node(i+1)`` and
    ``theta = (x - node(i)) / h``.

    ``x`` must already lie in ``[a, b)``. Coordinates within a few ulps of a
    node are snapped onto it so that nodal values are reproduced exactly.
    """
    i, theta = _locate_index(grid, x)
    if np.ndim(i) == 0:
        return int(i), float(theta)
    return i, theta
