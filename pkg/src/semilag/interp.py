"""Piecewise Lagrange interpolation on uniform periodic grids.

Fields are stored as arrays whose trailing axis (1D) or trailing two axes
(2D) run over grid nodes, with one leading axis per solution component:
``(n, M+1)`` in 1D and ``(n, Mx+1, My+1)`` in 2D. The last node along each
axis duplicates the first.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid1D, Grid2D, _locate_index, wrap

ORDERS = (1, 2, 3, 4)


def check_order(order) -> int:
    if order not in ORDERS:
        raise ValueError(f"interpolation order must be one of {ORDERS}, got {order!r}")
    return int(order)


def stencil(order: int, i, theta):
    """First stencil node and local coordinate for cell ``i`` at offset ``theta``.

    Odd orders use the symmetric stencil about the cell; even orders centre on
    the nearest node, with the midpoint assigned to the left.
    """
    i = np.asarray(i)
    theta = np.asarray(theta, dtype=float)
    if order % 2:
        shift = np.full(i.shape, (order - 1) // 2)
    else:
        shift = np.where(theta <= 0.5, order // 2, order // 2 - 1)
    return i - shift, theta + shift


def lagrange_weights(order: int, s):
    """Lagrange basis on the nodes ``0..order`` evaluated at ``s``.

    Returns an array of shape ``s.shape + (order+1,)``. Exact (0/1) when ``s``
    is an integer node.
    """
    s = np.asarray(s, dtype=float)
    nodes = np.arange(order + 1)
    diff = s[..., None] - nodes
    w = np.empty(diff.shape)
    for j in range(order + 1):
        others = np.delete(nodes, j)
        w[..., j] = np.prod(diff[..., others], axis=-1) / np.prod(j - others)
    return w


def _combine(vals, w, ref):
    """``sum_j w_j v_j`` evaluated as ``v_r + sum_j w_j (v_j - v_r)``.

    ``r`` is the stencil node nearest the evaluation point, which makes
    constants and nodal values come out bit-exact.
    """
    vr = np.take_along_axis(vals, np.broadcast_to(ref[..., None], vals.shape[:-1] + (1,)), axis=-1)
    return vr[..., 0] + np.sum(w * (vals - vr), axis=-1)


def _axis_weights(grid: Grid1D, x, order):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("interpolation coordinate is not finite")
    i, theta = _locate_index(grid, wrap(grid, x))
    start, s = stencil(order, i, theta)
    idx = start[..., None] + np.arange(order + 1)
    # only stencils hanging past either end wrap around
    idx = np.where((idx >= 0) & (idx <= grid.M), idx, np.mod(idx, grid.M))
    ref = np.clip(np.rint(s), 0, order).astype(np.intp)
    return idx, lagrange_weights(order, s), ref


def interp1d(field, grid: Grid1D, x, order: int = 1):
    """Evaluate the order-``order`` piecewise interpolant of ``field`` at ``x``.

    ``x`` may be a scalar or an array; it is wrapped into the periodic domain.
    The result has shape ``field.shape[:-1] + np.shape(x)``.
    """
    order = check_order(order)
    field = np.asarray(field, dtype=float)
    if field.shape[-1] != grid.M + 1:
        raise ValueError(f"field has {field.shape[-1]} nodes, grid has {grid.M + 1}")
    idx, w, ref = _axis_weights(grid, x, order)
    return _combine(field[..., idx], w, ref)


def interp2d(field, grid: Grid2D, x, y, order: int = 1):
    """Tensor-product Lagrange interpolation of a 2D field at points ``(x, y)``."""
    order = check_order(order)
    field = np.asarray(field, dtype=float)
    if field.shape[-2:] != grid.shape:
        raise ValueError(f"field node shape {field.shape[-2:]} != grid shape {grid.shape}")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    ix, wx, rx = _axis_weights(grid.xgrid, x, order)
    iy, wy, ry = _axis_weights(grid.ygrid, y, order)
    # interpolate along y on each of the order+1 stencil rows, then along x
    rows = np.stack([_combine(field[..., ix[..., a, None], iy], wy, ry)
                     for a in range(order + 1)], axis=-1)
    return _combine(rows, wx, rx)
