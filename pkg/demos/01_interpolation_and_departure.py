r"""
Interpolation and departure points
==================================

Every semi-Lagrangian step does two things at each grid node: it traces the
characteristic back to a departure point, and it interpolates the old
solution there. This script looks at both pieces on their own.
"""

import numpy as np

from semilag import Grid1D, Omega, departure_euler, interp1d

grid = Grid1D(0.0, 1.0, 16)
field = np.sin(2 * np.pi * grid.nodes)[None]

# %%
# Piecewise Lagrange interpolation on the periodic grid. Points outside
# [0, 1) are wrapped, so x = 1.1 and x = 0.1 give the same value.
x = np.linspace(-0.25, 1.25, 7)
for order in (1, 2, 3, 4):
    err = np.abs(interp1d(field, grid, x, order)[0] - np.sin(2 * np.pi * x)).max()
    print(f"order {order}: max interpolation error {err:.2e}")

# %%
# Departure points for a speed that depends on position. The fixed-point
# iteration x <- x_A - tau * omega(x) contracts quickly; five passes is the
# usual choice.
omega = Omega.tx(lambda t, x: 1.0 + 0.5 * np.sin(2 * np.pi * x))
xA = grid.nodes
for n in (1, 2, 3, 5, 8):
    xD = departure_euler(xA, omega, field, grid, t_k=0.0, tau=0.05, n=n)
    print(f"n = {n}: departure of node 4 = {xD[4]:.12f}")
