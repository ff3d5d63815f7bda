"""Inviscid Burgers: the lifted operator is nilpotent.

With ``F0 = F1 = 0`` the truncated exponential is a finite sum, so the
level-1 block is a polynomial in ``t``. For ``u0(x) = x`` that polynomial is
the partial sum of ``x / (1 + t)``. For a small sine the series is compared
with the method of characteristics.
"""

import numpy as np

from carleman.integrators import nilpotent_expm_apply, taylor_series_solution
from carleman.models import BurgersParams, burgers_reference, burgers_system, make_preset, sample
from carleman.pde import GridSpec, PDECarlemanOperator, lift_initial_grid

# linear profile, evaluated without forming any tensor above level 2
grid = GridSpec.box(33)
x = grid.axes[0].nodes
system = burgers_system(BurgersParams(0.0, grid))
t = 0.5
print("u0 = x, t = 0.5")
for N in (2, 4, 6, 8, 10):
    u = taylor_series_solution(system, x, N, t)
    print(f"  N={N:>2}  max |u_N - x/(1+t)| = {np.max(np.abs(u - x / (1 + t))):.3e}"
          f"  (tail bound {t**N / (1 + t):.3e})")

# the same numbers from the full lifted state on a coarse grid
coarse = GridSpec.box(9)
op = PDECarlemanOperator(burgers_system(BurgersParams(0.0, coarse)), 5)
xc = coarse.axes[0].nodes
z = nilpotent_expm_apply(op, t, lift_initial_grid(xc, 5))
series = taylor_series_solution(op.system, xc, 5, t)
print(f"  full lift (9 points, N=5) vs series: {np.max(np.abs(z.blocks[0] - series)):.1e}")

# small sine on a spectral grid
grid = GridSpec.periodic(64, scheme="spectral")
p = BurgersParams(0.0, grid)
u0 = make_preset("sine", amplitude=0.05)
ref = burgers_reference(p, u0, 1.0)
print("u0 = 0.05 sin(x), t = 1, 64 spectral points")
for N in range(1, 9):
    u = taylor_series_solution(burgers_system(p), sample(grid, u0), N, 1.0)
    print(f"  N={N}  max error vs {ref.method}: {np.max(np.abs(u - ref.field)):.3e}")
