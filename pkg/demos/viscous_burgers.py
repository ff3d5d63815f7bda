"""Viscous Burgers at low truncation levels.

``u_t + u u_x = u_xx`` from ``0.1 sin(x)`` on 32 spectral points. The lifted
system is integrated with RK4 at ``N = 1, 2, 3`` and compared with a
pseudo-spectral solve of the nonlinear equation. ``N = 1`` is the heat
equation; each level adds one order of the nonlinear correction.
"""

import time

import numpy as np

from carleman.integrators import IntegratorConfig, integrate
from carleman.models import BurgersParams, burgers_reference, burgers_system, make_preset, sample
from carleman.pde import GridSpec, PDECarlemanOperator, lift_initial_grid

grid = GridSpec.periodic(32, scheme="spectral")
p = BurgersParams(1.0, grid)
u0 = make_preset("sine", amplitude=0.1)
ref = burgers_reference(p, u0, 1.0)
config = IntegratorConfig("rk4", 1e-3, 16, 1.0)

print(f"{'N':>2} {'state size':>11} {'max error':>10} {'seconds':>8}")
for N in (1, 2, 3):
    start = time.perf_counter()
    op = PDECarlemanOperator(burgers_system(p), N)
    z = integrate(op, lift_initial_grid(sample(grid, u0), N), config, stride=10**9)[-1]
    err = np.max(np.abs(z.blocks[0] - ref.field))
    print(f"{N:>2} {op.delta:>11} {err:>10.3e} {time.perf_counter() - start:>8.2f}")
