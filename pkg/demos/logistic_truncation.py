"""Truncation error of the lifted logistic equation.

``u' = u - u**2`` with ``u(0) = 0.1`` is lifted to levels ``N = 1..10`` and
integrated to ``t = 1`` with the Taylor exponential. Each extra level buys
roughly a factor ``u0 * (e - 1)`` in accuracy.
"""

from carleman import CarlemanOperator, lift_initial
from carleman.integrators import IntegratorConfig, integrate
from carleman.models import ode_models

u0, T = 0.1, 1.0
system = ode_models.logistic()
exact = ode_models.logistic_exact(u0, T)
config = IntegratorConfig("taylor-exp", 0.05, 16, T)

print(f"exact u(1) = {exact:.15f}")
print(f"{'N':>3} {'delta':>6} {'u_N(1)':>18} {'error':>10} {'ratio':>7}")
prev = None
for N in range(1, 11):
    op = CarlemanOperator(system, N)
    z = integrate(op, lift_initial([u0], N), config, stride=10**9)[-1]
    err = abs(z.blocks[0][0] - exact)
    ratio = f"{err / prev:.3f}" if prev else ""
    print(f"{N:>3} {op.delta:>6} {z.blocks[0][0]:>18.15f} {err:>10.3e} {ratio:>7}")
    prev = err
