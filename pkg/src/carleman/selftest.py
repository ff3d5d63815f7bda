"""Quick oracle-equivalence checks behind ``carleman selftest``.

Each check returns ``(name, passed, value)`` where ``value`` is the measured
discrepancy compared against the check's tolerance.
"""

from __future__ import annotations

import numpy as np

from .integrators import (
    IntegratorConfig,
    expm_action,
    integrate,
    nilpotent_expm_apply,
    taylor_series_solution,
)
from .kron import LiftIndex, kron_power, kron_vec, lifted_apply, lifted_matrix
from .models import ode_models
from .models.burgers import BurgersParams, burgers_direct_rhs, burgers_f2, burgers_system
from .models.presets import make_preset, sample
from .models.vlasov import VlasovParams, field_operator, vlasov_direct_rhs, vlasov_system
from .ode import CarlemanOperator, QuadraticODESystem, carleman_delta, lift_initial
from .opdsl import compile_operator
from .pde.carleman import PDECarlemanOperator, lift_initial_grid, pde_rhs
from .pde.grid import Axis, GridSpec
from .pde.operators import Compose, Scale


def _random_system(rng, n):
    return QuadraticODESystem(
        rng.uniform(-1, 1, n), rng.uniform(-1, 1, (n, n)), rng.uniform(-1, 1, (n, n * n))
    )


def check_dense(rng):
    worst = 0.0
    for n in (1, 2, 3):
        for i in (1, 2, 3):
            for nu in range(1, i + 1):
                F = rng.uniform(-1, 1, (n, n * n))
                y = rng.standard_normal(n ** (i + 1))
                dense = lifted_matrix(F, LiftIndex(i, nu), n) @ y
                worst = max(worst, float(np.max(np.abs(lifted_apply(F, LiftIndex(i, nu), y) - dense))))
    return worst, 1e-12


def check_leibniz(rng):
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 4))
        system = _random_system(rng, n)
        u = rng.uniform(-1, 1, n)
        f = system.vector_field(u)
        op = CarlemanOperator(system, 5)
        z = lift_initial(u, 5)
        got = op.rhs(z)
        for i in range(1, 5):
            want = sum(
                kron_vec(kron_vec(kron_power(u, nu - 1), f), kron_power(u, i - nu))
                for nu in range(1, i + 1)
            )
            worst = max(worst, float(np.max(np.abs(got.blocks[i - 1] - want))))
    return worst, 1e-12


def check_delta(rng):
    bad = abs(carleman_delta(2, 3) - 14)
    for _ in range(20):
        n, N = int(rng.integers(1, 5)), int(rng.integers(1, 7))
        bad += abs(carleman_delta(n, N) - sum(n**i for i in range(1, N + 1)))
    return float(bad), 0.5


def check_logistic(rng):
    system = ode_models.logistic()
    ic = IntegratorConfig("rk4", 1e-2, 16, 1.0)
    exact = ode_models.logistic_exact(0.1, 1.0)
    errs = []
    for N in range(1, 6):
        z = integrate(CarlemanOperator(system, N), lift_initial([0.1], N), ic, stride=10**9)[-1]
        errs.append(abs(z.blocks[0][0] - exact))
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    return (errs[-1] if decreasing else np.inf), 1e-4


def check_burgers_level1(rng):
    grid = GridSpec.periodic(32)
    p = BurgersParams(0.7, grid)
    u = sample(grid, make_preset("sine", amplitude=0.3))
    got = pde_rhs(burgers_system(p), 2, lift_initial_grid(u, 2)).blocks[0]
    return float(np.max(np.abs(got - burgers_direct_rhs(p, u)))), 1e-12


def check_vlasov_level1(rng):
    grid = GridSpec((Axis(8, 0, 2 * np.pi, "periodic"), Axis(8, -6, 6, "box")))
    p = VlasovParams(1.0, -0.5, grid)
    u = sample(grid, make_preset("two-stream"), 2)
    got = pde_rhs(vlasov_system(p), 2, lift_initial_grid(u, 2)).blocks[0]
    return float(np.max(np.abs(got - vlasov_direct_rhs(p, u).reshape(-1)))), 1e-10


def check_nilpotent(rng):
    grid = GridSpec.periodic(8)
    op = PDECarlemanOperator(burgers_system(BurgersParams(0.0, grid)), 4)
    z0 = lift_initial_grid(sample(grid, make_preset("sine", amplitude=0.2)), 4)
    a = nilpotent_expm_apply(op, 0.4, z0)
    b = expm_action(op.apply_linear, None, z0, 0.4, order=3, substeps=1)
    return max(float(np.max(np.abs(x - y))) for x, y in zip(a.blocks, b.blocks)), 1e-13


def check_series_linear(rng):
    grid = GridSpec.box(21)
    system = burgers_system(BurgersParams(0.0, grid))
    x = grid.axes[0].nodes
    got = taylor_series_solution(system, x, 6, 0.3)
    want = x * sum((-0.3) ** j for j in range(6))
    return float(np.max(np.abs(got - want)[1:-1])), 1e-10


def check_dsl(rng):
    g1 = GridSpec.periodic(16)
    f = rng.standard_normal((16, 16, 1))
    a = compile_operator("-delta(w1=x1) * d/dx1", g1).apply(f, g1)
    worst = float(np.max(np.abs(a - burgers_f2("x").apply(f, g1))))
    g2 = GridSpec((Axis(8, 0, 2 * np.pi, "periodic"), Axis(8, -6, 6, "box")))
    F = rng.standard_normal((8, 8, 8, 8, 1))
    a = compile_operator("-c1 * d/dx2 * cumint(w1) * int(w2)", g2, {"c1": 0.8}).apply(F, g2)
    b = Compose(Scale(-0.8), field_operator()).apply(F, g2)
    return max(worst, float(np.max(np.abs(a - b)))), 1e-13


def check_f2_variants(rng):
    grid = GridSpec.periodic(16)
    u = rng.standard_normal(16)
    pair = np.multiply.outer(u, u)[..., None]
    a = burgers_f2("x").apply(pair, grid)
    b = burgers_f2("w").apply(pair, grid)
    return float(np.max(np.abs(a - b))), 1e-12


CHECKS = [
    ("dense-kronecker", check_dense),
    ("ode-leibniz", check_leibniz),
    ("delta-formula", check_delta),
    ("logistic-convergence", check_logistic),
    ("burgers-level1", check_burgers_level1),
    ("vlasov-level1", check_vlasov_level1),
    ("nilpotent-exponential", check_nilpotent),
    ("series-linear-profile", check_series_linear),
    ("dsl-vs-hand-built", check_dsl),
    ("f2-variants", check_f2_variants),
]


def run_checks(seed: int = 0):
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in CHECKS:
        value, tol = fn(rng)
        out.append((name, bool(value <= tol), float(value)))
    return out
