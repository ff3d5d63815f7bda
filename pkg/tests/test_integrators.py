import math

import numpy as np
import pytest

from carleman import CarlemanOperator, LiftedState, NumericalAbort, QuadraticODESystem, lift_initial
from carleman.integrators import (
    AllocationTracker,
    IntegratorConfig,
    estimate_norm,
    expm_action,
    integrate,
    nilpotent_expm_apply,
    rk4_integrate,
    taylor_series_solution,
)
from carleman.models import BurgersParams, burgers_system, make_preset, sample
from carleman.models import ode_models
from carleman.pde import GridSpec, PDECarlemanOperator, lift_initial_grid


def scalar(lam, b=0.0):
    return CarlemanOperator(QuadraticODESystem([b], [[lam]], [[0.0]]), 1)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(method="euler")
    with pytest.raises(ValueError):
        IntegratorConfig(dt=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(dt=2.0, t_final=1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(taylor_order=0)
    assert IntegratorConfig(dt=2.0, t_final=0.0).steps() == (0, 0.0)
    n, h = IntegratorConfig(dt=0.3, t_final=1.0).steps()
    assert n == 4 and n * h == pytest.approx(1.0, abs=1e-15)


def test_zero_system_is_constant():
    op = CarlemanOperator(ode_models.zero(2), 3)
    z0 = lift_initial([0.3, -0.2], 3)
    for traj in (integrate(op, z0, IntegratorConfig("rk4", 0.1, 16, 1.0)),
                 integrate(op, z0, IntegratorConfig("taylor-exp", 0.1, 16, 1.0))):
        for z in traj:
            for a, b in zip(z.blocks, z0.blocks):
                np.testing.assert_array_equal(a, b)


def test_trajectory_stride_and_times():
    traj = integrate(scalar(-1.0), lift_initial([1.0], 1), IntegratorConfig("rk4", 0.1, 16, 1.0), stride=3)
    assert [round(z.t, 12) for z in traj] == [0.0, 0.3, 0.6, 0.9, 1.0]


def test_rk4_scalar_exponential():
    traj = integrate(scalar(-1.0), lift_initial([1.0], 1), IntegratorConfig("rk4", 1e-3, 16, 1.0))
    assert abs(traj[-1].blocks[0][0] - math.exp(-1)) <= 1e-8


def test_rk4_fourth_order():
    op = scalar(-1.0)
    z0 = lift_initial([1.0], 1)

    def err(dt):
        z = integrate(op, z0, IntegratorConfig("rk4", dt, 16, 1.0))[-1]
        return abs(z.blocks[0][0] - math.exp(-1))

    ratio = err(0.1) / err(0.05)
    assert 12 <= ratio <= 20


def test_rk4_reports_abort_step():
    op = scalar(1000.0)
    with pytest.raises(NumericalAbort) as info:
        with np.errstate(over="ignore", invalid="ignore"):
            rk4_integrate(op.rhs, lift_initial([1.0], 1), IntegratorConfig("rk4", 0.5, 16, 100.0))
    assert info.value.step > 1


def test_expm_zero_operator_with_source():
    op = scalar(0.0, b=1.5)
    z0 = lift_initial([0.2], 1)
    z = expm_action(op.apply_linear, op.inhomogeneity(), z0, 2.0, order=4, substeps=1)
    assert z.blocks[0][0] == pytest.approx(0.2 + 2.0 * 1.5, abs=1e-15)


def test_expm_scalar_exponential():
    op = scalar(-2.0)
    z = expm_action(op.apply_linear, None, lift_initial([1.0], 1), 1.0, order=20, substeps=1)
    assert abs(z.blocks[0][0] - math.exp(-2)) <= 1e-12


def test_expm_rejects_bad_arguments():
    op = scalar(-1.0)
    with pytest.raises(ValueError):
        expm_action(op.apply_linear, None, lift_initial([1.0], 1), 1.0, order=0)
    with pytest.raises(ValueError):
        expm_action(op.apply_linear, None, lift_initial([1.0], 1), 1.0, substeps=0)


def test_expm_with_source_matches_closed_form():
    # u' = -u + 1: u(t) = 1 + (u0 - 1) e^{-t}
    op = scalar(-1.0, b=1.0)
    z = expm_action(op.apply_linear, op.inhomogeneity(), lift_initial([0.0], 1), 1.0, order=20)
    assert abs(z.blocks[0][0] - (1 - math.exp(-1))) <= 1e-12


def test_semigroup():
    op = CarlemanOperator(ode_models.logistic(), 4)
    z0 = lift_initial([0.2], 4)
    a = expm_action(op.apply_linear, None, z0, 0.3, order=20)
    a = expm_action(op.apply_linear, None, a, 0.5, order=20)
    b = expm_action(op.apply_linear, None, z0, 0.8, order=20)
    for x, y in zip(a.blocks, b.blocks):
        np.testing.assert_allclose(x, y, atol=1e-10, rtol=0)


def test_estimate_norm_scalar():
    op = scalar(-2.0)
    assert estimate_norm(op.apply_linear, lift_initial([1.0], 1)) == pytest.approx(2.0)


def inviscid(grid, N):
    return PDECarlemanOperator(burgers_system(BurgersParams(0.0, grid)), N)


def test_nilpotent_identity_at_zero_time():
    op = inviscid(GridSpec.periodic(8), 3)
    z0 = lift_initial_grid(sample(op.system.grid, make_preset("sine")), 3)
    z = nilpotent_expm_apply(op, 0.0, z0)
    for a, b in zip(z.blocks, z0.blocks):
        np.testing.assert_array_equal(a, b)


def test_nilpotent_two_levels():
    op = inviscid(GridSpec.periodic(8), 2)
    z0 = lift_initial_grid(sample(op.system.grid, make_preset("sine")), 2)
    z = nilpotent_expm_apply(op, 0.7, z0)
    np.testing.assert_allclose(z.blocks[0], z0.blocks[0] + 0.7 * op.transfer_apply(1, 2, z0.blocks[1]),
                               atol=1e-15)


def test_nilpotent_matches_expm_action():
    grid = GridSpec.periodic(8)
    N = 4
    op = inviscid(grid, N)
    rng = np.random.default_rng(8)
    z0 = LiftedState([rng.standard_normal(8**i) for i in range(1, N + 1)])
    a = nilpotent_expm_apply(op, 0.35, z0)
    b = expm_action(op.apply_linear, None, z0, 0.35, order=N - 1, substeps=1)
    for x, y in zip(a.blocks, b.blocks):
        np.testing.assert_allclose(x, y, atol=1e-13, rtol=0)


def test_nilpotent_rejects_linear_part():
    op = PDECarlemanOperator(burgers_system(BurgersParams(0.5, GridSpec.periodic(8))), 2)
    with pytest.raises(ValueError):
        nilpotent_expm_apply(op, 0.1, op.zeros())
    with pytest.raises(ValueError):
        taylor_series_solution(op.system, np.zeros(8), 2, 0.1)


def test_linear_profile_partial_sum():
    grid = GridSpec.box(17)
    op = inviscid(grid, 6)
    x = grid.axes[0].nodes
    z = nilpotent_expm_apply(op, 0.3, lift_initial_grid(x, 6))
    want = x * sum((-0.3) ** j for j in range(6))
    np.testing.assert_allclose(z.blocks[0][1:-1], want[1:-1], atol=1e-10, rtol=0)


def test_series_matches_nilpotent_block1():
    grid = GridSpec.periodic(8)
    N = 4
    op = inviscid(grid, N)
    u0 = sample(grid, make_preset("sine", amplitude=0.3))
    z = nilpotent_expm_apply(op, 0.6, lift_initial_grid(u0, N))
    got = taylor_series_solution(op.system, u0, N, 0.6)
    np.testing.assert_allclose(got, z.blocks[0], atol=1e-14, rtol=0)


def test_series_trivial_cases():
    grid = GridSpec.periodic(16)
    sys = burgers_system(BurgersParams(0.0, grid))
    u0 = sample(grid, make_preset("sine"))
    np.testing.assert_array_equal(taylor_series_solution(sys, u0, 5, 0.0), u0)
    c = np.full(16, 0.7)
    np.testing.assert_allclose(taylor_series_solution(sys, c, 6, 1.0), c, atol=1e-14)


def test_series_never_allocates_above_level_two():
    grid = GridSpec.periodic(32)
    sys = burgers_system(BurgersParams(0.0, grid))
    tracker = AllocationTracker()
    taylor_series_solution(sys, sample(grid, make_preset("sine", amplitude=0.1)), 8, 0.5, tracker)
    assert tracker.allocations > 0
    assert tracker.max_level == 2
