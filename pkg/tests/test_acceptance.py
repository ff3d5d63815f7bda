"""Acceptance run: one pass/fail line per criterion, at its stated tolerance.

Each test prints ``[PASS]`` or ``[FAIL]`` with the measured value, the
tolerance and the wall time against the runtime budget; the lines are
repeated in the terminal summary.
"""

import numpy as np

from carleman import CarlemanOperator, LiftIndex, QuadraticODESystem, carleman_delta, kron_power, kron_vec
from carleman import lifted_apply, lift_initial
from carleman.integrators import (
    IntegratorConfig,
    expm_action,
    integrate,
    nilpotent_expm_apply,
    taylor_series_solution,
)
from carleman.models import (
    BurgersParams,
    VlasovParams,
    burgers_direct_rhs,
    burgers_f2,
    burgers_reference,
    burgers_system,
    field_operator,
    make_preset,
    sample,
    vlasov_direct_rhs,
    vlasov_nonlinear_term,
    vlasov_system,
)
from carleman.models import ode_models
from carleman.opdsl import (
    Const,
    Coord,
    CumInt,
    Delta,
    Deriv,
    FullInt,
    Neg,
    Product,
    Sum,
    Symbol,
    compile_operator,
    parse_operator,
    pretty,
)
from carleman.pde import Axis, Compose, GridSpec, PDECarlemanOperator, Scale, lift_initial_grid
from carleman.pde import pde_rhs, pde_transfer_apply


def random_system(rng, n):
    return QuadraticODESystem(
        rng.uniform(-1, 1, n), rng.uniform(-1, 1, (n, n)), rng.uniform(-1, 1, (n, n * n))
    )


def product_rule(u, f, i):
    """``sum_nu u x .. x f x .. x u`` with ``f`` in slot ``nu``."""
    return sum(kron_vec(kron_vec(kron_power(u, nu - 1), f), kron_power(u, i - nu)) for nu in range(1, i + 1))


def max_diff(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def vlasov_grid(g=16):
    return GridSpec((Axis(g, 0, 2 * np.pi, "periodic"), Axis(g, -6, 6, "box")))


def test_criterion_01_ode_leibniz(criterion):
    rec = criterion(1, 5.0)
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        system = random_system(rng, n)
        u = rng.uniform(-1, 1, n)
        f = system.vector_field(u)
        got = CarlemanOperator(system, 5).rhs(lift_initial(u, 5))
        for i in range(1, 5):
            worst = max(worst, max_diff(got.blocks[i - 1], product_rule(u, f, i)))
    assert rec.finish(worst <= 1e-12, f"100 systems, levels 1..4, max diff {worst:.3e} vs tol 1e-12")


def test_criterion_02_dense_oracle(criterion):
    rec = criterion(2, 5.0)
    rng = np.random.default_rng(102)
    worst = 0.0
    for n in (1, 2, 3):
        system = random_system(rng, n)
        op = CarlemanOperator(system, 4)
        for i in (1, 2, 3):
            for j in (0, 1, 2):
                F = system.coefficient(j)
                y = rng.standard_normal(n ** (i + j - 1))
                total = np.zeros((n**i, n ** (i + j - 1)))
                for nu in range(1, i + 1):
                    dense = np.kron(np.kron(np.eye(n ** (nu - 1)), F), np.eye(n ** (i - nu)))
                    total += dense
                    worst = max(worst, max_diff(lifted_apply(F, LiftIndex(i, nu), y), dense @ y))
                worst = max(worst, max_diff(op.transfer_apply(i, j, y), total @ y))
    assert rec.finish(worst <= 1e-12, f"n<=3, i<=3, j in 0..2, max diff {worst:.3e} vs tol 1e-12")


def test_criterion_03_delta_formula(criterion):
    rec = criterion(3, None)
    rng = np.random.default_rng(103)
    base = carleman_delta(2, 3)
    mismatches = 0
    for _ in range(50):
        n, N = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        op = CarlemanOperator(random_system(rng, n), N, memory_cap=None)
        blocks = sum(op.block_size(i) for i in range(1, N + 1))
        mismatches += int(carleman_delta(n, N) != blocks or op.delta != blocks)
    ok = base == 14 and mismatches == 0
    assert rec.finish(ok, f"delta(2,3) = {base} (want 14), {mismatches}/50 random pairs disagree with block lengths")


def test_criterion_04_logistic_convergence(criterion):
    rec = criterion(4, 10.0)
    system = ode_models.logistic()
    _, ref = ode_models.nonlinear_rk4(system, [0.1], 1.0, 1e-5, sample_every=10**9)
    oracle = ref[-1, 0]
    config = IntegratorConfig("taylor-exp", 0.05, 16, 1.0)
    errs = []
    for N in range(1, 9):
        z = integrate(CarlemanOperator(system, N), lift_initial([0.1], N), config, stride=10**9)[-1]
        errs.append(abs(z.blocks[0][0] - oracle))
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    listing = ", ".join(f"{e:.3e}" for e in errs)
    detail = (f"errors N=1..8 [{listing}], strictly decreasing: {decreasing}, "
              f"error(N=8) {errs[-1]:.3e} vs tol 1e-08")
    assert rec.finish(decreasing and errs[-1] <= 1e-8, detail)


def test_criterion_05_grid_leibniz(criterion):
    rec = criterion(5, 30.0)
    rng = np.random.default_rng(105)
    worst_b = 0.0
    grid = GridSpec.periodic(32)
    p = BurgersParams(0.7, grid)
    sys = burgers_system(p)
    u = rng.uniform(-1, 1, 32)
    f = burgers_direct_rhs(p, u)
    for i in (1, 2, 3):
        got = pde_transfer_apply(sys, i, 1, kron_power(u, i)) + pde_transfer_apply(sys, i, 2, kron_power(u, i + 1))
        worst_b = max(worst_b, max_diff(got, product_rule(u, f, i)))

    worst_v = 0.0
    vgrid = vlasov_grid(16)
    pv = VlasovParams(1.0, -0.5, vgrid)
    vsys = vlasov_system(pv)
    w = sample(vgrid, make_preset("two-stream"), 2) + 0.1 * rng.uniform(-1, 1, vgrid.shape + (2,))
    flat = w.reshape(-1)
    fv = vlasov_direct_rhs(pv, w).reshape(-1)
    for i in (1, 2):
        got = pde_transfer_apply(vsys, i, 1, kron_power(flat, i))
        got = got + pde_transfer_apply(vsys, i, 2, kron_power(flat, i + 1))
        worst_v = max(worst_v, max_diff(got, product_rule(flat, fv, i)))
    worst = max(worst_b, worst_v)
    detail = (f"Burgers g=32 levels 1..3 {worst_b:.3e}, Vlasov 16x16 levels 1..2 {worst_v:.3e}, "
              f"vs tol 1e-11")
    assert rec.finish(worst <= 1e-11, detail)


def test_criterion_06_nilpotent_exponential(criterion):
    rec = criterion(6, 10.0)
    rng = np.random.default_rng(106)
    worst = 0.0
    for g, N in ((8, 4), (8, 5), (16, 4)):
        op = PDECarlemanOperator(burgers_system(BurgersParams(0.0, GridSpec.periodic(g))), N)
        for t in (0.1, 0.5, 1.0):
            u = rng.uniform(-1, 1, g)
            z0 = lift_initial_grid(u, N)
            a = nilpotent_expm_apply(op, t, z0)
            b = expm_action(op.apply_linear, None, z0, t, order=N - 1, substeps=1)
            worst = max(worst, max(max_diff(x, y) for x, y in zip(a.blocks, b.blocks)))
    assert rec.finish(worst <= 1e-13, f"closed form vs Taylor order N-1, max diff {worst:.3e} vs tol 1e-13")


def test_criterion_07_linear_profile(criterion):
    rec = criterion(7, 5.0)
    grid = GridSpec.box(33)
    x = grid.axes[0].nodes
    t = 0.5
    got = taylor_series_solution(burgers_system(BurgersParams(0.0, grid)), x, 10, t)
    partial = x * sum((-t) ** j for j in range(10))
    interior = slice(1, -1)
    err_sum = max_diff(got[interior], partial[interior])
    nz = x != 0
    tail = np.abs(got[nz] - x[nz] / (1 + t))
    predicted = np.abs(x[nz]) * t**10 / (1 + t)
    ratio = tail / predicted
    ok = err_sum <= 1e-10 and np.all((ratio >= 0.5) & (ratio <= 2.0))
    detail = (f"partial-sum error {err_sum:.3e} vs tol 1e-10, "
              f"tail/predicted in [{ratio.min():.4f}, {ratio.max():.4f}] vs [0.5, 2]")
    assert rec.finish(ok, detail)


def test_criterion_08_smooth_inviscid(criterion):
    rec = criterion(8, 60.0)
    grid = GridSpec.periodic(64, scheme="spectral")
    p = BurgersParams(0.0, grid)
    u0 = make_preset("sine", amplitude=0.05)
    got = taylor_series_solution(burgers_system(p), sample(grid, u0), 8, 1.0)
    ref = burgers_reference(p, u0, 1.0)
    assert ref.method == "characteristics"
    err = max_diff(got, ref.field)
    assert rec.finish(err <= 1e-6, f"N=8, t=1 max error vs characteristics {err:.3e} vs tol 1e-06")


def test_criterion_09_viscous_convergence(criterion):
    rec = criterion(9, 120.0)
    grid = GridSpec.periodic(32, scheme="spectral")
    p = BurgersParams(1.0, grid)
    u0 = make_preset("sine", amplitude=0.1)
    ref = burgers_reference(p, u0, 1.0)
    u = sample(grid, u0)
    config = IntegratorConfig("rk4", 1e-3, 16, 1.0)
    errs = []
    for N in (1, 2, 3):
        op = PDECarlemanOperator(burgers_system(p), N)
        z = integrate(op, lift_initial_grid(u, N), config, stride=10**9)[-1]
        errs.append(max_diff(z.blocks[0], ref.field))
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    listing = ", ".join(f"{e:.3e}" for e in errs)
    assert rec.finish(decreasing, f"errors N=1,2,3 [{listing}] vs {ref.method}, decreasing: {decreasing}")


def test_criterion_10_vlasov_level1(criterion):
    rec = criterion(10, 30.0)
    grid = vlasov_grid(16)
    p = VlasovParams(1.0, -0.5, grid)
    u = sample(grid, make_preset("two-stream"), 2)
    got = pde_rhs(vlasov_system(p), 2, lift_initial_grid(u, 2)).blocks[0]
    err = max_diff(got, vlasov_direct_rhs(p, u).reshape(-1))
    eq = sample(grid, make_preset("equal-species"), 2)
    nl = float(np.max(np.abs(vlasov_nonlinear_term(VlasovParams(1.0, -1.0, grid), eq))))
    ok = err <= 1e-10 and nl <= 1e-12
    assert rec.finish(ok, f"block-1 vs direct {err:.3e} vs tol 1e-10, equal-species nonlinear {nl:.3e} vs tol 1e-12")


RESERVED_NAMES = {"cumint", "int", "delta", "d"}


def random_ast(rng, depth=0):
    """Random expression tree with at most about 20 leaves."""
    if depth >= 3 or rng.random() < 0.35:
        kind = rng.integers(7)
        dim = int(rng.integers(1, 4))
        copy = "xw"[rng.integers(2)]
        if kind == 0:
            return Const(float(rng.choice([0.0, 1.0, 2.5, 1e-3, 7.25e11, rng.uniform(0, 100)])))
        if kind == 1:
            name = "".join(rng.choice(list("abcefghkmnpqz_"), size=int(rng.integers(1, 5))))
            return Symbol(name if name not in RESERVED_NAMES else "mu")
        if kind == 2:
            return Coord(dim, copy)
        if kind == 3:
            return Deriv(dim, int(rng.integers(1, 5)), copy)
        if kind == 4:
            return CumInt(dim)
        if kind == 5:
            return FullInt(dim)
        return Delta(dim, int(rng.integers(1, 4)))
    kind = rng.integers(3)
    if kind == 0:
        return Neg(random_ast(rng, depth + 1))
    kids = tuple(random_ast(rng, depth + 1) for _ in range(int(rng.integers(2, 4))))
    return Product(kids) if kind == 1 else Sum(kids)


def test_criterion_11_dsl(criterion):
    rec = criterion(11, 10.0)
    rng = np.random.default_rng(111)
    g1 = GridSpec.periodic(16)
    g2 = vlasov_grid(8)
    pv = VlasovParams(0.8, -0.3, g2)
    hand = vlasov_system(pv)
    pairs = [
        (compile_operator("mu * d2/dx1^2", g1, {"mu": 0.4}),
         burgers_system(BurgersParams(0.4, g1)).F1[0][0], g1, (16,)),
        (compile_operator("-delta(w1=x1) * d/dx1", g1), burgers_f2("x"), g1, (16, 16, 1)),
        (compile_operator("-delta(w1=x1) * d/dw1", g1), burgers_f2("w"), g1, (16, 16, 1)),
        (compile_operator("-x2 * d/dx1", g2), hand.F1[0][0], g2, (8, 8)),
        (compile_operator("-c1 * d/dx2 * cumint(w1) * int(w2)", g2, {"c1": 0.8}),
         hand.F2[0][0], g2, (8, 8, 8, 8, 1)),
        (compile_operator("c2 * d/dx2 * cumint(w1) * int(w2)", g2, {"c2": -0.3}),
         hand.F2[1][3], g2, (8, 8, 8, 8, 1)),
    ]
    worst = 0.0
    for _ in range(100):
        for compiled, built, grid, shape in pairs:
            f = rng.standard_normal(shape)
            worst = max(worst, max_diff(compiled.apply(f, grid), built.apply(f, grid)))
    F = rng.standard_normal((8, 8, 8, 8, 1))
    worst = max(worst, max_diff(pairs[4][0].apply(F, g2), Compose(Scale(-0.8), field_operator()).apply(F, g2)))

    failures = 0
    for _ in range(1000):
        ast = random_ast(rng)
        failures += int(parse_operator(pretty(ast)) != ast)
    ok = worst <= 1e-13 and failures == 0
    detail = f"compiled vs hand-built {worst:.3e} vs tol 1e-13, round trip failures {failures}/1000"
    assert rec.finish(ok, detail)


def test_criterion_12_f2_variants(criterion):
    rec = criterion(12, None)
    rng = np.random.default_rng(112)
    worst = 0.0
    for grid in (GridSpec.periodic(16), GridSpec.periodic(16, scheme="spectral"), GridSpec.box(17)):
        sx = burgers_system(BurgersParams(0.2, grid, "x"))
        sw = burgers_system(BurgersParams(0.2, grid, "w"))
        for _ in range(10):
            u = rng.uniform(-1, 1, grid.shape[0])
            T = rng.standard_normal((u.size, u.size))
            sym = (T + T.T).reshape(-1)
            for y2 in (kron_power(u, 2), sym):
                worst = max(worst, max_diff(pde_transfer_apply(sx, 1, 2, y2), pde_transfer_apply(sw, 1, 2, y2)))
            y3 = kron_power(u, 3)
            worst = max(worst, max_diff(pde_transfer_apply(sx, 2, 2, y3), pde_transfer_apply(sw, 2, 2, y3)))
    assert rec.finish(worst <= 1e-12, f"x and w variants on symmetric inputs, max diff {worst:.3e} vs tol 1e-12")
