"""Command-line front end.

Every subcommand reads a TOML run file (``--config``), writes a CSV table
to ``--out`` and a ``<out>.meta.json`` sidecar that is created before any
computation and finalised with the exit status and wall time.

Exit codes: 0 success, 1 failed selftest or unexpected error, 2 bad
configuration, 3 memory guard, 4 numerical abort.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__
from .integrators import IntegratorConfig, integrate, taylor_series_solution
from .lifted import DEFAULT_MEMORY_CAP, MemoryGuardError, NumericalAbort
from .models import ode_models
from .models.burgers import (
    BreakingTimeError,
    BurgersParams,
    burgers_reference,
    burgers_system,
)
from .models.presets import make_preset, sample
from .models.vlasov import (
    VlasovParams,
    check_velocity_tails,
    species_mass,
    vlasov_direct_rhs,
    vlasov_reference,
    vlasov_system,
)
from .ode import CarlemanOperator, QuadraticODESystem, carleman_delta, lift_initial
from .opdsl import compile_table
from .pde.carleman import (
    PDECarlemanOperator,
    PDEQuadraticSystem,
    lift_initial_grid,
    pde_rhs,
    pde_state_size,
)
from .pde.grid import Axis, GridSpec

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_MEMORY, EXIT_NUMERIC = 0, 1, 2, 3, 4
ODE_REFERENCE_DT = 1e-5
# live copies of the lifted state held by each integrator
WORKING_COPIES = {"rk4": 7, "taylor-exp": 5}


class ConfigError(ValueError):
    pass


# -- config ------------------------------------------------------------------

def load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from None


def _section(cfg: dict, name: str) -> dict:
    sec = cfg.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return sec


def _integrator(cfg: dict, **defaults) -> IntegratorConfig:
    sec = {**defaults, **_section(cfg, "integrator")}
    unknown = set(sec) - {"method", "dt", "taylor_order", "t_final"}
    if unknown:
        raise ConfigError(f"unknown [integrator] keys: {sorted(unknown)}")
    return IntegratorConfig(**sec)


def _level(cfg: dict, default: int) -> int:
    N = _section(cfg, "carleman").get("N", default)
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise ConfigError(f"carleman.N must be an integer >= 1, got {N!r}")
    return N


def _memory_cap(cfg: dict) -> int:
    mb = _section(cfg, "carleman").get("memory_cap_mb")
    return DEFAULT_MEMORY_CAP if mb is None else int(float(mb) * 1024**2)


def _sample_every(cfg: dict) -> int:
    k = _section(cfg, "output").get("sample_every", 1)
    if not isinstance(k, int) or k < 1:
        raise ConfigError(f"output.sample_every must be a positive integer, got {k!r}")
    return k


def _axis(axis_cfg: dict, default_boundary: str) -> Axis:
    axis_cfg = dict(axis_cfg)
    boundary = axis_cfg.pop("boundary", default_boundary)
    points = axis_cfg.pop("points", 32)
    if boundary == "periodic":
        lo, hi = axis_cfg.pop("lower", 0.0), axis_cfg.pop("upper", 2 * math.pi)
    else:
        lo, hi = axis_cfg.pop("lower", -1.0), axis_cfg.pop("upper", 1.0)
    scheme = axis_cfg.pop("scheme", "central")
    if axis_cfg:
        raise ConfigError(f"unknown grid axis keys: {sorted(axis_cfg)}")
    return Axis(points, float(lo), float(hi), boundary, scheme)


def build_grid(cfg: dict, m: int, boundaries: tuple) -> GridSpec:
    sec = _section(cfg, "grid")
    if "axes" in sec:
        axes = sec["axes"]
        if not isinstance(axes, list) or len(axes) != m:
            raise ConfigError(f"grid.axes must list {m} axis table(s)")
        return GridSpec(tuple(_axis(a, b) for a, b in zip(axes, boundaries)))
    if m != 1:
        return GridSpec(tuple(_axis(sec, b) for b in boundaries))
    return GridSpec((_axis(sec, boundaries[0]),))


def _initial(cfg: dict, default: str):
    sec = dict(_section(cfg, "initial"))
    name = sec.pop("preset", default)
    return name, make_preset(name, **sec)


def _dsl_system(cfg: dict, grid: GridSpec, n: int):
    dsl = _section(cfg, "model").get("dsl")
    if dsl is None:
        return None
    if not isinstance(dsl, dict):
        raise ConfigError("model.dsl must be a table")
    bindings = dsl.get("bindings", {})
    F1 = dsl.get("F1")
    F2 = dsl.get("F2")
    F1 = None if F1 is None else compile_table(F1, grid, bindings, arity=1)
    F2 = None if F2 is None else compile_table(F2, grid, bindings, arity=2)
    return PDEQuadraticSystem(grid, n, None, F1, F2)


def build_ode(cfg: dict):
    sec = dict(_section(cfg, "model"))
    name = sec.pop("name", "logistic")
    u0 = sec.pop("u0", None)
    if name == "custom":
        try:
            system = QuadraticODESystem(sec.pop("F0"), sec.pop("F1"), sec.pop("F2"))
        except KeyError as exc:
            raise ConfigError(f"custom ODE model needs {exc.args[0]}") from None
        if sec:
            raise ConfigError(f"unknown [model] keys: {sorted(sec)}")
    elif name in ode_models.PRESETS:
        system = ode_models.PRESETS[name](**sec)
    else:
        raise ConfigError(
            f"unknown ODE model {name!r}; choose from {sorted(ode_models.PRESETS) + ['custom']}"
        )
    u0 = np.full(system.n, 0.1) if u0 is None else np.asarray(u0, dtype=float).reshape(-1)
    if u0.size != system.n:
        raise ConfigError(f"model.u0 needs {system.n} entries, got {u0.size}")
    return name, system, u0


def build_burgers(cfg: dict):
    sec = _section(cfg, "model")
    mu = float(sec.get("mu", 0.0))
    default_boundary = "periodic" if mu > 0 else "box"
    grid = build_grid(cfg, 1, (default_boundary,))
    params = BurgersParams(mu, grid, sec.get("f2_variant", "x"))
    system = _dsl_system(cfg, grid, 1) or burgers_system(params)
    preset, u0 = _initial(cfg, "sine" if grid.axes[0].boundary == "periodic" else "linear")
    return params, system, preset, u0


def build_vlasov(cfg: dict):
    sec = _section(cfg, "model")
    if _section(cfg, "grid"):
        grid = build_grid(cfg, 2, ("periodic", "box"))
    else:
        grid = GridSpec((Axis(16, 0.0, 2 * math.pi, "periodic"), Axis(16, -6.0, 6.0, "box")))
    charges = tuple(float(q) for q in sec.get("charges", (-1.0, 1.0)))
    params = VlasovParams(float(sec.get("c1", 1.0)), float(sec.get("c2", -0.5)), grid, charges)
    system = _dsl_system(cfg, grid, 2) or vlasov_system(params)
    preset, u0 = _initial(cfg, "two-stream")
    return params, system, preset, u0


# -- output ------------------------------------------------------------------

def fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


def write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


class Sidecar:
    """``<out>.meta.json``: written at start, finalised on exit."""

    def __init__(self, out: Path, command: str, args):
        self.path = out.with_name(out.name + ".meta.json")
        self.data = {
            "command": command,
            "version": __version__,
            "config": None if args.config is None else str(args.config),
            "out": str(out),
            "seed": args.seed,
            "threads": args.threads,
            "status": "running",
        }
        self.t0 = time.perf_counter()
        self.write()

    def update(self, **items):
        self.data.update(items)
        self.write()

    def finish(self, code: int, status: str, message: str | None = None):
        self.data["exit_code"] = code
        self.data["status"] = status
        self.data["wall_ms"] = (time.perf_counter() - self.t0) * 1e3
        if message:
            self.data["message"] = message
        self.write()

    def write(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w") as fh:
            json.dump(_jsonable(self.data), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def require_memory(nbytes: int, cap: int, what: str):
    if cap is not None and nbytes > cap:
        raise MemoryGuardError(nbytes, cap, what)


# -- commands ----------------------------------------------------------------

def cmd_ode_sim(cfg: dict, args, meta: Sidecar):
    name, system, u0 = build_ode(cfg)
    N = _level(cfg, 6)
    ic = _integrator(cfg)
    stride = _sample_every(cfg)
    cap = _memory_cap(cfg)
    delta = carleman_delta(system.n, N)
    meta.update(model=name, N=N, delta=delta, method=ic.method, dt=ic.dt, t_final=ic.t_final)
    require_memory(8 * delta * WORKING_COPIES[ic.method], cap, "ODE Carleman run")

    op = CarlemanOperator(system, N, memory_cap=cap)
    traj = integrate(op, lift_initial(u0, N), ic, stride)

    nsteps, h = ic.steps()
    if nsteps:
        k = max(1, math.ceil(h / ODE_REFERENCE_DT - 1e-9))
        _, ref = ode_models.nonlinear_rk4(system, u0, ic.t_final, h / k, sample_every=k * stride)
    else:
        ref = u0[None, :]
    if len(ref) != len(traj):
        raise RuntimeError("reference and Carleman sample times are misaligned")

    n = system.n
    header = ["t"] + [f"u_{a + 1}" for a in range(n)] + [f"ref_{a + 1}" for a in range(n)]
    rows = [[z.t, *z.blocks[0], *r] for z, r in zip(traj, ref)]
    write_csv(args.out, header, rows)
    err = float(np.max(np.abs(traj[-1].blocks[0] - ref[-1])))
    meta.update(final_abs_err=err)
    print(f"ode-sim: {name} N={N} delta={delta} final |u - ref| = {err:.3e}")


def _burgers_solution(params, system, u0_field, N, ic, cap):
    """Carleman block 1 at ``t_final``: closed-form series when nilpotent, else integrate."""
    s = system.copy_size
    nilpotent = (not np.any(system.F0)) and all(op is None for row in system.F1 for op in row)
    if nilpotent:
        require_memory(8 * (s * s + 4 * N * N * s), cap, "Burgers series evaluation")
        return taylor_series_solution(system, u0_field, N, ic.t_final), "series", s * s
    delta = pde_state_size(s, N)
    require_memory(8 * delta * WORKING_COPIES[ic.method], cap, "Burgers Carleman run")
    op = PDECarlemanOperator(system, N, memory_cap=cap)
    z = integrate(op, lift_initial_grid(u0_field, N), ic, stride=10**12)[-1]
    return z.blocks[0], ic.method, delta


def _direct_reference(system: PDEQuadraticSystem, u0, ic: IntegratorConfig):
    """RK4 of the compiled system's own nonlinear right-hand side."""
    u = np.asarray(u0, dtype=float).reshape(-1).copy()
    nsteps, h = ic.steps()
    f = system.vector_field
    for step in range(1, nsteps + 1):
        k1 = f(u)
        k2 = f(u + 0.5 * h * k1)
        k3 = f(u + 0.5 * h * k2)
        k4 = f(u + h * k3)
        u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(u)):
            raise NumericalAbort(step, "direct reference went non-finite")
    return u


def _burgers_reference(cfg, params, system, u0_func, u0_field, ic):
    if _section(cfg, "model").get("dsl") is not None:
        return _direct_reference(system, u0_field, ic), "direct-rk4"
    try:
        ref = burgers_reference(params, u0_func, ic.t_final)
    except BreakingTimeError as exc:
        raise ConfigError(str(exc)) from None
    return ref.field, ref.method


def _interior(grid: GridSpec) -> slice:
    return slice(1, -1) if grid.axes[0].boundary == "box" else slice(None)


def cmd_burgers(cfg: dict, args, meta: Sidecar):
    params, system, preset, u0 = build_burgers(cfg)
    N = _level(cfg, 8 if params.mu == 0 else 3)
    ic = _integrator(cfg)
    cap = _memory_cap(cfg)
    grid = params.grid
    u0_field = sample(grid, u0)
    meta.update(model="burgers", mu=params.mu, preset=preset, N=N, grid=grid.shape,
                delta=pde_state_size(system.copy_size, N), method=ic.method, dt=ic.dt,
                t_final=ic.t_final)
    u_ref, ref_method = _burgers_reference(cfg, params, system, u0, u0_field, ic)
    u_c, path, delta = _burgers_solution(params, system, u0_field, N, ic, cap)
    err = np.abs(u_c - u_ref)
    x = grid.axes[0].nodes
    write_csv(args.out, ["x", "u_carleman", "u_reference", "abs_err"], zip(x, u_c, u_ref, err))
    interior = float(np.max(err[_interior(grid)]))
    meta.update(path=path, reference=ref_method, max_abs_err=float(err.max()),
                max_interior_abs_err=interior, max_abs_u0=float(np.max(np.abs(u0_field))))
    print(f"burgers: mu={params.mu} N={N} via {path}; max interior |u - ref| = {interior:.3e}")


def _nonlinear_part(system: PDEQuadraticSystem) -> PDEQuadraticSystem:
    return PDEQuadraticSystem(system.grid, system.n, None, None, system.F2)


def cmd_vlasov(cfg: dict, args, meta: Sidecar):
    params, system, preset, u0 = build_vlasov(cfg)
    N = _level(cfg, 2)
    ic = _integrator(cfg, t_final=0.0)
    stride = _sample_every(cfg)
    cap = _memory_cap(cfg)
    grid, n = params.grid, params.n
    u0_field = sample(grid, u0, n)
    try:
        check_velocity_tails(grid, u0_field, n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    s = system.copy_size
    meta.update(model="vlasov", preset=preset, c1=params.c1, c2=params.c2, N=N, grid=grid.shape,
                delta=pde_state_size(s, N), method=ic.method, dt=ic.dt, t_final=ic.t_final)

    require_memory(8 * 3 * pde_state_size(s, 2), cap, "Vlasov consistency check")
    z = lift_initial_grid(u0_field, 2)
    carleman = pde_rhs(system, 2, z, memory_cap=cap).blocks[0]
    direct = vlasov_direct_rhs(params, u0_field).reshape(-1)
    consistency = float(np.max(np.abs(carleman - direct)))
    meta.update(consistency_max_abs_diff=consistency)
    print(f"vlasov: level-1 RHS max |Carleman - direct| = {consistency:.3e}")

    nonlin = _nonlinear_part(system)
    header = ["t", "mass_1", "mass_2", "ref_mass_1", "ref_mass_2", "nonlinear_norm"]
    if ic.t_final == 0:
        m0 = species_mass(grid, u0_field, n)
        nl = float(np.max(np.abs(nonlin.vector_field(u0_field))))
        write_csv(args.out, header, [[0.0, *m0, *m0, nl]])
        return

    require_memory(8 * pde_state_size(s, N) * WORKING_COPIES[ic.method], cap, "Vlasov Carleman run")
    op = PDECarlemanOperator(system, N, memory_cap=cap)
    traj = integrate(op, lift_initial_grid(u0_field, N), ic, stride)
    if _section(cfg, "model").get("dsl") is None:
        ref = vlasov_reference(params, u0_field, ic.t_final, dt=ic.steps()[1])
        ref_mass = ref.history["mass"]
    else:
        ref_mass = _direct_mass_history(system, u0_field, ic)
    nsteps = ic.steps()[0]
    picks = [k for k in range(nsteps + 1) if k % stride == 0 or k == nsteps]
    rows = []
    for zk, k in zip(traj, picks):
        u = zk.blocks[0]
        rows.append([zk.t, *species_mass(grid, u, n), *ref_mass[k],
                     float(np.max(np.abs(nonlin.vector_field(u))))])
    write_csv(args.out, header, rows)
    drift = np.max(np.abs(ref_mass[-1] - ref_mass[0]) / np.abs(ref_mass[0]))
    meta.update(reference_relative_mass_drift=float(drift))


def _direct_mass_history(system, u0, ic):
    u = np.asarray(u0, dtype=float).reshape(-1).copy()
    nsteps, h = ic.steps()
    mass = [species_mass(system.grid, u, system.n)]
    f = system.vector_field
    for step in range(1, nsteps + 1):
        k1 = f(u)
        k2 = f(u + 0.5 * h * k1)
        k3 = f(u + 0.5 * h * k2)
        k4 = f(u + h * k3)
        u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(u)):
            raise NumericalAbort(step, "direct reference went non-finite")
        mass.append(species_mass(system.grid, u, system.n))
    return np.array(mass)


def _convergence_plan(cfg: dict):
    """Return ``(levels, delta_of, run_row, describe)`` for the configured model."""
    sec = _section(cfg, "carleman")
    levels = sec.get("N_list", [sec.get("N", 1)])
    if not isinstance(levels, list) or not levels or not all(
        isinstance(N, int) and not isinstance(N, bool) and N >= 1 for N in levels
    ):
        raise ConfigError(f"carleman.N_list must be a non-empty list of integers >= 1, got {levels!r}")
    cap = _memory_cap(cfg)
    name = _section(cfg, "model").get("name", "logistic")

    if name == "burgers":
        params, system, _, u0 = build_burgers(cfg)
        ic = _integrator(cfg)
        u0_field = sample(params.grid, u0)
        u_ref, _ = _burgers_reference(cfg, params, system, u0, u0_field, ic)
        cut = _interior(params.grid)

        def run(N):
            u, _, _ = _burgers_solution(params, system, u0_field, N, ic, cap)
            return u[cut], u_ref[cut]

        def delta_of(N):
            return pde_state_size(system.copy_size, N)

        for N in levels:
            if not _burgers_nilpotent(system):
                ic_copies = WORKING_COPIES[ic.method]
                require_memory(8 * delta_of(N) * ic_copies, cap, f"Burgers Carleman run at N={N}")
        return levels, delta_of, run, {"model": "burgers", "mu": params.mu}

    _, system, u0 = build_ode(cfg)
    ic = _integrator(cfg)
    for N in levels:
        require_memory(8 * carleman_delta(system.n, N) * WORKING_COPIES[ic.method], cap,
                       f"ODE Carleman run at N={N}")
    nsteps, h = ic.steps()
    if nsteps:
        k = max(1, math.ceil(h / ODE_REFERENCE_DT - 1e-9))
        ref = ode_models.nonlinear_rk4(system, u0, ic.t_final, h / k, sample_every=10**12)[1][-1]
    else:
        ref = u0

    def run(N):
        op = CarlemanOperator(system, N, memory_cap=cap)
        return integrate(op, lift_initial(u0, N), ic, stride=10**12)[-1].blocks[0], ref

    return levels, lambda N: carleman_delta(system.n, N), run, {"model": name}


def _burgers_nilpotent(system) -> bool:
    return (not np.any(system.F0)) and all(op is None for row in system.F1 for op in row)


def cmd_convergence(cfg: dict, args, meta: Sidecar):
    levels, delta_of, run, info = _convergence_plan(cfg)
    meta.update(N_list=levels, **info)

    def row(N):
        t0 = time.perf_counter()
        u, ref = run(N)
        d = np.abs(np.asarray(u) - np.asarray(ref))
        return N, float(d.max()), float(np.sqrt(np.mean(d**2))), delta_of(N), (time.perf_counter() - t0) * 1e3

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(row, levels))
    else:
        results = [row(N) for N in levels]
    write_csv(args.out, ["N", "error_max", "error_l2", "delta"], [r[:4] for r in results])
    meta.update(rows=[{"N": r[0], "wall_ms": r[4]} for r in results])
    for N, emax, el2, delta, _ in results:
        print(f"N={N:3d}  error_max={emax:.3e}  error_l2={el2:.3e}  delta={delta}")


def cmd_selftest(cfg: dict, args, meta: Sidecar) -> int:
    from .selftest import run_checks

    results = run_checks(seed=args.seed)
    width = max(len(name) for name, _, _ in results)
    print(f"{'check':<{width}}  result  value")
    for name, ok, value in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL':<6}  {value:.3e}")
    _write_selftest_csv(args.out, results)
    failed = [name for name, ok, _ in results if not ok]
    meta.update(failed=failed)
    return EXIT_FAIL if failed else EXIT_OK


def _write_selftest_csv(path: Path, results):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["check", "passed", "value"])
        for name, ok, value in results:
            w.writerow([name, int(ok), fmt(value)])


COMMANDS = {
    "ode-sim": cmd_ode_sim,
    "burgers": cmd_burgers,
    "vlasov": cmd_vlasov,
    "convergence": cmd_convergence,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carleman", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None, help="TOML run file")
        p.add_argument("--out", type=Path, default=None, help="CSV output path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.out is None:
        args.out = Path(f"{args.command}.csv")
    if args.seed < 0:
        print("error: --seed must be a non-negative integer", file=sys.stderr)
        return EXIT_CONFIG
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    meta = Sidecar(args.out, args.command, args)
    try:
        cfg = load_config(args.config)
        with np.errstate(over="ignore", invalid="ignore"):
            code = COMMANDS[args.command](cfg, args, meta)
    except (ConfigError, ValueError, TypeError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"config error: {msg}", file=sys.stderr)
        meta.finish(EXIT_CONFIG, "config-error", str(msg))
        return EXIT_CONFIG
    except MemoryGuardError as exc:
        print(f"memory guard: {exc} (required {exc.required_bytes} bytes)", file=sys.stderr)
        meta.update(required_bytes=exc.required_bytes, cap_bytes=exc.cap_bytes)
        meta.finish(EXIT_MEMORY, "memory-guard", str(exc))
        return EXIT_MEMORY
    except OverflowError as exc:
        print(f"memory guard: {exc}", file=sys.stderr)
        meta.finish(EXIT_MEMORY, "memory-guard", str(exc))
        return EXIT_MEMORY
    except NumericalAbort as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        meta.update(abort_step=exc.step)
        meta.finish(EXIT_NUMERIC, "numerical-abort", str(exc))
        return EXIT_NUMERIC
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        meta.finish(EXIT_FAIL, "error", f"{type(exc).__name__}: {exc}")
        return EXIT_FAIL
    code = EXIT_OK if code is None else code
    meta.finish(code, "ok" if code == EXIT_OK else "failed")
    return code


if __name__ == "__main__":
    sys.exit(main())
