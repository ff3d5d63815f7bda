"""Time integration of truncated Carleman systems ``dz/dt = A z + b``."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from .kron import kron_vec
from .lifted import LiftedState, NumericalAbort
from .pde.carleman import slot_contract_F2

METHODS = ("rk4", "taylor-exp")


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"
    dt: float = 1e-3
    taylor_order: int = 16
    t_final: float = 1.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.taylor_order < 1:
            raise ValueError(f"taylor_order must be >= 1, got {self.taylor_order}")
        if not self.t_final >= 0:
            raise ValueError(f"t_final must be non-negative, got {self.t_final}")
        if self.t_final > 0 and self.dt > self.t_final:
            raise ValueError(f"dt={self.dt} exceeds t_final={self.t_final}")

    def steps(self) -> tuple[int, float]:
        """Number of steps and the step actually used, landing exactly on ``t_final``."""
        if self.t_final == 0:
            return 0, 0.0
        n = max(1, math.ceil(self.t_final / self.dt - 1e-9))
        return n, self.t_final / n


def rk4_integrate(f, z0: LiftedState, config: IntegratorConfig, stride: int = 1):
    """Classical RK4 for ``dz/dt = f(z)``; returns states every ``stride`` steps.

    The first entry is ``z0`` and the last is always the final state.
    """
    nsteps, h = config.steps()
    z = z0.copy()
    traj = [z.copy()]
    for step in range(1, nsteps + 1):
        k1 = f(z)
        k2 = f(z + (0.5 * h) * k1)
        k3 = f(z + (0.5 * h) * k2)
        k4 = f(z + h * k3)
        z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        z.t = z0.t + step * h
        if not z.is_finite():
            raise NumericalAbort(step, "RK4 produced a non-finite state")
        if step % stride == 0 or step == nsteps:
            traj.append(z.copy())
    return traj


def estimate_norm(apply_A, template: LiftedState, iters: int = 5, seed: int = 0) -> float:
    """Power-iteration estimate of the operator 2-norm growth factor."""
    rng = np.random.default_rng(seed)
    v = LiftedState([rng.standard_normal(s) for s in template.sizes])
    v = (1.0 / math.sqrt(v.dot(v))) * v
    est = 0.0
    for _ in range(iters):
        w = apply_A(v)
        nw = math.sqrt(w.dot(w))
        if nw == 0:
            return 0.0
        est = nw
        v = (1.0 / nw) * w
    return est


def expm_action(apply_A, b, z0: LiftedState, t: float, order: int = 16, substeps=None) -> LiftedState:
    """``exp(A t) z0 + (int_0^t exp(A s) ds) b`` by truncated Taylor series.

    Each of ``substeps`` pieces of length ``tau`` adds
    ``sum_k tau**k/k! A**k z`` and ``sum_k tau**(k+1)/(k+1)! A**k b`` for
    ``k = 0..order``. Without ``substeps`` the count is chosen so that
    ``tau`` times a 5-step power-iteration norm estimate is at most 1.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if substeps is None:
        substeps = max(1, math.ceil(abs(t) * estimate_norm(apply_A, z0)))
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")
    tau = t / substeps
    z = z0.copy()
    for step in range(1, substeps + 1):
        term = z
        acc = z
        for k in range(1, order + 1):
            term = (tau / k) * apply_A(term)
            acc = acc + term
        if b is not None:
            term = tau * b
            acc = acc + term
            for k in range(1, order + 1):
                term = (tau / (k + 1)) * apply_A(term)
                acc = acc + term
        z = acc
        if not z.is_finite():
            raise NumericalAbort(step, "Taylor exponential produced a non-finite state")
    z.t = z0.t + t
    return z


def integrate(op, z0: LiftedState, config: IntegratorConfig, stride: int = 1):
    """Trajectory of ``op`` (a block-tridiagonal operator) from ``z0``."""
    if config.method == "rk4":
        return rk4_integrate(op.rhs, z0, config, stride)
    nsteps, h = config.steps()
    b = op.inhomogeneity() if op.has_source else None
    sub = max(1, math.ceil(h * estimate_norm(op.apply_linear, z0))) if nsteps else 1
    z = z0.copy()
    traj = [z.copy()]
    for step in range(1, nsteps + 1):
        try:
            z = expm_action(op.apply_linear, b, z, h, config.taylor_order, sub)
        except NumericalAbort as exc:
            raise NumericalAbort(step, "Taylor exponential produced a non-finite state") from exc
        z.t = z0.t + step * h
        if step % stride == 0 or step == nsteps:
            traj.append(z.copy())
    return traj


def _require_nilpotent(op):
    if op.has_source or op.has_linear:
        raise ValueError("closed-form exponential needs F0 = 0 and F1 = 0")


def nilpotent_expm_apply(op, t: float, z0: LiftedState) -> LiftedState:
    """``exp(A_N t) z0`` for a strictly upper block-triangular ``A_N``.

    Block ``i`` is ``sum_{j>=i} t**(j-i)/(j-i)! A^i_{i+1} ... A^{j-1}_j z0_j``.
    """
    _require_nilpotent(op)
    op.conform(z0)
    out = [b.copy() for b in z0.blocks]
    for j in range(2, op.N + 1):
        v = z0.blocks[j - 1]
        for k in range(j - 1, 0, -1):
            v = op.transfer_apply(k, 2, v)
            out[k - 1] += (t ** (j - k) / math.factorial(j - k)) * v
    return LiftedState(out, z0.t + t)


class AllocationTracker:
    """Records the tensor levels allocated by :func:`taylor_series_solution`."""

    def __init__(self):
        self.max_level = 0
        self.allocations = 0

    def record(self, level: int, size: int):
        self.allocations += 1
        self.max_level = max(self.max_level, level)


def taylor_series_solution(sys, u0, N: int, t: float, tracker=None) -> np.ndarray:
    """Block 1 of the closed-form exponential applied to the exact lift of ``u0``.

    Evaluates ``u0 + sum_{j=2..N} t**(j-1)/(j-1)! A^1_2 ... A^{j-1}_j u0**j``
    from right to left without ever forming a tensor above level 2. The
    lifted tensors met along the way are symmetric under copy permutations,
    so each is kept as a weighted sum of symmetrised products of level-1
    factors. Applying ``A^{k-1}_k`` to the symmetrised product of
    ``f_1..f_k`` gives ``(1/k) sum_{p != q}`` of the symmetrised product in
    which ``f_p, f_q`` are replaced by the contraction ``F2[f_p x f_q]``.
    """
    if any(op is not None for row in sys.F1 for op in row) or np.any(sys.F0 != 0):
        raise ValueError("closed-form exponential needs F0 = 0 and F1 = 0")
    if N < 1:
        raise ValueError(f"truncation level must be >= 1, got {N}")
    track = tracker.record if tracker is not None else (lambda level, size: None)

    u0 = np.asarray(u0, dtype=float).reshape(-1)
    factors = [u0]
    zero = {0: not np.any(u0)}
    pairs = {}

    def contract(p, q):
        if (p, q) not in pairs:
            pair = kron_vec(factors[p], factors[q])
            track(2, pair.size)
            r = slot_contract_F2(sys, 1, 1, pair)
            track(1, r.size)
            pairs[p, q] = len(factors)
            zero[len(factors)] = not np.any(r)
            factors.append(r)
        return pairs[p, q]

    result = u0.copy()
    track(1, result.size)
    for j in range(2, N + 1):
        state = {(0,) * j: 1.0}
        for k in range(j, 1, -1):
            new = defaultdict(float)
            for key, coef in state.items():
                if any(zero[f] for f in key):
                    continue
                counts = Counter(key)
                for p, cp in counts.items():
                    for q, cq in counts.items():
                        mult = cp * (cp - 1) if p == q else cp * cq
                        if mult == 0:
                            continue
                        rest = list(key)
                        rest.remove(p)
                        rest.remove(q)
                        r = contract(p, q)
                        new[tuple(sorted(rest + [r]))] += coef * mult / k
            state = new
        cj = np.zeros_like(u0)
        for (f,), coef in sorted(state.items()):
            cj += coef * factors[f]
        result += (t ** (j - 1) / math.factorial(j - 1)) * cj
    return result
