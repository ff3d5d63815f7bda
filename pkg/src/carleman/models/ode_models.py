"""Small quadratic ODE systems and a direct nonlinear RK4 oracle."""

from __future__ import annotations

import math

import numpy as np

from ..ode import QuadraticODESystem

SMALL_N = 4


def logistic(rate: float = 1.0, capacity: float = 1.0) -> QuadraticODESystem:
    """``u' = rate*u - (rate/capacity)*u**2``."""
    return QuadraticODESystem([0.0], [[rate]], [[-rate / capacity]])


def linear(lam: float = -1.0) -> QuadraticODESystem:
    return QuadraticODESystem([0.0], [[lam]], [[0.0]])


def zero(n: int = 1) -> QuadraticODESystem:
    return QuadraticODESystem(np.zeros(n), np.zeros((n, n)), np.zeros((n, n * n)))


def logistic_exact(u0: float, t, rate: float = 1.0, capacity: float = 1.0):
    e = np.exp(rate * np.asarray(t, dtype=float))
    return capacity * u0 * e / (capacity - u0 + u0 * e)


def nonlinear_rk4(system: QuadraticODESystem, u0, t_final: float, dt: float,
                  sample_every: int = 1):
    """RK4 on ``du/dt = F0 + F1 u + F2 (u x u)``; returns ``(times, states)``."""
    u = np.asarray(u0, dtype=float).reshape(-1).copy()
    nsteps = max(1, math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    h = t_final / nsteps if nsteps else 0.0
    if system.n <= SMALL_N:
        return _small_rk4(system, [float(v) for v in u], nsteps, h, sample_every)
    f = system.vector_field
    times, states = [0.0], [u.copy()]
    for step in range(1, nsteps + 1):
        k1 = f(u)
        k2 = f(u + 0.5 * h * k1)
        k3 = f(u + 0.5 * h * k2)
        k4 = f(u + h * k3)
        u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if step % sample_every == 0 or step == nsteps:
            times.append(step * h)
            states.append(u.copy())
    return np.array(times), np.array(states)


def _small_rk4(system, u, nsteps, h, sample_every):
    # plain float lists: the dt = 1e-5 oracle runs 1e5 steps, where numpy
    # call overhead dominates for a handful of unknowns
    n = system.n
    F0 = system.F0.tolist()
    F1 = system.F1.tolist()
    F2 = [[row[b * n:(b + 1) * n] for b in range(n)] for row in system.F2.tolist()]
    rng = range(n)

    def f(v):
        return [
            F0[a]
            + sum(F1[a][b] * v[b] for b in rng)
            + sum(v[b] * sum(F2[a][b][c] * v[c] for c in rng) for b in rng)
            for a in rng
        ]

    def axpy(alpha, x, y):
        return [yi + alpha * xi for xi, yi in zip(x, y)]

    times, states = [0.0], [list(u)]
    for step in range(1, nsteps + 1):
        k1 = f(u)
        k2 = f(axpy(0.5 * h, k1, u))
        k3 = f(axpy(0.5 * h, k2, u))
        k4 = f(axpy(h, k3, u))
        u = [ui + (h / 6) * (a + 2 * b + 2 * c + d) for ui, a, b, c, d in zip(u, k1, k2, k3, k4)]
        if step % sample_every == 0 or step == nsteps:
            times.append(step * h)
            states.append(u)
    return np.array(times), np.array(states)


PRESETS = {"logistic": logistic, "linear": linear, "zero": zero}
