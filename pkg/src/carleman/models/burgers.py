"""Viscous and inviscid Burgers' equation ``u_t = mu u_xx - u u_x``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..lifted import NumericalAbort
from ..pde.carleman import PDEQuadraticSystem
from ..pde.grid import GridSpec
from ..pde.operators import Compose, Contract, Derivative, Scale


class BreakingTimeError(ValueError):
    """Requested time is past the first gradient catastrophe of ``u0``."""


@dataclass(frozen=True)
class BurgersParams:
    mu: float
    grid: GridSpec
    # "x": -|_{w=x} d/dx,  "w": -|_{w=x} d/dw; both give -u u_x on u(x)u(w)
    f2_variant: str = "x"

    def __post_init__(self):
        if not self.mu >= 0:
            raise ValueError(f"viscosity must be non-negative, got {self.mu}")
        if self.grid.m != 1:
            raise ValueError(f"Burgers needs a 1-D grid, got m={self.grid.m}")
        if self.f2_variant not in ("x", "w"):
            raise ValueError(f"f2_variant must be 'x' or 'w', got {self.f2_variant!r}")


@dataclass
class ReferenceSolution:
    """Oracle output: samples at time ``t`` plus an optional per-step history."""

    field: np.ndarray
    t: float
    method: str
    history: dict | None = None


def burgers_f2(variant: str = "x") -> Compose:
    return Compose(Scale(-1.0), Contract(0, 0), Derivative(0, 1, variant))


def burgers_system(p: BurgersParams) -> PDEQuadraticSystem:
    """``F0 = 0``, ``F1 = mu d2/dx2``, ``F2 = -|_{w=x} d/dx`` (or ``d/dw``)."""
    F1 = Compose(Scale(p.mu), Derivative(0, 2)) if p.mu > 0 else None
    return PDEQuadraticSystem(p.grid, 1, None, [[F1]], [[burgers_f2(p.f2_variant)]])


def burgers_direct_rhs(p: BurgersParams, u) -> np.ndarray:
    """Direct semi-discrete right-hand side ``mu D2 u - u * (D1 u)``."""
    axis = p.grid.axes[0]
    u = np.asarray(u, dtype=float).reshape(-1)
    return p.mu * (axis.derivative_matrix(2) @ u) - u * (axis.derivative_matrix(1) @ u)


def breaking_time(u0, lower: float, upper: float, samples: int = 4097) -> float:
    """``-1/min(u0')`` estimated on a fine sampling of ``[lower, upper]``."""
    x = np.linspace(lower, upper, samples)
    slope = np.gradient(np.asarray(u0(x), dtype=float) * np.ones_like(x), x)
    smin = float(slope.min())
    return math.inf if smin >= 0 else -1.0 / smin


def characteristics(u0, x, t: float, tol: float = 1e-12, max_iter: int = 10_000) -> np.ndarray:
    """Inviscid solution ``u(x, t) = u0(x0)`` with ``x = x0 + u0(x0) t``.

    ``x0`` is found per point by the fixed-point iteration
    ``x0 <- x - u0(x0) t`` until the residual is below ``tol``.
    """
    x = np.asarray(x, dtype=float)
    x0 = x.copy()
    for _ in range(max_iter):
        v = np.asarray(u0(x0), dtype=float) * np.ones_like(x0)
        if np.max(np.abs(x0 + v * t - x), initial=0.0) <= tol:
            return v
        x0 = x - v * t
    raise RuntimeError(f"characteristic fixed-point iteration did not converge in {max_iter} steps")


def _spectral_rhs(mu: float, length: float):
    def rhs(u):
        g = u.size
        k = 2 * np.pi * np.fft.rfftfreq(g, d=length / g)
        uh = np.fft.rfft(u)
        ik = 1j * k
        if g % 2 == 0:
            ik[-1] = 0.0
        ux = np.fft.irfft(ik * uh, n=g)
        uxx = np.fft.irfft(-(k**2) * uh, n=g)
        return mu * uxx - u * ux

    return rhs


def burgers_reference(p: BurgersParams, u0, t_final: float, dt: float | None = None
                      ) -> ReferenceSolution:
    """Independent nonlinear solution at ``t_final``.

    ``mu = 0`` uses the method of characteristics and needs ``u0`` as a
    callable; ``mu > 0`` integrates the pseudo-spectral semi-discretisation
    with RK4 at a step no larger than ``h**2/(4 mu)`` on a periodic grid.
    """
    axis = p.grid.axes[0]
    x = axis.nodes
    if p.mu == 0:
        if not callable(u0):
            raise TypeError("the characteristics oracle needs u0 as a callable")
        tb = breaking_time(u0, axis.lower, axis.upper)
        if t_final >= tb:
            raise BreakingTimeError(f"t_final={t_final} is past the breaking time {tb:.6g}")
        return ReferenceSolution(characteristics(u0, x, t_final), t_final, "characteristics")

    if axis.boundary != "periodic":
        raise ValueError("the pseudo-spectral reference needs a periodic grid")
    u = np.asarray(u0(x) if callable(u0) else u0, dtype=float) * np.ones_like(x)
    guard = axis.h**2 / (4 * p.mu)
    dt = guard if dt is None else min(dt, guard)
    nsteps = max(1, math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    h = t_final / nsteps if nsteps else 0.0
    f = _spectral_rhs(p.mu, axis.length)
    maxnorm = [float(np.max(np.abs(u)))]
    for step in range(1, nsteps + 1):
        k1 = f(u)
        k2 = f(u + 0.5 * h * k1)
        k3 = f(u + 0.5 * h * k2)
        k4 = f(u + h * k3)
        u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(u)):
            raise NumericalAbort(step, "pseudo-spectral reference went non-finite")
        maxnorm.append(float(np.max(np.abs(u))))
    return ReferenceSolution(u, t_final, "pseudo-spectral", {"max_norm": np.array(maxnorm), "dt": h})
