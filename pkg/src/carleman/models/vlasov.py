"""Multi-species 1D-1V Vlasov system with the field from Gauss's law.

Species ``s`` obeys

    du_s/dt = -v du_s/dx + c_s du_s/dv * int_{lower}^{x} dw1 int dw2 sum_c q_c u_c(w)

with charges ``q = (-1, +1)`` for the two-species model, i.e. a field
integrand ``u_2 - u_1``. Axis 0 is position, axis 1 velocity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..lifted import NumericalAbort
from ..pde.carleman import PDEQuadraticSystem
from ..pde.grid import GridSpec
from ..pde.operators import Compose, Coordinate, CumulativeIntegral, Derivative, FullIntegral, Scale
from .burgers import ReferenceSolution

TAIL_TOL = 1e-12
MAX_REFERENCE_POINTS = 32


@dataclass(frozen=True)
class VlasovParams:
    c1: float
    c2: float
    grid: GridSpec
    charges: tuple = (-1.0, 1.0)

    def __post_init__(self):
        if self.grid.m != 2:
            raise ValueError(f"Vlasov needs a 2-D (position, velocity) grid, got m={self.grid.m}")
        if self.grid.axes[1].boundary != "box":
            raise ValueError("the velocity axis must be a truncated box")
        if len(self.charges) != self.n:
            raise ValueError(f"need one charge per species ({self.n}), got {len(self.charges)}")

    @property
    def couplings(self) -> tuple:
        return (self.c1, self.c2)

    @property
    def n(self) -> int:
        return 2


def field_operator() -> Compose:
    """``d/dx2 o cumint_{w1} o int_{w2}``: eliminates ``w``, keeps ``x`` free."""
    return Compose(Derivative(1, 1, "x"), CumulativeIntegral(0, "w"), FullIntegral(1, "w"))


def vlasov_system(p: VlasovParams) -> PDEQuadraticSystem:
    """``F1 = -I x2 d/dx1``; row ``s`` of ``F2`` holds ``c_s q_c`` times the field operator
    in column ``s*n + c``, so ``[F2]_{1,1} = -c1 d/dx2 cumint int`` and ``[F2]_{1,2} = -[F2]_{1,1}``.
    """
    n = p.n
    streaming = Compose(Scale(-1.0), Coordinate(1), Derivative(0, 1))
    F1 = [[streaming if a == b else None for b in range(n)] for a in range(n)]
    F2 = [[None] * (n * n) for _ in range(n)]
    for s, cs in enumerate(p.couplings):
        if cs == 0:
            continue
        for c, qc in enumerate(p.charges):
            F2[s][s * n + c] = Compose(Scale(cs * qc), field_operator())
    return PDEQuadraticSystem(p.grid, n, None, F1, F2)


def electric_field(p: VlasovParams, u) -> np.ndarray:
    """``E(x1) = int^{x1} dw1 int dw2 sum_c q_c u_c(w)`` on the position nodes."""
    u = np.asarray(u, dtype=float).reshape(p.grid.shape + (p.n,))
    pos, vel = p.grid.axes
    charge = u @ np.asarray(p.charges, dtype=float)
    rho = charge @ vel.quadrature_weights()
    return pos.cumulative_matrix() @ rho


def vlasov_nonlinear_term(p: VlasovParams, u) -> np.ndarray:
    """``c_s du_s/dx2 E(x1)`` for every species, shape ``grid.shape + (n,)``."""
    u = np.asarray(u, dtype=float).reshape(p.grid.shape + (p.n,))
    E = electric_field(p, u)
    Dv = p.grid.axes[1].derivative_matrix(1)
    dv = np.einsum("ab,xbs->xas", Dv, u)
    return np.asarray(p.couplings)[None, None, :] * dv * E[:, None, None]


def vlasov_direct_rhs(p: VlasovParams, u) -> np.ndarray:
    """Direct nonlinear semi-discrete right-hand side, same layout as ``u``."""
    u = np.asarray(u, dtype=float).reshape(p.grid.shape + (p.n,))
    pos, vel = p.grid.axes
    Dx = pos.derivative_matrix(1)
    stream = -vel.nodes[None, :, None] * np.einsum("ab,bvs->avs", Dx, u)
    return stream + vlasov_nonlinear_term(p, u)


def species_mass(grid: GridSpec, u, n: int = 2) -> np.ndarray:
    u = np.asarray(u, dtype=float).reshape(grid.shape + (n,))
    w = grid.quadrature_weights()
    return np.array([float(np.sum(w * u[..., s])) for s in range(n)])


def check_velocity_tails(grid: GridSpec, u, n: int = 2, tol: float = TAIL_TOL) -> None:
    """Refuse data that is not negligible on the velocity box edges."""
    u = np.asarray(u, dtype=float).reshape(grid.shape + (n,))
    edge = max(float(np.max(np.abs(u[:, 0]))), float(np.max(np.abs(u[:, -1]))))
    if edge >= tol:
        raise ValueError(
            f"initial data reaches {edge:.3g} on the velocity boundary (needs < {tol:g}); "
            "widen the velocity box"
        )


def vlasov_reference(p: VlasovParams, u0, t_final: float, dt: float = 1e-3) -> ReferenceSolution:
    """RK4 on the direct nonlinear discretisation; records species mass each step."""
    if max(p.grid.shape) > MAX_REFERENCE_POINTS:
        raise ValueError(f"reference solver is limited to {MAX_REFERENCE_POINTS} points per axis")
    u = np.asarray(u0, dtype=float).reshape(p.grid.shape + (p.n,)).copy()
    check_velocity_tails(p.grid, u, p.n)
    nsteps = max(1, math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    h = t_final / nsteps if nsteps else 0.0
    times = [0.0]
    mass = [species_mass(p.grid, u, p.n)]
    for step in range(1, nsteps + 1):
        k1 = vlasov_direct_rhs(p, u)
        k2 = vlasov_direct_rhs(p, u + 0.5 * h * k1)
        k3 = vlasov_direct_rhs(p, u + 0.5 * h * k2)
        k4 = vlasov_direct_rhs(p, u + h * k3)
        u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(u)):
            raise NumericalAbort(step, "Vlasov reference went non-finite")
        times.append(step * h)
        mass.append(species_mass(p.grid, u, p.n))
    return ReferenceSolution(
        u, t_final, "direct-rk4", {"t": np.array(times), "mass": np.array(mass), "dt": h}
    )
