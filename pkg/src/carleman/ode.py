"""Carleman lift of quadratic ODE systems ``du/dt = F0 + F1 u + F2 (u x u)``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kron import as_matrix, as_vector, kron_power, slot_kernel
from .lifted import (
    _INT64_MAX,
    DEFAULT_MEMORY_CAP,
    BlockTridiagonalOperator,
    LiftedState,
    MemoryGuardError,
)


@dataclass(frozen=True)
class QuadraticODESystem:
    """Time-independent coefficients ``F0`` (n), ``F1`` (n x n), ``F2`` (n x n**2)."""

    F0: np.ndarray
    F1: np.ndarray
    F2: np.ndarray

    def __post_init__(self):
        F0 = as_vector(self.F0)
        n = F0.size
        if n < 1:
            raise ValueError("system dimension must be positive")
        F1 = as_matrix(self.F1)
        F2 = as_matrix(self.F2)
        if F1.shape != (n, n):
            raise ValueError(f"F1 must be {n}x{n}, got {F1.shape}")
        if F2.shape != (n, n * n):
            raise ValueError(f"F2 must be {n}x{n * n}, got {F2.shape}")
        object.__setattr__(self, "F0", F0)
        object.__setattr__(self, "F1", F1)
        object.__setattr__(self, "F2", F2)

    @property
    def n(self) -> int:
        return self.F0.size

    def coefficient(self, j: int) -> np.ndarray:
        if j == 0:
            return self.F0.reshape(-1, 1)
        if j == 1:
            return self.F1
        if j == 2:
            return self.F2
        raise ValueError(f"j must be 0, 1 or 2, got {j}")

    def vector_field(self, u) -> np.ndarray:
        """The nonlinear right-hand side evaluated at ``u``."""
        u = np.asarray(u, dtype=float).reshape(-1)
        return self.F0 + self.F1 @ u + self.F2 @ np.kron(u, u)


def carleman_delta(n: int, N: int) -> int:
    """Lifted dimension ``n + n**2 + ... + n**N``."""
    if n < 1 or N < 1:
        raise ValueError(f"need n >= 1 and N >= 1, got n={n}, N={N}")
    if n == 1:
        return N
    total = (n ** (N + 1) - n) // (n - 1)
    if total > _INT64_MAX:
        raise OverflowError(f"Carleman dimension for n={n}, N={N} exceeds the 64-bit range")
    return total


@dataclass(frozen=True)
class CarlemanOperator(BlockTridiagonalOperator):
    """Truncated Carleman system of a :class:`QuadraticODESystem` at level ``N``."""

    system: QuadraticODESystem
    N: int
    memory_cap: int | None = field(default=DEFAULT_MEMORY_CAP, repr=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"truncation level must be >= 1, got {self.N}")
        d = carleman_delta(self.system.n, self.N)
        if self.memory_cap is not None and 8 * d > self.memory_cap:
            raise MemoryGuardError(8 * d, self.memory_cap, "Carleman state")

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def delta(self) -> int:
        return carleman_delta(self.n, self.N)

    def block_size(self, i: int) -> int:
        return self.n**i

    @property
    def has_source(self) -> bool:
        return bool(np.any(self.system.F0 != 0))

    @property
    def has_linear(self) -> bool:
        return bool(np.any(self.system.F1 != 0))

    def transfer_apply(self, i: int, j: int, y) -> np.ndarray:
        """``A^i_{i+j-1} y``: sum over slots of ``F_j`` inserted at each slot."""
        if i < 1:
            raise ValueError(f"level must be >= 1, got {i}")
        F = self.system.coefficient(j)
        y = np.asarray(y, dtype=float).reshape(-1)
        expected = self.n ** (i + j - 1)
        if y.size != expected:
            raise ValueError(
                f"transfer A^{i}_{i + j - 1}: expected input of length {expected}, got {y.size}"
            )
        out = slot_kernel(F, i, 1, y)
        for nu in range(2, i + 1):
            out = out + slot_kernel(F, i, nu, y)
        return out

    def lift(self, u0) -> LiftedState:
        return lift_initial(u0, self.N)


def transfer_apply(op: CarlemanOperator, i: int, j: int, y) -> np.ndarray:
    return op.transfer_apply(i, j, y)


def lift_initial(u0, N: int, t: float = 0.0) -> LiftedState:
    """``z(0) = [u0, u0 x u0, ..., u0**N]``."""
    if N < 1:
        raise ValueError(f"truncation level must be >= 1, got {N}")
    u0 = as_vector(u0)
    return LiftedState([kron_power(u0, i) for i in range(1, N + 1)], t)
