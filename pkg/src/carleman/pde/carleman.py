"""Carleman lift of quadratic PDE systems on tensor-product grids.

A level-``i`` tensor samples ``u(x_1) x ... x u(x_i)``: it is stored flat
with copy 1 most significant and, inside each copy, grid points in
row-major order followed by the component index. The variable-change
operators of the lift are realised by slot bookkeeping: the ``F2`` contraction
at slot ``nu`` reads copy ``nu`` as its free variable and copy ``nu + 1`` as
the contracted one, and the remaining copies shift down one place.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..kron import kron_power
from ..lifted import DEFAULT_MEMORY_CAP, BlockTridiagonalOperator, LiftedState
from .grid import GridSpec
from .operators import DiscreteOp, eliminates_w


def _normalize_entries(entries, rows: int, cols: int, name: str):
    if entries is None:
        return tuple((None,) * cols for _ in range(rows))
    entries = [list(r) for r in entries]
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise ValueError(f"{name} must be a {rows}x{cols} table of operators")
    out = []
    for r in entries:
        row = []
        for op in r:
            if op is not None and not isinstance(op, DiscreteOp):
                raise TypeError(f"{name} entries must be DiscreteOp or None, got {type(op)}")
            row.append(None if op is None or op.is_zero else op)
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class PDEQuadraticSystem:
    """``du/dt = F0(x) + F1(x) u(x) + F2(x; w)[u(x) x u(w)]`` on ``grid``.

    ``F1`` is an ``n x n`` table of one-copy operators and ``F2`` an
    ``n x n**2`` table of two-copy operators, column ``b*n + c`` acting on
    ``u_b(x) u_c(w)``. ``None`` marks a zero entry.
    """

    grid: GridSpec
    n: int
    F0: np.ndarray | None = None
    F1: tuple | None = None
    F2: tuple | None = None

    def __post_init__(self):
        n, grid = self.n, self.grid
        if n < 1:
            raise ValueError(f"component count must be positive, got {n}")
        if self.F0 is None:
            F0 = np.zeros(grid.size * n)
        else:
            F0 = np.asarray(self.F0, dtype=float).reshape(-1)
            if F0.size != grid.size * n:
                raise ValueError(f"F0 must hold {grid.size * n} samples, got {F0.size}")
            if not np.all(np.isfinite(F0)):
                raise ValueError("F0 has non-finite entries")
        F1 = _normalize_entries(self.F1, n, n, "F1")
        F2 = _normalize_entries(self.F2, n, n * n, "F2")
        for a, row in enumerate(F2):
            for bc, op in enumerate(row):
                if op is not None and not eliminates_w(op, grid):
                    raise ValueError(
                        f"F2 entry ({a + 1}, {bc + 1}) does not eliminate every w coordinate"
                    )
        object.__setattr__(self, "F0", F0)
        object.__setattr__(self, "F1", F1)
        object.__setattr__(self, "F2", F2)

    @property
    def copy_size(self) -> int:
        """Length of one coordinate copy, ``n * g**m``."""
        return self.n * self.grid.size

    def level_size(self, i: int) -> int:
        return self.copy_size**i

    def as_field(self, u) -> np.ndarray:
        """Reshape a level-1 vector to ``grid.shape + (n,)``."""
        return np.asarray(u, dtype=float).reshape(self.grid.shape + (self.n,))

    def vector_field(self, u) -> np.ndarray:
        """Evaluate the nonlinear right-hand side directly on a level-1 field.

        The quadratic term is formed from the explicit two-copy product
        ``u_b(x) u_c(w)``, independent of the slot machinery.
        """
        grid, n, m = self.grid, self.n, self.grid.m
        U = self.as_field(u)
        out = self.F0.reshape(grid.shape + (n,)).copy()
        for a in range(n):
            for b in range(n):
                op = self.F1[a][b]
                if op is not None:
                    out[..., a] += op.apply(U[..., b], grid)
            for bc, op in enumerate(self.F2[a]):
                if op is None:
                    continue
                b, c = divmod(bc, n)
                pair = np.multiply.outer(U[..., b], U[..., c])
                res = op.apply(pair, grid)
                out[..., a] += res.reshape(res.shape[:m])
        return out.reshape(-1)


def _slot_index(m: int, comp: int):
    return (slice(None),) * (1 + m) + (comp,)


def slot_insert_F0(sys: PDEQuadraticSystem, i: int, nu: int, y) -> np.ndarray:
    """``F0(x_nu)`` inserted at slot ``nu`` of a level-``(i-1)`` tensor."""
    _check_slot(i, nu)
    s = sys.copy_size
    y = _check_level(sys, y, i - 1)
    Y = y.reshape(s ** (nu - 1), s ** (i - nu))
    return (sys.F0[None, :, None] * Y[:, None, :]).reshape(-1)


def slot_apply_F1(sys: PDEQuadraticSystem, i: int, nu: int, y) -> np.ndarray:
    """``F1`` acting on copy ``nu`` of a level-``i`` tensor."""
    _check_slot(i, nu)
    grid, n, m, s = sys.grid, sys.n, sys.grid.m, sys.copy_size
    y = _check_level(sys, y, i)
    Y = y.reshape((s ** (nu - 1),) + grid.shape + (n, s ** (i - nu)))
    out = np.zeros_like(Y)
    for a in range(n):
        for b in range(n):
            op = sys.F1[a][b]
            if op is None:
                continue
            piece = np.moveaxis(Y[_slot_index(m, b)], 0, m)
            out[_slot_index(m, a)] += np.moveaxis(op.apply(piece, grid), m, 0)
    return out.reshape(-1)


def slot_contract_F2(sys: PDEQuadraticSystem, i: int, nu: int, y) -> np.ndarray:
    """``F2`` with copy ``nu`` as ``x`` and copy ``nu+1`` as ``w`` of a level-``(i+1)`` tensor.

    The output is level ``i``; copies after ``nu + 1`` move down one slot.
    """
    _check_slot(i, nu)
    grid, n, m, s = sys.grid, sys.n, sys.grid.m, sys.copy_size
    y = _check_level(sys, y, i + 1)
    Y = y.reshape((s ** (nu - 1),) + grid.shape + (n,) + grid.shape + (n, s ** (i - nu)))
    out = np.zeros((s ** (nu - 1),) + grid.shape + (n, s ** (i - nu)))
    take_x = (slice(None),) * m + (0,) * m
    for a in range(n):
        for bc, op in enumerate(sys.F2[a]):
            if op is None:
                continue
            b, c = divmod(bc, n)
            index = (slice(None),) * (1 + m) + (b,) + (slice(None),) * m + (c,)
            piece = np.moveaxis(Y[index], 0, 2 * m)
            res = op.apply(piece, grid)[take_x]
            out[_slot_index(m, a)] += np.moveaxis(res, m, 0)
    return out.reshape(-1)


_SLOT_OPS = {0: slot_insert_F0, 1: slot_apply_F1, 2: slot_contract_F2}


def pde_transfer_apply(sys: PDEQuadraticSystem, i: int, j: int, y) -> np.ndarray:
    """``A^i_{i+j-1} y``: the slot operation for ``F_j`` summed over ``nu = 1..i``."""
    if j not in _SLOT_OPS:
        raise ValueError(f"j must be 0, 1 or 2, got {j}")
    if i < 1:
        raise ValueError(f"level must be >= 1, got {i}")
    slot_op = _SLOT_OPS[j]
    out = slot_op(sys, i, 1, y)
    for nu in range(2, i + 1):
        out = out + slot_op(sys, i, nu, y)
    return out


@dataclass(frozen=True, eq=False)
class PDECarlemanOperator(BlockTridiagonalOperator):
    """Truncated lift of a :class:`PDEQuadraticSystem` at level ``N``."""

    system: PDEQuadraticSystem
    N: int
    memory_cap: int | None = field(default=DEFAULT_MEMORY_CAP, repr=False)

    def __post_init__(self):
        self._guard("PDE Carleman state")

    def block_size(self, i: int) -> int:
        return self.system.level_size(i)

    @property
    def has_source(self) -> bool:
        return bool(np.any(self.system.F0 != 0))

    @property
    def has_linear(self) -> bool:
        return any(op is not None for row in self.system.F1 for op in row)

    def transfer_apply(self, i, j, y):
        return pde_transfer_apply(self.system, i, j, y)

    def lift(self, u0) -> LiftedState:
        return lift_initial_grid(u0, self.N)


def pde_rhs(sys: PDEQuadraticSystem, N: int, z: LiftedState, memory_cap=DEFAULT_MEMORY_CAP):
    return PDECarlemanOperator(sys, N, memory_cap=memory_cap).rhs(z)


def lift_initial_grid(u0, N: int, t: float = 0.0) -> LiftedState:
    """Blocks ``u0(x_1) x ... x u0(x_i)`` for ``i = 1..N`` from a level-1 field."""
    if N < 1:
        raise ValueError(f"truncation level must be >= 1, got {N}")
    u0 = np.asarray(u0, dtype=float).reshape(-1)
    return LiftedState([kron_power(u0, i) for i in range(1, N + 1)], t)


def pde_state_size(copy_size: int, N: int) -> int:
    """Total lifted dimension ``s + s**2 + ... + s**N`` for copies of length ``s``."""
    return sum(copy_size**i for i in range(1, N + 1))


def _check_slot(i: int, nu: int):
    if i < 1 or not 1 <= nu <= i:
        raise ValueError(f"invalid slot: level={i}, slot={nu}")


def _check_level(sys: PDEQuadraticSystem, y, level: int) -> np.ndarray:
    y = np.asarray(y, dtype=float).reshape(-1)
    expected = sys.level_size(level)
    if y.size != expected:
        raise ValueError(f"expected a level-{level} tensor of length {expected}, got {y.size}")
    return y
