"""Block state and block-tridiagonal operator shared by the ODE and PDE lifts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# 2 GiB of float64 state
DEFAULT_MEMORY_CAP = 2 * 1024**3

_INT64_MAX = 2**63 - 1


class MemoryGuardError(MemoryError):
    """Raised before allocation when a lifted state would exceed the cap."""

    def __init__(self, required_bytes: int, cap_bytes: int, what: str = "lifted state"):
        self.required_bytes = required_bytes
        self.cap_bytes = cap_bytes
        super().__init__(
            f"{what} needs {required_bytes} bytes, above the memory cap of {cap_bytes} bytes"
        )


class NumericalAbort(ArithmeticError):
    """A time integrator produced a non-finite state."""

    def __init__(self, step: int, message: str = "non-finite state"):
        self.step = step
        super().__init__(f"{message} at step {step}")


def guarded_total(sizes, cap_bytes: int | None = DEFAULT_MEMORY_CAP, what="lifted state") -> int:
    """Sum block sizes, refusing int64 overflow and totals above ``cap_bytes``."""
    total = 0
    for s in sizes:
        total += s
        if total > _INT64_MAX:
            raise OverflowError(f"{what} dimension exceeds the 64-bit integer range")
    if cap_bytes is not None and 8 * total > cap_bytes:
        raise MemoryGuardError(8 * total, cap_bytes, what)
    return total


@dataclass
class LiftedState:
    """Block vector ``z = [z_1, ..., z_N]``; block ``i`` is a flat order-``i`` tensor."""

    blocks: list
    t: float = 0.0

    def __post_init__(self):
        self.blocks = [np.asarray(b, dtype=float).reshape(-1) for b in self.blocks]

    @property
    def N(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> list[int]:
        return [b.size for b in self.blocks]

    def copy(self) -> LiftedState:
        return LiftedState([b.copy() for b in self.blocks], self.t)

    def flatten(self) -> np.ndarray:
        return np.concatenate(self.blocks)

    @classmethod
    def from_flat(cls, flat, sizes, t: float = 0.0) -> LiftedState:
        flat = np.asarray(flat, dtype=float).reshape(-1)
        if flat.size != sum(sizes):
            raise ValueError(f"flat vector has length {flat.size}, blocks need {sum(sizes)}")
        cuts = np.cumsum(sizes)[:-1]
        return cls(list(np.split(flat, cuts)), t)

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(b)) for b in self.blocks)

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(b))) for b in self.blocks)

    def dot(self, other: LiftedState) -> float:
        return float(sum(np.dot(a, b) for a, b in zip(self.blocks, other.blocks)))

    def _check(self, other: LiftedState):
        if self.sizes != other.sizes:
            raise ValueError(f"block sizes differ: {self.sizes} vs {other.sizes}")

    def __add__(self, other: LiftedState) -> LiftedState:
        self._check(other)
        return LiftedState([a + b for a, b in zip(self.blocks, other.blocks)], self.t)

    def __sub__(self, other: LiftedState) -> LiftedState:
        self._check(other)
        return LiftedState([a - b for a, b in zip(self.blocks, other.blocks)], self.t)

    def __mul__(self, c: float) -> LiftedState:
        return LiftedState([c * a for a in self.blocks], self.t)

    __rmul__ = __mul__

    def __neg__(self) -> LiftedState:
        return LiftedState([-a for a in self.blocks], self.t)


def extract_solution(z: LiftedState) -> np.ndarray:
    """Copy of block 1, the approximation of the original state."""
    return z.blocks[0].copy()


class BlockTridiagonalOperator:
    """Truncated Carleman operator ``dz/dt = A_N z + b_N``.

    Subclasses carry ``N`` and ``memory_cap`` and supply
    :meth:`transfer_apply` (the sum over slots of one ``F_j`` insertion) and
    :meth:`block_size`; the block-tridiagonal assembly, truncation and
    inhomogeneity live here.
    """

    N: int
    memory_cap: int | None

    def block_size(self, i: int) -> int:
        raise NotImplementedError

    def transfer_apply(self, i: int, j: int, y) -> np.ndarray:
        raise NotImplementedError

    @property
    def has_source(self) -> bool:
        """True when ``F0`` is not identically zero."""
        raise NotImplementedError

    @property
    def has_linear(self) -> bool:
        """True when ``F1`` is not identically zero."""
        raise NotImplementedError

    @property
    def sizes(self) -> list[int]:
        return [self.block_size(i) for i in range(1, self.N + 1)]

    @property
    def delta(self) -> int:
        return sum(self.sizes)

    def required_bytes(self) -> int:
        return 8 * self.delta

    def _guard(self, what: str):
        if self.N < 1:
            raise ValueError(f"truncation level must be >= 1, got {self.N}")
        guarded_total(
            (self.block_size(i) for i in range(1, self.N + 1)), self.memory_cap, what
        )

    def conform(self, z: LiftedState) -> None:
        if z.sizes != self.sizes:
            raise ValueError(f"state block sizes {z.sizes} do not match operator {self.sizes}")

    def zeros(self, t: float = 0.0) -> LiftedState:
        return LiftedState([np.zeros(s) for s in self.sizes], t)

    def inhomogeneity(self) -> LiftedState:
        """``b_N``: the ``F0`` insertion in block 1, zero elsewhere."""
        b = self.zeros()
        b.blocks[0] = self.transfer_apply(1, 0, np.ones(1))
        return b

    def apply_linear(self, z: LiftedState) -> LiftedState:
        """``A_N z`` without the inhomogeneous term."""
        self.conform(z)
        out = []
        for i in range(1, self.N + 1):
            acc = self.transfer_apply(i, 1, z.blocks[i - 1])
            if i > 1:
                acc = self.transfer_apply(i, 0, z.blocks[i - 2]) + acc
            if i < self.N:
                acc = acc + self.transfer_apply(i, 2, z.blocks[i])
            out.append(acc)
        return LiftedState(out, z.t)

    def rhs(self, z: LiftedState) -> LiftedState:
        """Full truncated right-hand side ``A_N z + b_N``, block by block."""
        self.conform(z)
        out = []
        for i in range(1, self.N + 1):
            below = np.ones(1) if i == 1 else z.blocks[i - 2]
            acc = self.transfer_apply(i, 0, below) + self.transfer_apply(i, 1, z.blocks[i - 1])
            if i < self.N:
                acc = acc + self.transfer_apply(i, 2, z.blocks[i])
            out.append(acc)
        return LiftedState(out, z.t)


def rhs(op: BlockTridiagonalOperator, z: LiftedState) -> LiftedState:
    return op.rhs(z)
