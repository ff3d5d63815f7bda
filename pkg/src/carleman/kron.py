"""Kronecker-power algebra and matrix-free lifted factor operators.

Index ordering is lexicographic with slot 1 most significant, so that for
``u = [u1, u2]`` the second power is ``[u1*u1, u1*u2, u2*u1, u2*u2]``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class LiftIndex(NamedTuple):
    """Position of a single factor inside an ``level``-fold Kronecker product.

    ``slot`` is 1-based, ``1 <= slot <= level``.
    """

    level: int
    slot: int

    def check(self) -> None:
        if self.level < 1 or not 1 <= self.slot <= self.level:
            raise ValueError(f"invalid lift index: level={self.level}, slot={self.slot}")


def as_vector(a) -> np.ndarray:
    """Return ``a`` as a finite 1-D float array."""
    v = np.asarray(a, dtype=float).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def as_matrix(F, rows: int | None = None) -> np.ndarray:
    """Return ``F`` as a finite 2-D float array.

    A 1-D input is read as a single column, which is how an inhomogeneous
    term ``F0`` is stored (shape ``(n, 1)``).
    """
    M = np.asarray(F, dtype=float)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {M.shape}")
    if rows is not None and M.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {M.shape[0]}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def kron_vec(a, b) -> np.ndarray:
    """Kronecker product of two vectors, ``out[p*len(b) + q] = a[p]*b[q]``."""
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    return (a[:, None] * b[None, :]).reshape(-1)


def kron_power(u, i: int) -> np.ndarray:
    """``i``-fold Kronecker power of ``u``; ``i = 0`` gives ``[1.0]``."""
    if i < 0:
        raise ValueError(f"Kronecker power must be non-negative, got {i}")
    u = np.asarray(u, dtype=float).reshape(-1)
    out = np.ones(1)
    for _ in range(i):
        out = kron_vec(out, u)
    return out


def lifted_apply(F, idx, y) -> np.ndarray:
    """Apply ``I_n x ... x F x ... x I_n`` (``F`` at ``idx.slot``) to ``y``.

    ``F`` has shape ``(n, n**j)`` and consumes ``j`` adjacent factor slots of
    ``y`` starting at the insertion slot, so ``len(y) == n**(level + j - 1)``
    and the result has length ``n**level``. ``j = 0`` covers the
    inhomogeneous insertion, where the missing factor is an implicit 1.

    The Kronecker matrix is never formed: ``y`` is viewed as
    ``(n**(slot-1), n**j, n**(level-slot))`` and ``F`` acts on the middle
    axis, one column at a time.
    """
    F = as_matrix(F)
    idx = LiftIndex(*idx)
    idx.check()
    n, cols = F.shape
    y = np.asarray(y, dtype=float).reshape(-1)
    expected = n ** (idx.slot - 1) * cols * n ** (idx.level - idx.slot)
    if y.size != expected:
        raise ValueError(
            f"lifted_apply at level {idx.level}, slot {idx.slot}: "
            f"expected input of length {expected}, got {y.size}"
        )
    return slot_kernel(F, idx.level, idx.slot, y)


def slot_kernel(F: np.ndarray, level: int, slot: int, y: np.ndarray) -> np.ndarray:
    """Unchecked core of :func:`lifted_apply` for pre-validated 2-D ``F`` and flat ``y``."""
    n, cols = F.shape
    pre = n ** (slot - 1)
    post = n ** (level - slot)
    Y = y.reshape(pre, cols, post)
    out = F[:, 0][None, :, None] * Y[:, 0][:, None, :]
    for b in range(1, cols):
        out += F[:, b][None, :, None] * Y[:, b][:, None, :]
    return out.reshape(-1)


def lifted_matrix(F, idx, n: int | None = None) -> np.ndarray:
    """Dense ``I x ... x F x ... x I`` assembled with ``np.kron``.

    Only meant for validation on tiny sizes.
    """
    F = as_matrix(F)
    idx = LiftIndex(*idx)
    idx.check()
    n = F.shape[0] if n is None else n
    left = np.eye(n ** (idx.slot - 1))
    right = np.eye(n ** (idx.level - idx.slot))
    return np.kron(np.kron(left, F), right)
