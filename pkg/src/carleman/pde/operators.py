"""Discrete linear operators acting on one or two coordinate copies.

An operator receives an array whose leading axes are the grid axes of the
free copy ``x`` (``m`` of them), followed, for two-copy operators, by the
``m`` axes of the contracted copy ``w``, followed by arbitrary batch axes.
Eliminating a ``w`` coordinate leaves a size-1 axis in its place, so a
well-formed two-copy entry returns shape ``grid.shape + (1,)*m + batch``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec

COPIES = ("x", "w")


def apply_along(M: np.ndarray, f: np.ndarray, axis: int) -> np.ndarray:
    """Multiply ``f`` by the matrix ``M`` along ``axis``."""
    return np.moveaxis(np.tensordot(M, f, axes=([1], [axis])), 0, axis)


def _axis_index(grid: GridSpec, dim: int, copy: str) -> int:
    if copy not in COPIES:
        raise ValueError(f"copy must be 'x' or 'w', got {copy!r}")
    if not 0 <= dim < grid.m:
        raise ValueError(f"dimension {dim + 1} does not exist on an m={grid.m} grid")
    return dim if copy == "x" else grid.m + dim


def _require_live(f: np.ndarray, ax: int, grid: GridSpec, dim: int, what: str):
    if ax >= f.ndim or f.shape[ax] != grid.axes[dim].points:
        raise ValueError(f"{what}: coordinate w{dim + 1} is not available (already contracted)")


class DiscreteOp:
    """Base class; subclasses implement :meth:`apply`."""

    is_zero = False

    def apply(self, f: np.ndarray, grid: GridSpec) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, f, grid):
        return self.apply(np.asarray(f, dtype=float), grid)


class Zero(DiscreteOp):
    is_zero = True

    def apply(self, f, grid):
        return np.zeros_like(f)

    def __repr__(self):
        return "Zero()"


@dataclass(frozen=True)
class Scale(DiscreteOp):
    value: float

    @property
    def is_zero(self):
        return self.value == 0

    def apply(self, f, grid):
        return self.value * f


@dataclass(frozen=True, eq=False)
class Field(DiscreteOp):
    """Pointwise multiplication by a grid function of one copy."""

    values: np.ndarray
    copy: str = "x"

    def apply(self, f, grid):
        values = np.asarray(self.values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(f"field of shape {values.shape} does not match grid {grid.shape}")
        if self.copy == "w":
            for d in range(grid.m):
                _require_live(f, grid.m + d, grid, d, "field on w")
            shape = (1,) * grid.m + values.shape
        else:
            shape = values.shape
        shape = shape + (1,) * (f.ndim - len(shape))
        return f * values.reshape(shape)


@dataclass(frozen=True)
class Coordinate(DiscreteOp):
    """Multiplication by coordinate ``dim`` (0-based) of the given copy."""

    dim: int
    copy: str = "x"

    def apply(self, f, grid):
        ax = _axis_index(grid, self.dim, self.copy)
        if self.copy == "w":
            _require_live(f, ax, grid, self.dim, "coordinate multiplier")
        shape = [1] * f.ndim
        shape[ax] = grid.axes[self.dim].points
        return f * grid.axes[self.dim].nodes.reshape(shape)


@dataclass(frozen=True)
class Derivative(DiscreteOp):
    """``order``-th derivative along coordinate ``dim`` of one copy."""

    dim: int
    order: int = 1
    copy: str = "x"

    def apply(self, f, grid):
        ax = _axis_index(grid, self.dim, self.copy)
        if self.copy == "w":
            _require_live(f, ax, grid, self.dim, "derivative")
        return apply_along(grid.axes[self.dim].derivative_matrix(self.order), f, ax)


@dataclass(frozen=True)
class CumulativeIntegral(DiscreteOp):
    """Integral from the lower grid edge up to the running coordinate.

    On the ``w`` copy the upper limit is the matching ``x`` coordinate, so
    ``w_dim`` is eliminated and the result depends on ``x_dim`` only.
    """

    dim: int
    copy: str = "w"

    def apply(self, f, grid):
        C = grid.axes[self.dim].cumulative_matrix()
        xa = _axis_index(grid, self.dim, "x")
        if self.copy == "x":
            return apply_along(C, f, xa)
        wa = _axis_index(grid, self.dim, "w")
        _require_live(f, wa, grid, self.dim, "cumulative integral")
        # out[.., a, .., 0, ..] = sum_b C[a, b] f[.., a, .., b, ..]
        g2 = np.moveaxis(f, (xa, wa), (0, 1))
        out = np.einsum("ab,ab...->a...", C, g2)[:, None]
        return np.moveaxis(out, (0, 1), (xa, wa))


@dataclass(frozen=True)
class FullIntegral(DiscreteOp):
    """Integral over the whole axis ``dim``.

    On ``w`` the axis collapses to size 1; on ``x`` the constant result is
    broadcast back over the axis.
    """

    dim: int
    copy: str = "w"

    def apply(self, f, grid):
        ax = _axis_index(grid, self.dim, self.copy)
        if self.copy == "w":
            _require_live(f, ax, grid, self.dim, "integral")
        w = grid.axes[self.dim].quadrature_weights()
        out = np.expand_dims(np.tensordot(w, f, axes=([0], [ax])), ax)
        if self.copy == "x":
            out = np.repeat(out, grid.axes[self.dim].points, axis=ax)
        return out


@dataclass(frozen=True)
class Contract(DiscreteOp):
    """Variable change ``w_dim -> x_dim``: restriction to the diagonal."""

    w_dim: int
    x_dim: int

    def apply(self, f, grid):
        xa = _axis_index(grid, self.x_dim, "x")
        wa = _axis_index(grid, self.w_dim, "w")
        _require_live(f, wa, grid, self.w_dim, "contraction")
        if grid.axes[self.w_dim] != grid.axes[self.x_dim]:
            raise ValueError(
                f"cannot identify w{self.w_dim + 1} with x{self.x_dim + 1}: different axes"
            )
        g2 = np.moveaxis(f, (xa, wa), (0, 1))
        k = np.arange(g2.shape[0])
        out = g2[k, k][:, None]
        return np.moveaxis(out, (0, 1), (xa, wa))


@dataclass(frozen=True)
class Compose(DiscreteOp):
    """Product of operators; the rightmost one acts first."""

    ops: tuple

    def __init__(self, *ops):
        object.__setattr__(self, "ops", tuple(ops))

    @property
    def is_zero(self):
        return any(op.is_zero for op in self.ops)

    def apply(self, f, grid):
        for op in reversed(self.ops):
            f = op.apply(f, grid)
        return f


@dataclass(frozen=True)
class ScaledSum(DiscreteOp):
    """``sum_k c_k op_k``."""

    terms: tuple

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple((float(c), op) for c, op in terms))

    @property
    def is_zero(self):
        return all(c == 0 or op.is_zero for c, op in self.terms)

    def apply(self, f, grid):
        out = None
        for c, op in self.terms:
            piece = c * op.apply(f, grid)
            out = piece if out is None else out + piece
        return np.zeros_like(f) if out is None else out


def eliminates_w(op: DiscreteOp, grid: GridSpec) -> bool:
    """Probe whether a two-copy operator maps ``(x, w)`` functions to ``x`` functions."""
    probe = np.random.default_rng(0).standard_normal(grid.shape * 2 + (1,))
    try:
        out = op.apply(probe, grid)
    except ValueError:
        return False
    return out.shape == grid.shape + (1,) * grid.m + (1,)
