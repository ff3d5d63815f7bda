"""Uniform tensor-product grids and their 1-D differentiation/quadrature matrices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

BOUNDARIES = ("periodic", "box")
SCHEMES = ("central", "spectral")


@dataclass(frozen=True)
class Axis:
    """One coordinate direction.

    Periodic axes sample ``[lower, upper)`` with ``h = (upper - lower)/points``;
    box axes sample the closed interval with ``h = (upper - lower)/(points - 1)``.
    """

    points: int
    lower: float
    upper: float
    boundary: str = "periodic"
    scheme: str = "central"

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.scheme == "spectral" and self.boundary != "periodic":
            raise ValueError("spectral derivatives need a periodic axis")
        if int(self.points) != self.points or self.points < 4:
            raise ValueError(f"an axis needs at least 4 points, got {self.points}")
        if not self.upper > self.lower:
            raise ValueError(f"upper bound {self.upper} must exceed lower bound {self.lower}")

    @property
    def h(self) -> float:
        cells = self.points if self.boundary == "periodic" else self.points - 1
        return (self.upper - self.lower) / cells

    @property
    def nodes(self) -> np.ndarray:
        return self.lower + self.h * np.arange(self.points)

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def derivative_matrix(self, order: int) -> np.ndarray:
        return _derivative_matrix(self, order).copy()

    def cumulative_matrix(self) -> np.ndarray:
        return _cumulative_matrix(self).copy()

    def quadrature_weights(self) -> np.ndarray:
        """Trapezoid weights; on a periodic axis every node weighs ``h``."""
        w = np.full(self.points, self.h)
        if self.boundary == "box":
            w[0] = w[-1] = 0.5 * self.h
        return w


@lru_cache(maxsize=None)
def _derivative_matrix(axis: Axis, order: int) -> np.ndarray:
    if order < 0:
        raise ValueError(f"derivative order must be non-negative, got {order}")
    g = axis.points
    if order == 0:
        return np.eye(g)
    if axis.scheme == "spectral":
        return _spectral_matrix(g, axis.length, order)
    if order > 2:
        # second-order accurate composition of the basic stencils
        D = np.eye(g)
        for _ in range(order // 2):
            D = _derivative_matrix(axis, 2) @ D
        if order % 2:
            D = _derivative_matrix(axis, 1) @ D
        return D
    h = axis.h
    D = np.zeros((g, g))
    rows = np.arange(g)
    if axis.boundary == "periodic":
        if order == 1:
            D[rows, (rows + 1) % g] += 1 / (2 * h)
            D[rows, (rows - 1) % g] -= 1 / (2 * h)
        else:
            D[rows, (rows + 1) % g] += 1 / h**2
            D[rows, (rows - 1) % g] += 1 / h**2
            D[rows, rows] -= 2 / h**2
        return D
    inner = rows[1:-1]
    if order == 1:
        D[inner, inner + 1] = 1 / (2 * h)
        D[inner, inner - 1] = -1 / (2 * h)
        # one-sided, second order at the edges
        D[0, :3] = np.array([-3.0, 4.0, -1.0]) / (2 * h)
        D[-1, -3:] = np.array([1.0, -4.0, 3.0]) / (2 * h)
    else:
        D[inner, inner + 1] = 1 / h**2
        D[inner, inner - 1] = 1 / h**2
        D[inner, inner] = -2 / h**2
        D[0, :4] = np.array([2.0, -5.0, 4.0, -1.0]) / h**2
        D[-1, -4:] = np.array([-1.0, 4.0, -5.0, 2.0]) / h**2
    return D


def _spectral_matrix(g: int, length: float, order: int) -> np.ndarray:
    k = 2 * np.pi * np.fft.fftfreq(g, d=length / g)
    symbol = (1j * k) ** order
    if g % 2 == 0 and order % 2 == 1:
        symbol[g // 2] = 0.0
    cols = np.fft.ifft(symbol[:, None] * np.fft.fft(np.eye(g), axis=0), axis=0)
    return np.real(cols)


@lru_cache(maxsize=None)
def _cumulative_matrix(axis: Axis) -> np.ndarray:
    # (C f)[a] = trapezoid of f from the first node to node a
    g = axis.points
    h = axis.h
    C = np.zeros((g, g))
    for a in range(1, g):
        C[a, :a + 1] = h
        C[a, 0] = C[a, a] = 0.5 * h
    return C


@dataclass(frozen=True)
class GridSpec:
    """Tensor product of :class:`Axis` objects; ``m = len(axes)`` may be 0."""

    axes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        for a in self.axes:
            if not isinstance(a, Axis):
                raise TypeError(f"grid axes must be Axis instances, got {type(a).__name__}")

    @classmethod
    def periodic(cls, points: int, lower: float = 0.0, upper: float = 2 * np.pi,
                 scheme: str = "central") -> GridSpec:
        return cls((Axis(points, lower, upper, "periodic", scheme),))

    @classmethod
    def box(cls, points: int, lower: float = -1.0, upper: float = 1.0) -> GridSpec:
        return cls((Axis(points, lower, upper, "box", "central"),))

    @property
    def m(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple:
        return tuple(a.points for a in self.axes)

    @property
    def size(self) -> int:
        """Number of grid points of one coordinate copy."""
        return int(np.prod(self.shape, dtype=np.int64)) if self.axes else 1

    @property
    def h(self) -> tuple:
        return tuple(a.h for a in self.axes)

    def coordinate(self, dim: int) -> np.ndarray:
        """Values of coordinate ``dim`` (0-based) broadcast over the grid shape."""
        if not 0 <= dim < self.m:
            raise ValueError(f"coordinate dimension {dim} out of range for m={self.m}")
        shape = [1] * self.m
        shape[dim] = self.axes[dim].points
        return np.broadcast_to(self.axes[dim].nodes.reshape(shape), self.shape)

    @cached_property
    def mesh(self) -> tuple:
        return tuple(np.meshgrid(*(a.nodes for a in self.axes), indexing="ij"))

    def sample(self, func) -> np.ndarray:
        """Evaluate ``func(*coords)`` on the grid."""
        return np.asarray(func(*self.mesh), dtype=float) * np.ones(self.shape)

    def quadrature_weights(self) -> np.ndarray:
        w = np.ones(self.shape)
        for d, a in enumerate(self.axes):
            shape = [1] * self.m
            shape[d] = a.points
            w = w * a.quadrature_weights().reshape(shape)
        return w

    def integrate(self, values) -> float:
        return float(np.sum(self.quadrature_weights() * np.asarray(values)))
