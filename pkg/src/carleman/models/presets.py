"""Named initial conditions.

Scalar presets return callables of the coordinate arrays; Vlasov presets
return callables ``f(x, v)`` producing an array with a trailing species axis.
"""

from __future__ import annotations

import math

import numpy as np


def linear():
    return lambda x: np.asarray(x, dtype=float)


def sine(amplitude: float = 1.0, wavenumber: float = 1.0):
    return lambda x: amplitude * np.sin(wavenumber * np.asarray(x, dtype=float))


def gaussian(center: float = 0.0, width: float = 1.0):
    return lambda x: np.exp(-((np.asarray(x, dtype=float) - center) ** 2) / (2 * width**2))


def constant(value: float = 1.0):
    return lambda x: np.full_like(np.asarray(x, dtype=float), value)


def _maxwellian(v, center, spread):
    return np.exp(-((v - center) ** 2) / (2 * spread**2)) / (math.sqrt(2 * math.pi) * spread)


def two_stream(v0: float = 1.0, spread: float = 0.5, perturbation: float = 0.05,
               wavenumber: float = 1.0):
    """Species 1: two counter-streaming beams with a density ripple; species 2: a
    neutralising Maxwellian background at rest."""

    def f(x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        beams = 0.5 * (_maxwellian(v, v0, spread) + _maxwellian(v, -v0, spread))
        electrons = (1 + perturbation * np.cos(wavenumber * x)) * beams
        ions = _maxwellian(v, 0.0, spread) * np.ones_like(x)
        return np.stack([electrons, ions], axis=-1)

    return f


def equal_species(v0: float = 1.0, spread: float = 0.5, perturbation: float = 0.05,
                  wavenumber: float = 1.0):
    """Both species carry the same two-stream profile, so the field vanishes."""
    base = two_stream(v0, spread, perturbation, wavenumber)

    def f(x, v):
        e = base(x, v)[..., 0]
        return np.stack([e, e], axis=-1)

    return f


def separable(wavenumber: float = 1.0, spread: float = 0.5, amplitude: float = 0.5):
    """``f(x) g(v)`` for both species; the free-streaming test profile."""

    def f(x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        prof = (1 + amplitude * np.sin(wavenumber * x)) * _maxwellian(v, 0.0, spread)
        return np.stack([prof, prof], axis=-1)

    return f


PRESETS = {
    "linear": linear,
    "sine": sine,
    "gaussian": gaussian,
    "constant": constant,
    "two-stream": two_stream,
    "equal-species": equal_species,
    "separable": separable,
}


def make_preset(name: str, **params):
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown initial-condition preset {name!r}; "
                         f"choose from {sorted(PRESETS)}") from None
    return factory(**params)


def sample(grid, func, n: int = 1) -> np.ndarray:
    """Evaluate a preset on ``grid``; shape ``grid.shape`` or ``grid.shape + (n,)``."""
    values = np.asarray(func(*grid.mesh), dtype=float)
    shape = grid.shape if n == 1 else grid.shape + (n,)
    return np.broadcast_to(values, shape).copy()
