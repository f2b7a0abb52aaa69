"""Named initial conditions with exact solutions and analytic even derivatives.

Each preset exposes ``f(x[, y])``, ``g(...)``, ``f_even(m, ...)`` (the m-th
power of the Laplacian of f) and likewise for g, plus ``exact(t, ...)`` when
one is known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite_e

from .errors import ConfigurationError


@dataclass(frozen=True)
class StandingWave1D:
    """sin(k (x - x0)) cos(c k t)."""

    k: float = 2.0 * math.pi
    c: float = 1.0
    x0: float = 0.0

    def f(self, x):
        return np.sin(self.k * (np.asarray(x) - self.x0))

    def g(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def f_even(self, m, x):
        return (-self.k**2) ** m * self.f(x)

    def g_even(self, m, x):
        return self.g(x)

    def exact(self, t, x):
        return self.f(x) * math.cos(self.c * self.k * t)


@dataclass(frozen=True)
class Gaussian1D:
    """exp(-(x - x0)^2 / w^2) released from rest; no closed form on a bounded line."""

    x0: float = 0.0
    width: float = 0.1

    def f(self, x):
        s = (np.asarray(x) - self.x0) / self.width
        return np.exp(-(s**2))

    def g(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def f_even(self, m, x):
        return _gaussian_derivative(2 * m, np.asarray(x) - self.x0, self.width)

    def g_even(self, m, x):
        return self.g(x)

    exact = None


def _gaussian_derivative(order, s, width):
    """d^order/ds^order exp(-s^2/w^2) = (-1)^n (sqrt2/w)^n He_n(sqrt2 s/w) exp(-s^2/w^2)."""
    z = math.sqrt(2.0) * s / width
    coef = np.zeros(order + 1)
    coef[order] = 1.0
    return (-math.sqrt(2.0) / width) ** order * hermite_e.hermeval(z, coef) * np.exp(-((s / width) ** 2))


@dataclass(frozen=True)
class StandingMode2D:
    """sin(kx (x - x0)) sin(ky (y - y0)) cos(c |k| t); on [-1, 1]^2 with kx = ky = pi
    and x0 = y0 = -1 it is sin(pi x) sin(pi y) cos(sqrt2 pi c t)."""

    kx: float = math.pi
    ky: float = math.pi
    c: float = 1.0
    x0: float = 0.0
    y0: float = 0.0

    @property
    def omega(self):
        return self.c * math.hypot(self.kx, self.ky)

    def f(self, x, y):
        return np.sin(self.kx * (x - self.x0)) * np.sin(self.ky * (y - self.y0))

    def g(self, x, y):
        return np.zeros(np.broadcast(x, y).shape)

    def f_even(self, m, x, y):
        return (-(self.kx**2 + self.ky**2)) ** m * self.f(x, y)

    def g_even(self, m, x, y):
        return self.g(x, y)

    def exact(self, t, x, y):
        return self.f(x, y) * math.cos(self.omega * t)


@dataclass(frozen=True)
class Gaussian2D:
    """exp(-((x - x0)^2 + (y - y0)^2) / w^2) released from rest."""

    x0: float = 0.0
    y0: float = 0.0
    width: float = 0.2

    def f(self, x, y):
        return np.exp(-(((x - self.x0) ** 2 + (y - self.y0) ** 2) / self.width**2))

    def g(self, x, y):
        return np.zeros(np.broadcast(x, y).shape)

    def f_even(self, m, x, y):
        # Laplacian^m of a separable product: sum_j binom(m, j) d_x^{2j} d_y^{2(m-j)}
        sx, sy = x - self.x0, y - self.y0
        out = 0.0
        for j in range(m + 1):
            out = out + math.comb(m, j) * _gaussian_derivative(2 * j, sx, self.width) * _gaussian_derivative(
                2 * (m - j), sy, self.width
            )
        return out

    def g_even(self, m, x, y):
        return self.g(x, y)

    exact = None


@dataclass(frozen=True)
class ManufacturedSourced2D:
    """u = sin(pi x) sin(pi y) cos(t) on [-1, 1]^2 (zero on the box), with
    S = u_tt / c^2 - Laplacian(u) = (2 pi^2 - 1/c^2) u."""

    c: float = 1.0

    def f(self, x, y):
        return np.sin(math.pi * x) * np.sin(math.pi * y)

    def g(self, x, y):
        return np.zeros(np.broadcast(x, y).shape)

    def exact(self, t, x, y):
        return self.f(x, y) * math.cos(t)

    def exact_u1(self, dt, x, y):
        return self.exact(dt, x, y)

    def source(self, X, Y, t, u=None):
        return (2.0 * math.pi**2 - 1.0 / self.c**2) * self.exact(t, X, Y)


ZERO = "zero"

PRESETS_1D = {"standing_wave": StandingWave1D, "gaussian": Gaussian1D}
PRESETS_2D = {"standing_mode": StandingMode2D, "gaussian": Gaussian2D, "manufactured": ManufacturedSourced2D}


def make_preset(dim: int, name: str, **kwargs):
    table = PRESETS_1D if dim == 1 else PRESETS_2D
    if name not in table:
        raise ConfigurationError(f"unknown {dim}D initial condition {name!r}; choose from {sorted(table)} or 'zero'")
    try:
        return table[name](**kwargs)
    except TypeError as exc:
        raise ConfigurationError(f"bad parameters for preset {name!r}: {exc}") from exc
