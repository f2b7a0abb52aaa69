"""Scheme parameters, the coefficients A_p(beta) and the stability polynomial.

The order-2P update is

    u^{n+1} - 2 u^n + u^{n-1} = sum_{p=1}^{P} A_p(beta) D^p[u^n]

and a Fourier mode with D-symbol ``dhat`` in [0, 1] is amplified by the roots of
``rho**2 - (2 - S) rho + 1 = 0`` with ``S = -sum_p A_p(beta) dhat**p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, NumericalError

MAX_ORDER_P = 10


def coefficient_A(p: int, beta: float) -> float:
    """A_p(beta) = 2 sum_{m=1}^p (-1)^m beta^{2m}/(2m)! binom(p-1, m-1).

    Terms are built by ratio from the previous one, so no factorials are formed.
    """
    if int(p) != p or p < 1:
        raise ConfigurationError(f"p must be a positive integer, got {p!r}")
    if beta < 0:
        raise ConfigurationError(f"beta must be non-negative, got {beta!r}")
    p = int(p)
    b2 = float(beta) ** 2
    # m = 1 term, with the leading factor 2 already folded in: 2 * (-beta^2 / 2!)
    term = -b2
    total = term
    for m in range(1, p):
        term *= -b2 / ((2 * m + 1) * (2 * m + 2)) * (p - m) / m
        total += term
    return float(total)


def pm_coefficient(p: int, m: int, beta: float) -> float:
    """c_pm = (-1)^m 2 beta^{2m}/(2m)! binom(p-1, m-1), so that A_p = sum_m c_pm."""
    if not 1 <= m <= p:
        raise ConfigurationError(f"need 1 <= m <= p, got p={p}, m={m}")
    return (-1) ** m * 2.0 * beta ** (2 * m) / math.factorial(2 * m) * math.comb(p - 1, m - 1)


@dataclass(frozen=True)
class SchemeCoefficients:
    """A_p(beta) for p = 1..P and the triangular table c[p][m] (1-based keys)."""

    P: int
    beta: float
    a: tuple = field(init=False)
    c_pm: dict = field(init=False)

    def __post_init__(self):
        a = tuple(coefficient_A(p, self.beta) for p in range(1, self.P + 1))
        c = {
            (p, m): pm_coefficient(p, m, self.beta)
            for p in range(1, self.P + 1)
            for m in range(1, p + 1)
        }
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c_pm", c)

    def A(self, p):
        return self.a[p - 1]


def stability_sum(P: int, beta: float, dhat):
    """S(beta, dhat) = -sum_{p=1}^P A_p(beta) dhat^p. ``dhat`` may be an array."""
    d = np.asarray(dhat, dtype=float)
    if np.any(d < 0.0) or np.any(d > 1.0) or np.any(~np.isfinite(d)):
        raise ConfigurationError("dhat must lie in [0, 1]")
    s = np.zeros_like(d)
    # Horner in dhat
    for p in range(P, 0, -1):
        s = (s - coefficient_A(p, beta)) * d
    return float(s) if s.ndim == 0 else s


@lru_cache(maxsize=None)
def beta_max(P: int) -> float:
    """Largest beta for which the order-2P scheme is A-stable: first root of S(beta, 1) = 4.

    A pre-scan in steps of 0.01 over (0, 2] brackets the first crossing, then
    bisection narrows it to 1e-10. The lower end of the final bracket is
    returned, so ``stability_sum(P, beta_max(P), 1) <= 4`` holds in floating point.
    """
    if int(P) != P or not 1 <= P <= MAX_ORDER_P:
        raise ConfigurationError(f"P must be an integer in [1, {MAX_ORDER_P}], got {P!r}")
    P = int(P)

    def g(b):
        return stability_sum(P, b, 1.0) - 4.0

    lo = 0.0
    hi = None
    for k in range(1, 201):
        b = k * 0.01
        if g(b) >= 0.0:
            hi = b
            break
        lo = b
    if hi is None:
        raise NumericalError(f"no sign change of S(beta, 1) - 4 on (0, 2] for P={P}")
    if g(hi) == 0.0:
        return hi
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if g(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return lo


def amplification_factor(P: int, beta: float, dhat):
    """Both roots of rho^2 - (2 - S) rho + 1 = 0 for S = stability_sum(P, beta, dhat).

    Returns ``(rho_1, rho_2)``, complex scalars or arrays matching ``dhat``.
    The discriminant is evaluated as S (S - 4) to avoid cancellation near S = 4.
    """
    if beta <= 0:
        raise ConfigurationError(f"beta must be positive, got {beta!r}")
    s = np.asarray(stability_sum(P, beta, dhat), dtype=float)
    return roots_from_S(s)


def roots_from_S(s):
    """Roots of rho^2 - (2 - s) rho + 1 = 0 for a given stability sum ``s``."""
    s = np.asarray(s, dtype=float)
    b = 2.0 - s
    disc = s * (s - 4.0)
    sq = np.sqrt(disc.astype(complex))
    r1 = 0.5 * (b + sq)
    r2 = 0.5 * (b - sq)
    if r1.ndim == 0:
        return complex(r1), complex(r2)
    return r1, r2


@dataclass(frozen=True)
class SolverParams:
    """Wave speed ``c``, time step ``dt``, averaging parameter ``beta`` and order parameter ``P``.

    ``alpha = beta / (c * dt)`` is derived and never stored. ``beta=None`` selects
    ``beta_max(P)``.
    """

    c: float
    dt: float
    P: int = 1
    beta: float | None = None

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ConfigurationError(f"wave speed c must be positive, got {self.c!r}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")
        if int(self.P) != self.P or not 1 <= self.P <= MAX_ORDER_P:
            raise ConfigurationError(f"P must be an integer in [1, {MAX_ORDER_P}], got {self.P!r}")
        bmax = beta_max(int(self.P))
        if self.beta is None:
            object.__setattr__(self, "beta", bmax)
        if not self.beta > 0:
            raise ConfigurationError(f"beta must be positive, got {self.beta!r}")
        if self.beta > bmax:
            raise ConfigurationError(
                f"beta = {self.beta} exceeds beta_max({self.P}) = {bmax:.10f}; the scheme is not A-stable"
            )
        object.__setattr__(self, "P", int(self.P))

    @property
    def alpha(self) -> float:
        return self.beta / (self.c * self.dt)

    @property
    def coefficients(self) -> SchemeCoefficients:
        return _coefficients(self.P, self.beta)


@lru_cache(maxsize=64)
def _coefficients(P, beta):
    return SchemeCoefficients(P, beta)
