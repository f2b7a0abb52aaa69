"""The one-dimensional A-stable scheme of order 2P.

    u^{n+1} = 2 u^n - u^{n-1} + sum_{p=1}^{P} A_p(beta) D^p[u^n]

D^p is applied recursively, one boundary-corrected convolution per power.
On Dirichlet lines the operand of every power needs boundary values; they
come from the boundary data through the wave equation (even time derivatives
of the data stand in for even space derivatives of the solution).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conv1d import LineGrid, make_workspace
from .errors import ConfigurationError, InstabilityError
from .params import SolverParams

SENTINEL = 1e6


# ------------------------------------------------------------ boundary data


class BoundaryFunction:
    """A boundary value u_B(t) with time derivatives on demand."""

    def derivative(self, t: float, order: int) -> float:
        raise NotImplementedError

    def __call__(self, t):
        return self.derivative(t, 0)


class ZeroBoundary(BoundaryFunction):
    def derivative(self, t, order):
        return 0.0


@dataclass(frozen=True)
class ConstantBoundary(BoundaryFunction):
    value: float

    def derivative(self, t, order):
        return self.value if order == 0 else 0.0


@dataclass(frozen=True)
class SineBoundary(BoundaryFunction):
    """amplitude * sin(omega t + phase)."""

    amplitude: float
    omega: float
    phase: float = 0.0

    def derivative(self, t, order):
        return self.amplitude * self.omega**order * math.sin(self.omega * t + self.phase + order * math.pi / 2)


def fd_weights(offsets, order):
    """Finite-difference weights on integer ``offsets`` for the ``order``-th derivative (unit spacing)."""
    offs = np.asarray(offsets, dtype=float)
    n = offs.size
    V = np.vander(offs, n, increasing=True).T / np.array([math.factorial(k) for k in range(n)])[:, None]
    rhs = np.zeros(n)
    rhs[order] = 1.0
    return np.linalg.solve(V, rhs)


@dataclass(frozen=True)
class TabulatedBoundary(BoundaryFunction):
    """Boundary data known only by value; derivatives by centred finite differences.

    ``accuracy`` is the formal order of the difference formula; ``h`` the
    sampling step in time.
    """

    func: object
    h: float
    accuracy: int = 2

    def derivative(self, t, order):
        if order == 0:
            return float(self.func(t))
        q = max(2, self.accuracy + self.accuracy % 2)
        r = (order + q - 1) // 2
        offs = np.arange(-r, r + 1)
        w = fd_weights(offs, order)
        samples = np.array([self.func(t + k * self.h) for k in offs])
        return float(w @ samples) / self.h**order


@dataclass(frozen=True)
class DirichletData:
    """Left and right boundary functions of a Dirichlet line."""

    left: BoundaryFunction
    right: BoundaryFunction

    @classmethod
    def homogeneous(cls):
        return cls(ZeroBoundary(), ZeroBoundary())


def boundary_values_ILW(data: DirichletData, m: int, t: float, params: SolverParams, odd: bool = False):
    """Boundary values for D^m of the solution (``odd=True``: of its time derivative).

    D^m ~ (-d_xx / alpha^2)^m and d_xx^m u = (d_tt / c^2)^m u on the boundary, so

        value = (-1)^m (dt / beta)^{2m} d^{2m} u_B / dt^{2m}.
    """
    if m < 0 or m > params.P:
        raise ConfigurationError(f"boundary level m={m} outside 0..{params.P}")
    scale = (-1) ** m * (params.dt / params.beta) ** (2 * m)
    order = 2 * m + (1 if odd else 0)
    try:
        left = data.left.derivative(t, order)
        right = data.right.derivative(t, order)
    except NotImplementedError as exc:
        raise ConfigurationError(f"boundary data has no derivative of order {order}") from exc
    return scale * left, scale * right


# ------------------------------------------------------------------ stepping


@dataclass(frozen=True)
class WaveState1D:
    u_prev: np.ndarray
    u_curr: np.ndarray
    n: int = 1
    t: float = 0.0
    reference: float = 0.0

    def __post_init__(self):
        if np.shape(self.u_prev) != np.shape(self.u_curr):
            raise ConfigurationError("u_prev and u_curr must share the grid")


class Wave1D:
    """The order-2P solver on one line; owns the convolution workspace."""

    def __init__(self, line: LineGrid, params: SolverParams, boundary: DirichletData | None = None,
                 quadrature: str = "linear"):
        if line.kind == "periodic" and boundary is not None:
            raise ConfigurationError("periodic lines take no boundary data")
        if line.kind == "dirichlet" and boundary is None:
            boundary = DirichletData.homogeneous()
        self.line = line
        self.params = params
        self.boundary = boundary
        self.quadrature = quadrature
        self.ws = make_workspace(line, params.alpha, quadrature)

    # -- operators -----------------------------------------------------------

    def D(self, v, operand_level=None, t=0.0, odd=False):
        """One D application. On Dirichlet lines the operand is the level-``operand_level``
        quantity; the result gets level ``operand_level + 1`` boundary values."""
        vals = np.ascontiguousarray(v, dtype=float)
        if self.line.kind == "periodic":
            w = self.ws.linv(np.append(vals, vals[0]))[:-1]
            return vals - w
        m = operand_level
        lo = boundary_values_ILW(self.boundary, m, t, self.params, odd)
        hi = boundary_values_ILW(self.boundary, m + 1, t, self.params, odd)
        vals = vals.copy()
        vals[0], vals[-1] = lo
        w = self.ws.linv(vals, lo[0] - hi[0], lo[1] - hi[1])
        return vals - w

    def powers(self, u, t=0.0, odd=False):
        """[D^1 u, ..., D^P u], applied recursively."""
        out = []
        v = u
        for p in range(self.params.P):
            v = self.D(v, p, t, odd)
            out.append(v)
        return out

    # -- time stepping ---------------------------------------------------------

    def step(self, state: WaveState1D) -> WaveState1D:
        prm = self.params
        coeffs = prm.coefficients
        u = state.u_curr
        acc = 2.0 * u - state.u_prev
        v = u
        for p in range(1, prm.P + 1):
            v = self.D(v, p - 1, state.t)
            acc += coeffs.A(p) * v
        t_new = state.t + prm.dt
        if self.line.kind == "dirichlet":
            acc[0] = self.boundary.left(t_new)
            acc[-1] = self.boundary.right(t_new)
        peak = float(np.max(np.abs(acc)))
        ref = state.reference if state.reference > 0 else peak
        if not np.isfinite(peak) or (ref > 0 and peak > SENTINEL * ref):
            raise InstabilityError(state.n + 1, peak, ref)
        return WaveState1D(u, acc, state.n + 1, t_new, ref)

    def initial_step(self, f, g, f_even_derivs=None, g_even_derivs=None):
        """u(dt) by Taylor expansion with time derivatives traded for space derivatives.

        ``*_even_derivs(m)`` return d^{2m}/dx^{2m} of the data at the points; when
        missing, (d_xx/alpha^2)^m is built from D powers through
        (k/alpha)^{2m} = sum_{p>=m} binom(p-1, m-1) Dhat^p truncated at p = P.
        """
        def terms(v, odd):
            for p, dp in enumerate(self.powers(v, 0.0, odd), start=1):
                for m in range(1, p + 1):
                    yield (p, m), dp

        return _taylor_start(self.params, f, g, f_even_derivs, g_even_derivs, terms)

    def start(self, f, g, f_even_derivs=None, g_even_derivs=None, u1=None) -> WaveState1D:
        f = np.asarray(f, dtype=float)
        if u1 is None:
            u1 = self.initial_step(f, g, f_even_derivs, g_even_derivs)
            if self.line.kind == "dirichlet":
                u1[0] = self.boundary.left(self.params.dt)
                u1[-1] = self.boundary.right(self.params.dt)
        ref = max(float(np.max(np.abs(f))), float(np.max(np.abs(u1))))
        return WaveState1D(f.copy(), np.asarray(u1, dtype=float), 1, self.params.dt, ref)


def taylor_weight(p, m, beta, odd=False):
    """Weight of the (p, m) operator term in the start-up series:
    (-1)^m beta^{2m} / (2m + odd)! * binom(p-1, m-1)."""
    return (-1) ** m * beta ** (2 * m) / math.factorial(2 * m + (1 if odd else 0)) * math.comb(p - 1, m - 1)


def _taylor_start(params, f, g, f_even_derivs, g_even_derivs, terms):
    """u(dt) = sum_m [(c dt)^{2m}/(2m)! d^{2m} f + (c dt)^{2m+1}/(2m+1)! d^{2m} g / c], m <= P.

    ``terms(v, odd)`` yields ``((p, m), array)`` pairs realising the operator
    series of (Laplacian / alpha^2)^m up to p = P; it is used for whichever of
    ``f``/``g`` lacks analytic derivatives.
    """
    P = params.P
    beta = params.beta
    dt = params.dt
    c = params.c
    f = np.asarray(f, dtype=float)
    g = np.zeros_like(f) if g is None else np.asarray(g, dtype=float)
    u1 = f + dt * g
    if f_even_derivs is not None:
        for m in range(1, P + 1):
            u1 = u1 + (c * dt) ** (2 * m) / math.factorial(2 * m) * f_even_derivs(m)
    elif np.any(f):
        for (p, m), arr in terms(f, False):
            u1 = u1 + taylor_weight(p, m, beta) * arr
    if g_even_derivs is not None:
        for m in range(1, P + 1):
            u1 = u1 + (c * dt) ** (2 * m + 1) / math.factorial(2 * m + 1) * g_even_derivs(m) / c
    elif np.any(g):
        for (p, m), arr in terms(g, True):
            u1 = u1 + dt * taylor_weight(p, m, beta, odd=True) * arr
    return u1


# functional entry points -------------------------------------------------------------


def step_1d(state: WaveState1D, solver: Wave1D) -> WaveState1D:
    return solver.step(state)


def initial_step(f, g, solver: Wave1D, f_even_derivs=None, g_even_derivs=None):
    return solver.initial_step(f, g, f_even_derivs, g_even_derivs)
