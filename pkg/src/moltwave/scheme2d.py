"""The 2D scheme of order 2P built from the split operators.

    u^{n+1} = 2u^n - u^{n-1} + sum_{p=1}^{P} sum_{m=1}^{p} c_pm C^m D^{p-m}[u^n],
    c_pm = (-1)^m 2 beta^{2m} / (2m)! binom(p-1, m-1).

With a source, ``u_tt / c^2 = Laplacian(u) + S``, the fourth-order update adds

    beta^2 / (12 alpha^2) (S^{n+1} + 10 S^n + S^{n-1})  +  k * C[S^n]

where ``k = -beta^4 / (12 alpha^2)`` ("consistent", default) or the
literature's ``k = +beta^2 / (12 alpha^4)`` ("printed"). Only the consistent
choice matches the Taylor expansion term (c dt)^4 / 12 * Laplacian(S); both are
kept so the order study can report either.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .adi import ADIOperators, StageTable
from .errors import ConfigurationError, FixedPointError, InstabilityError
from .geometry import Domain2D
from .highorder1d import SENTINEL, _taylor_start
from .params import SolverParams

SOURCE_VARIANTS = ("consistent", "printed")
FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAXIT = 50


@dataclass
class SourceSpec:
    """S(x, y, t[, u]) on the grid. ``evaluator(X, Y, t, u)`` returns an array;
    ``u`` is ignored unless ``depends_on_u``. ``evaluations`` counts calls."""

    evaluator: object
    depends_on_u: bool = False
    evaluations: int = field(default=0, init=False)

    def __call__(self, X, Y, t, u=None):
        self.evaluations += 1
        return np.asarray(self.evaluator(X, Y, t, u), dtype=float)


def smooth_turn_on(t, tau):
    """1 - exp(-t^2 / tau^2)."""
    return -math.expm1(-(t / tau) ** 2)


def tent(s, h):
    """Two-cell hat of unit mass: (1 - |s| / 2h) / 2h on |s| < 2h."""
    return np.maximum(0.0, 1.0 - np.abs(s) / (2.0 * h)) / (2.0 * h)


def point_source(x0, y0, hx, hy, omega, amplitude=1.0, tau=None, dt=None):
    """amplitude * sin(omega t) * turn-on(t) * delta(x - x0, y - y0), mollified by tents.

    ``tau`` defaults to ``2 * dt``.
    """
    if tau is None:
        if dt is None:
            raise ConfigurationError("point source needs tau or dt")
        tau = 2.0 * dt

    def evaluate(X, Y, t, u=None):
        env = amplitude * math.sin(omega * t) * smooth_turn_on(t, tau)
        return env * tent(X - x0, hx) * tent(Y - y0, hy)

    return SourceSpec(evaluate)


@dataclass(frozen=True)
class WaveState2D:
    u_prev: np.ndarray
    u_curr: np.ndarray
    n: int = 1
    t: float = 0.0
    reference: float = 0.0
    s_prev: np.ndarray | None = None
    s_curr: np.ndarray | None = None

    def __post_init__(self):
        if np.shape(self.u_prev) != np.shape(self.u_curr):
            raise ConfigurationError("u_prev and u_curr must share the grid")


class Wave2D:
    """Order-2P ADI solver on a periodic or embedded-Dirichlet domain (homogeneous data)."""

    def __init__(self, domain: Domain2D, params: SolverParams, quadrature: str = "linear",
                 symmetrize: bool = False, source_variant: str = "consistent"):
        if source_variant not in SOURCE_VARIANTS:
            raise ConfigurationError(f"source_variant must be one of {SOURCE_VARIANTS}")
        self.domain = domain
        self.params = params
        self.ops = ADIOperators(domain, params.alpha, quadrature, symmetrize)
        self.source_variant = source_variant
        self.X, self.Y = domain.grid.mesh()
        self.last_op_count = 0

    def _mask(self, v):
        return v if self.domain.is_periodic else np.where(self.domain.mask, v, 0.0)

    # -- homogeneous update ------------------------------------------------------

    def increment(self, u):
        """sum_p sum_m c_pm C^m D^{p-m}[u], built stage by stage."""
        coeffs = self.params.coefficients
        table = StageTable(self.ops, u)
        acc = np.zeros_like(u)
        for p, tab in table.stages(self.params.P):
            for m in range(1, p + 1):
                acc += coeffs.c_pm[(p, m)] * tab.term(m)
        self.last_op_count = table.op_count
        return acc

    def step(self, state: WaveState2D) -> WaveState2D:
        u = state.u_curr
        new = (2.0 * u - state.u_prev) + self.increment(u)
        return self._finish(state, self._mask(new))

    def _finish(self, state, new, s_prev=None, s_curr=None):
        peak = float(np.max(np.abs(new)))
        ref = state.reference if state.reference > 0 else peak
        if not np.isfinite(peak) or (ref > 0 and peak > SENTINEL * ref):
            raise InstabilityError(state.n + 1, peak, ref)
        return WaveState2D(state.u_curr, new, state.n + 1, state.t + self.params.dt, ref, s_prev, s_curr)

    # -- sourced update -------------------------------------------------------------

    def source_coefficients(self):
        """(weight of S^{n+1} + 10 S^n + S^{n-1}, weight of C[S^n])."""
        b, a = self.params.beta, self.params.alpha
        w3 = b**2 / (12.0 * a**2)
        if self.source_variant == "printed":
            wc = b**2 / (12.0 * a**4)
        else:
            wc = -(b**4) / (12.0 * a**2)
        return w3, wc

    def step_sourced(self, state: WaveState2D, source: SourceSpec) -> WaveState2D:
        """P = 1: adds (c dt)^2 S^n. P = 2: the fourth-order three-level source terms.

        A source that depends on u is iterated to a fixed point in S^{n+1}.
        """
        P = self.params.P
        if P not in (1, 2):
            raise ConfigurationError("sourced updates are implemented for P = 1 and P = 2 only")
        u = state.u_curr
        t1 = state.t + self.params.dt
        s_prev, s_curr = state.s_prev, state.s_curr
        if s_curr is None:
            s_curr = self._mask(source(self.X, self.Y, state.t, u))
        if s_prev is None:
            s_prev = self._mask(source(self.X, self.Y, state.t - self.params.dt, state.u_prev))
        base = (2.0 * u - state.u_prev) + self.increment(u)
        if P == 1:
            base = base + (self.params.c * self.params.dt) ** 2 * s_curr
            new = self._mask(base)
            s_next = None
            if not source.depends_on_u:
                s_next = self._mask(source(self.X, self.Y, t1, None))
            return self._finish(state, new, s_curr, s_next)
        w3, wc = self.source_coefficients()
        base = base + w3 * (10.0 * s_curr + s_prev) + wc * self.ops.C(s_curr)
        if not source.depends_on_u:
            s_next = self._mask(source(self.X, self.Y, t1, None))
            return self._finish(state, self._mask(base + w3 * s_next), s_curr, s_next)
        guess = 2.0 * u - state.u_prev
        history = []
        for _ in range(FIXED_POINT_MAXIT):
            s_next = self._mask(source(self.X, self.Y, t1, guess))
            new = self._mask(base + w3 * s_next)
            diff = float(np.max(np.abs(new - guess)))
            history.append(diff)
            guess = new
            if diff < FIXED_POINT_TOL:
                return self._finish(state, new, s_curr, s_next)
        raise FixedPointError(f"source iteration did not converge in {FIXED_POINT_MAXIT} iterations", history)

    # -- start-up ------------------------------------------------------------------------

    def initial_step(self, f, g=None, f_even_derivs=None, g_even_derivs=None):
        """u(dt) from the Taylor series with Laplacian powers from the stage table
        (or from analytic ``*_even_derivs(m)`` = Laplacian^m of the data)."""

        def terms(v, odd):
            table = StageTable(self.ops, v)
            for p, tab in table.stages(self.params.P):
                for m in range(1, p + 1):
                    yield (p, m), tab.term(m)

        u1 = _taylor_start(self.params, f, g, f_even_derivs, g_even_derivs, terms)
        return self._mask(u1)

    def start(self, f, g=None, f_even_derivs=None, g_even_derivs=None, u1=None, source=None) -> WaveState2D:
        f = self._mask(np.asarray(f, dtype=float))
        if u1 is None:
            u1 = self.initial_step(f, g, f_even_derivs, g_even_derivs)
        u1 = self._mask(np.asarray(u1, dtype=float))
        ref = max(float(np.max(np.abs(f))), float(np.max(np.abs(u1))))
        s_prev = s_curr = None
        if source is not None and not source.depends_on_u:
            s_prev = self._mask(source(self.X, self.Y, 0.0, f))
            s_curr = self._mask(source(self.X, self.Y, self.params.dt, u1))
        return WaveState2D(f, u1, 1, self.params.dt, ref, s_prev, s_curr)


# functional entry points -------------------------------------------------------------


def step_2d(state: WaveState2D, solver: Wave2D) -> WaveState2D:
    return solver.step(state)


def step_2d_sourced4(state: WaveState2D, source: SourceSpec, solver: Wave2D) -> WaveState2D:
    if solver.params.P != 2:
        raise ConfigurationError("the fourth-order sourced update needs P = 2")
    return solver.step_sourced(state, source)


def initial_step_2d(f, g, solver: Wave2D, f_even_derivs=None, g_even_derivs=None):
    return solver.initial_step(f, g, f_even_derivs, g_even_derivs)
