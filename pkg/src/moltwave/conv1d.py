"""O(N) evaluation of the modified-Helmholtz inverse on lines of points.

For ``L = 1 - alpha^{-2} d^2/dx^2`` the free-space inverse is convolution with
``(alpha/2) exp(-alpha |x - y|)``. Splitting the integral into a left-moving and
a right-moving part gives two exponential recurrences

    I^L_j = exp(-nu_{j-1}) I^L_{j-1} + J^L_j,    I^R_j = exp(-nu_j) I^R_{j+1} + J^R_j,

with ``nu_j = alpha (x_{j+1} - x_j)``; each local integral ``J`` interpolates ``u``
on one interval and integrates the interpolant exactly against the exponential.
A bounded line then adds ``A exp(-alpha (x - a)) + B exp(-alpha (b - x))`` to
satisfy Dirichlet or periodic conditions.

Two interpolation rules are available:

* ``"linear"``: two-point rule, second order in space.
* ``"cubic"``: centred four-point rule (one-sided next to embedded boundary
  points), fourth order in space.

Points on a Dirichlet line include the two boundary points at either end; the
operand's values there are the operand's boundary values, and ``BoundarySpec``
carries the values imposed on the *result*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConfigurationError, NumericalError

QUADRATURES = {"linear": 2, "cubic": 4}
TAYLOR_NU = 1e-3


# --------------------------------------------------------------------------- types


@dataclass(frozen=True)
class LineGrid:
    """Ordered points of one line.

    ``kind="dirichlet"``: ``points[0]`` and ``points[-1]`` are the boundary
    points ``a`` and ``b`` (possibly off the regular grid); the rest are nodes.
    ``kind="periodic"``: uniformly spaced nodes on ``[points[0], points[0] + period)``.
    """

    points: np.ndarray
    kind: str = "dirichlet"
    period: float | None = None
    spacing: float | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if self.kind not in ("dirichlet", "periodic"):
            raise ConfigurationError(f"unknown line kind {self.kind!r}")
        if pts.ndim != 1 or pts.size < 2:
            raise ConfigurationError("a line needs at least 2 points")
        if not np.all(np.diff(pts) > 0):
            raise ConfigurationError("line points must be strictly increasing")
        if self.kind == "periodic":
            h = pts[1] - pts[0]
            if self.period is None:
                object.__setattr__(self, "period", h * pts.size)
            if not np.allclose(np.diff(pts), h, rtol=1e-9, atol=0):
                raise ConfigurationError("periodic lines must be uniformly spaced")
            if not math.isclose(self.period, h * pts.size, rel_tol=1e-9):
                raise ConfigurationError("period must equal N * spacing")
        if self.spacing is None:
            object.__setattr__(self, "spacing", float(np.median(np.diff(pts))))

    @classmethod
    def uniform(cls, a, b, n, kind="dirichlet"):
        """``n`` points on [a, b] (Dirichlet, end points included) or [a, b) (periodic)."""
        if kind == "periodic":
            pts = a + (b - a) * np.arange(n) / n
            return cls(pts, "periodic", period=b - a)
        return cls(np.linspace(a, b, n), "dirichlet")

    @classmethod
    def embedded(cls, nodes, a, b, spacing=None):
        """Interior ``nodes`` bracketed by off-grid boundary points ``a`` and ``b``."""
        nodes = np.asarray(nodes, dtype=float)
        return cls(np.concatenate(([a], nodes, [b])), "dirichlet", spacing=spacing)

    @property
    def n(self):
        return self.points.size

    @property
    def left_boundary(self):
        return None if self.kind == "periodic" else self.points[0]

    @property
    def right_boundary(self):
        return None if self.kind == "periodic" else self.points[-1]


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary condition for one line: periodic, or Dirichlet values imposed on the result."""

    kind: str = "dirichlet"
    left: float = 0.0
    right: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "periodic"):
            raise ConfigurationError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "periodic" and (self.left != 0.0 or self.right != 0.0):
            raise ConfigurationError("periodic lines carry no boundary values")

    @classmethod
    def periodic(cls):
        return cls("periodic")


# --------------------------------------------------------------------- packing


@dataclass
class LineBatch:
    """Many lines packed end to end for one kernel call.

    ``offsets[k]:offsets[k+1]`` are the packed points of line ``k``. Periodic
    lines get one extra packed point, the wrapped copy of their first node at
    ``x_0 + period``; stencils never read it.
    """

    coords: np.ndarray
    offsets: np.ndarray
    periodic: np.ndarray
    node_count: np.ndarray
    spacing: np.ndarray

    @classmethod
    def from_lines(cls, lines):
        coords, offsets, periodic, counts, spacing = [], [0], [], [], []
        for line in lines:
            pts = line.points
            if line.kind == "periodic":
                pts = np.append(pts, pts[0] + line.period)
            coords.append(pts)
            offsets.append(offsets[-1] + pts.size)
            periodic.append(line.kind == "periodic")
            counts.append(line.n)
            spacing.append(line.spacing)
        return cls(
            np.concatenate(coords) if coords else np.zeros(0),
            np.asarray(offsets, dtype=np.int64),
            np.asarray(periodic, dtype=np.bool_),
            np.asarray(counts, dtype=np.int64),
            np.asarray(spacing, dtype=float),
        )

    @property
    def nlines(self):
        return self.offsets.size - 1

    @property
    def size(self):
        return int(self.offsets[-1])


def _stencils(batch: LineBatch, width: int):
    """Per-interval stencil indices (packed) and their widths."""
    total = batch.size
    sten = np.zeros((total, width), dtype=np.int64)
    widths = np.zeros(total, dtype=np.int64)
    for k in range(batch.nlines):
        s, e = batch.offsets[k], batch.offsets[k + 1]
        n = e - s
        i = np.arange(n - 1)
        if batch.periodic[k]:
            nn = n - 1  # distinct nodes
            w = min(width, nn)
            start = i - (w // 2 - 1)
            idx = (start[:, None] + np.arange(w)[None, :]) % nn
            sten[s : e - 1, :w] = s + idx
            sten[s : e - 1, w:] = s + idx[:, :1]
            widths[s : e - 1] = w
            continue
        x = batch.coords[s:e]
        # boundary points much closer than a grid spacing to their neighbour
        # would give huge Lagrange weights; keep them out of the stencils of
        # intervals that do not touch them
        use_a = n <= 2 or (x[1] - x[0]) >= 0.5 * batch.spacing[k]
        use_b = n <= 2 or (x[-1] - x[-2]) >= 0.5 * batch.spacing[k]
        lo = np.where((i == 0) | use_a, 0, 1)
        hi = np.where((i == n - 2) | use_b, n - 1, n - 2)
        w = np.minimum(width, hi - lo + 1)
        start = np.clip(i - (w // 2 - 1), lo, hi - w + 1)
        cols = np.arange(width)[None, :]
        idx = start[:, None] + np.minimum(cols, w[:, None] - 1)
        sten[s : e - 1] = s + idx
        widths[s : e - 1] = w
    return sten, widths


def _moments(nu, kmax):
    """M_k(nu) = int_0^1 nu e^{-nu t} t^k dt for k = 0..kmax, arrays over ``nu``."""
    nu = np.asarray(nu, dtype=float)
    out = np.empty(nu.shape + (kmax + 1,))
    small = nu < 2.0
    if np.any(small):
        v = nu[small]
        terms = np.ones_like(v)
        acc = np.zeros((v.size, kmax + 1))
        for n in range(60):
            for k in range(kmax + 1):
                acc[:, k] += terms / (n + k + 1)
            terms = terms * (-v) / (n + 1)
        out[small] = v[:, None] * acc
    big = ~small
    if np.any(big):
        v = nu[big]
        ev = np.exp(-v)
        m = -np.expm1(-v)
        out[big, 0] = m
        for k in range(1, kmax + 1):
            m = (k / v) * m - ev
            out[big, k] = m
    return out


def _lagrange_moment_weights(nodes, nu):
    """int_0^1 nu e^{-nu t} l_q(t) dt for the Lagrange basis on ``nodes`` (local units)."""
    w = nodes.size
    mom = _moments(np.array([nu]), w - 1)[0]
    out = np.empty(w)
    for q in range(w):
        others = np.delete(nodes, q)
        coef = np.polynomial.polynomial.polyfromroots(others) / np.prod(nodes[q] - others)
        out[q] = coef @ mom
    return out


def _linear_weights(nu):
    """Closed-form two-point weights (peak, far) with a Taylor branch for small nu."""
    nu = np.asarray(nu, dtype=float)
    d = np.exp(-nu)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = -np.expm1(-nu) / nu
        peak = 1.0 - r
        far = r - d
    small = nu < TAYLOR_NU
    if np.any(small):
        v = nu[small]
        peak[small] = v / 2 - v**2 / 6 + v**3 / 24 - v**4 / 120
        far[small] = v / 2 - v**2 / 3 + v**3 / 8 - v**4 / 30
    return peak, far


@dataclass
class ConvWorkspace:
    """Everything that depends only on (alpha, lines, quadrature); reused across steps."""

    batch: LineBatch
    alpha: float
    quadrature: str = "linear"
    decay: np.ndarray = field(init=False, repr=False)
    sten: np.ndarray = field(init=False, repr=False)
    wl: np.ndarray = field(init=False, repr=False)
    wr: np.ndarray = field(init=False, repr=False)
    el: np.ndarray = field(init=False, repr=False)
    er: np.ndarray = field(init=False, repr=False)
    mu: np.ndarray = field(init=False, repr=False)
    inv_det: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {self.alpha!r}")
        if self.quadrature not in QUADRATURES:
            raise ConfigurationError(f"quadrature must be one of {sorted(QUADRATURES)}")
        b = self.batch
        x = b.coords
        total = b.size
        h = np.zeros(total)
        h[:-1] = np.diff(x)
        last = b.offsets[1:] - 1
        h[last] = 0.0
        nu = self.alpha * h
        self.decay = np.exp(-nu)
        self.decay[last] = 0.0
        width = QUADRATURES[self.quadrature]
        self.sten, widths = _stencils(b, width)
        self.wl = np.zeros((total, width))
        self.wr = np.zeros((total, width))
        intervals = np.ones(total, dtype=bool)
        intervals[last] = False
        if width == 2:
            peak, far = _linear_weights(nu[intervals])
            self.wl[intervals, 0] = far
            self.wl[intervals, 1] = peak
            self.wr[intervals, 0] = peak
            self.wr[intervals, 1] = far
        else:
            self._polynomial_weights(x, h, nu, widths, intervals)
        self._corrections()

    def _polynomial_weights(self, x, h, nu, widths, intervals):
        b = self.batch
        idx = np.flatnonzero(intervals)
        left = x[idx]
        # local coordinates of stencil points: interval is [0, 1]
        sx = b.coords[self.sten[idx]].copy()
        # periodic stencils wrap around: shift to the unwrapped positions
        line_of = np.searchsorted(b.offsets, idx, side="right") - 1
        per = b.periodic[line_of]
        if np.any(per):
            pidx = np.flatnonzero(per)
            k = line_of[pidx]
            period = (b.coords[b.offsets[k + 1] - 1] - b.coords[b.offsets[k]])[:, None]
            rel = sx[pidx] - left[pidx, None]
            rel = np.where(rel < -0.5 * period, rel + period, rel)
            rel = np.where(rel > 0.5 * period, rel - period, rel)
            sx[pidx] = rel + left[pidx, None]
        loc = (sx - left[:, None]) / h[idx, None]
        w = widths[idx]
        cols = np.arange(loc.shape[1])[None, :]
        loc = np.where(cols < w[:, None], loc, 0.0)
        key = np.column_stack([nu[idx], w, loc])
        key_r = np.round(key, 11)
        uniq, inverse = np.unique(key_r, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        first = np.zeros(uniq.shape[0], dtype=np.int64)
        first[inverse[::-1]] = np.arange(inverse.size)[::-1]
        wl_u = np.zeros((uniq.shape[0], loc.shape[1]))
        wr_u = np.zeros_like(wl_u)
        for r, j in enumerate(first):
            ww = int(w[j])
            nodes = loc[j, :ww]
            v = nu[idx[j]]
            wr_u[r, :ww] = _lagrange_moment_weights(nodes, v)
            wl_u[r, :ww] = _lagrange_moment_weights(1.0 - nodes, v)
        self.wl[idx] = wl_u[inverse]
        self.wr[idx] = wr_u[inverse]

    def _corrections(self):
        b = self.batch
        total = b.size
        self.el = np.empty(total)
        self.er = np.empty(total)
        self.mu = np.empty(b.nlines)
        self.inv_det = np.empty(b.nlines)
        for k in range(b.nlines):
            s, e = b.offsets[k], b.offsets[k + 1]
            d = self.decay[s : e - 1]
            self.el[s] = 1.0
            self.el[s + 1 : e] = np.cumprod(d)
            self.er[e - 1] = 1.0
            self.er[s : e - 1] = np.cumprod(d[::-1])[::-1]
            mu = self.el[e - 1]
            self.mu[k] = mu
            gap = -math.expm1(math.log(mu)) if mu > 0 else 1.0
            if b.periodic[k]:
                if gap < 1e-14:
                    raise NumericalError("1 - exp(-alpha L) underflows: line too short or alpha too small")
                self.inv_det[k] = 1.0 / gap
            else:
                det = gap * (1.0 + mu)
                if gap < 1e-14:
                    raise NumericalError("1 - exp(-alpha (b - a)) underflows: line too short or alpha too small")
                self.inv_det[k] = 1.0 / det

    # -- kernel entry points on packed arrays --------------------------------

    def sweep(self, vals):
        il = np.empty_like(vals)
        ir = np.empty_like(vals)
        _kernels.sweep_lines(vals, self.batch.offsets, self.decay, self.sten, self.wl, self.wr, il, ir)
        return il, ir

    def linv(self, vals, left=None, right=None):
        """Boundary-corrected inverse on packed values; ``left``/``right`` per line."""
        nl = self.batch.nlines
        left = np.zeros(nl) if left is None else np.broadcast_to(np.asarray(left, float), (nl,))
        right = np.zeros(nl) if right is None else np.broadcast_to(np.asarray(right, float), (nl,))
        il, ir = self.sweep(vals)
        out = np.empty_like(vals)
        _kernels.correct_lines(il, ir, self.batch.offsets, self.el, self.er, self.inv_det, self.mu,
                               self.batch.periodic, np.ascontiguousarray(left),
                               np.ascontiguousarray(right), out)
        return out


# ------------------------------------------------------------- single-line API


def make_workspace(line: LineGrid, alpha: float, quadrature: str = "linear") -> ConvWorkspace:
    return ConvWorkspace(LineBatch.from_lines([line]), alpha, quadrature)


def _pack(line, u):
    u = np.asarray(u, dtype=float)
    if u.shape != (line.n,):
        raise ConfigurationError(f"operand has shape {u.shape}, line has {line.n} points")
    if line.kind == "periodic":
        return np.append(u, u[0])
    return np.ascontiguousarray(u)


def _check_ws(line, alpha, ws, quadrature):
    if ws is None:
        return make_workspace(line, alpha, quadrature)
    if ws.batch.nlines != 1 or not math.isclose(ws.alpha, alpha, rel_tol=1e-14):
        raise NumericalError("workspace does not match (alpha, line)")
    expected = line.n + (1 if line.kind == "periodic" else 0)
    if ws.batch.size != expected:
        raise NumericalError("workspace does not match (alpha, line)")
    return ws


def fast_convolve(line: LineGrid, u, alpha: float, ws: ConvWorkspace | None = None,
                  quadrature: str = "linear"):
    """Particular solution I[u] = (alpha/2) int_a^b exp(-alpha |x - y|) u(y) dy at the points.

    On a periodic line the integral runs over one period starting at the first node.
    """
    ws = _check_ws(line, alpha, ws, quadrature)
    il, ir = ws.sweep(_pack(line, u))
    return (il + ir)[: line.n]


def apply_Linv(line: LineGrid, u, alpha: float, bc: BoundarySpec,
               ws: ConvWorkspace | None = None, quadrature: str = "linear"):
    """L^{-1}[u] with boundary correction; Dirichlet values of ``bc`` are met to round-off."""
    if (bc.kind == "periodic") != (line.kind == "periodic"):
        raise ConfigurationError(f"boundary kind {bc.kind!r} does not match line kind {line.kind!r}")
    ws = _check_ws(line, alpha, ws, quadrature)
    out = ws.linv(_pack(line, u), bc.left, bc.right)
    return out[: line.n]


def apply_D(line: LineGrid, u, alpha: float, bc: BoundarySpec,
            ws: ConvWorkspace | None = None, quadrature: str = "linear"):
    """D[u] = u - L^{-1}[u]."""
    return np.asarray(u, dtype=float) - apply_Linv(line, u, alpha, bc, ws, quadrature)


def dense_convolve(line: LineGrid, u, alpha: float, ws: ConvWorkspace):
    """O(N^2) reference for :func:`fast_convolve`: sums every interval's local
    integral times ``exp(-alpha * distance)`` directly, using the same weights."""
    vals = _pack(line, u)
    x = ws.batch.coords
    n = x.size
    jl = np.zeros(n)  # local integral of interval i feeding the left sweep at i+1
    jr = np.zeros(n)  # ... feeding the right sweep at i
    for i in range(n - 1):
        jl[i] = 0.5 * np.dot(ws.wl[i], vals[ws.sten[i]])
        jr[i] = 0.5 * np.dot(ws.wr[i], vals[ws.sten[i]])
    out = np.zeros(n)
    for j in range(n):
        acc = 0.0
        for i in range(j):
            acc += math.exp(-alpha * (x[j] - x[i + 1])) * jl[i]
        for i in range(j, n - 1):
            acc += math.exp(-alpha * (x[i] - x[j])) * jr[i]
        out[j] = acc
    return out[: line.n]


_kernels.warmup()
