"""Embedded boundaries on a Cartesian grid.

Every grid line ``y = y_j`` (and ``x = x_i``) is cut by the level-set curve
``phi = 0`` into maximal runs of interior nodes (``phi < 0``). Each run becomes
one line object: its interior nodes plus two off-grid boundary points where the
grid line meets the curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .conv1d import LineBatch, LineGrid
from .errors import ConfigurationError, RefinementError

SNAP_FRACTION = 1e-3
BISECTION_TOL = 1e-12


@dataclass(frozen=True)
class Grid2D:
    """Tensor grid; arrays are indexed ``[i, j]`` with ``x[i]``, ``y[j]``."""

    x: np.ndarray
    y: np.ndarray
    periodic: bool = False

    @classmethod
    def uniform(cls, x0, x1, nx, y0, y1, ny, periodic=False):
        return cls(_axis(x0, x1, nx, periodic), _axis(y0, y1, ny, periodic), periodic)

    @property
    def shape(self):
        return (self.x.size, self.y.size)

    @property
    def hx(self):
        return float(self.x[1] - self.x[0])

    @property
    def hy(self):
        return float(self.y[1] - self.y[0])

    @property
    def bounds(self):
        if self.periodic:
            return (self.x[0], self.x[0] + self.hx * self.x.size, self.y[0], self.y[0] + self.hy * self.y.size)
        return (self.x[0], self.x[-1], self.y[0], self.y[-1])

    def mesh(self):
        return np.meshgrid(self.x, self.y, indexing="ij")


def _axis(a, b, n, periodic):
    if n < 2 or not b > a:
        raise ConfigurationError(f"bad axis [{a}, {b}] with {n} points")
    if periodic:
        return a + (b - a) * np.arange(n) / n
    # symmetric about the midpoint so mirror-symmetric curves give mirror-symmetric masks
    h = (b - a) / (n - 1)
    x = 0.5 * (a + b) + h * (np.arange(n) - 0.5 * (n - 1))
    x[0], x[-1] = a, b
    return x


# ------------------------------------------------------------------- curves


@dataclass(frozen=True)
class ImplicitCurve:
    """Interior is ``{phi < 0}``; ``phi`` must accept numpy arrays."""

    phi: object
    name: str = "custom"

    def __call__(self, x, y):
        return self.phi(x, y)

    @classmethod
    def rectangle(cls, x0, x1, y0, y1):
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        hx, hy = 0.5 * (x1 - x0), 0.5 * (y1 - y0)
        return cls(lambda x, y: np.maximum(np.abs(x - cx) - hx, np.abs(y - cy) - hy), "rectangle")

    @classmethod
    def circle(cls, r, cx=0.0, cy=0.0):
        return cls(lambda x, y: (x - cx) ** 2 + (y - cy) ** 2 - r * r, "circle")

    @classmethod
    def ellipse(cls):
        """((x + y)/4)^2 + (x - y)^2 = 1: principal axes along the diagonals."""
        return cls(lambda x, y: ((x + y) / 4.0) ** 2 + (x - y) ** 2 - 1.0, "ellipse")


# -------------------------------------------------------------------- lines


@dataclass(frozen=True)
class EmbeddedLine:
    """Interior nodes ``start..stop-1`` along ``axis`` at perpendicular index ``index``.

    ``a``/``b`` are the boundary points (coordinates along the axis). A periodic
    line has none.
    """

    axis: int
    index: int
    coord: float
    start: int
    stop: int
    a: float | None
    b: float | None
    left_value: float = 0.0
    right_value: float = 0.0

    @property
    def nodes(self):
        return np.arange(self.start, self.stop)

    @property
    def periodic(self):
        return self.a is None


def _bisect(phi_line, lo, hi, fixed):
    """Vectorised bisection of phi along a coordinate; phi(lo) < 0 <= phi(hi)."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(200):
        if np.all(np.abs(hi - lo) <= BISECTION_TOL):
            break
        mid = 0.5 * (lo + hi)
        inside = phi_line(mid, fixed) < 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    plo = np.abs(phi_line(lo, fixed))
    phi_hi = np.abs(phi_line(hi, fixed))
    return np.where(phi_hi <= plo, hi, lo)


def _segments(row_mask):
    """(start, stop) of runs of True."""
    d = np.diff(np.concatenate(([0], row_mask.astype(np.int8), [0])))
    return np.flatnonzero(d == 1), np.flatnonzero(d == -1)


def _crossings(curve, grid, mask, snapped, axis):
    """Boundary points of every segment along ``axis``.

    Returns a list of (index, start, stop, a, b) and the set of interior nodes
    whose nearest crossing lies within SNAP_FRACTION * h.
    """
    coords = grid.x if axis == 0 else grid.y
    other = grid.y if axis == 0 else grid.x
    h = coords[1] - coords[0]
    n = coords.size

    def phi_line(s, fixed):
        return curve(s, fixed) if axis == 0 else curve(fixed, s)

    segs = []
    for j in range(other.size):
        row = mask[:, j] if axis == 0 else mask[j, :]
        starts, stops = _segments(row)
        for s0, s1 in zip(starts, stops):
            if s0 == 0 or s1 == n:
                raise ConfigurationError(
                    f"curve {curve.name!r} is not contained in the grid (line {'xy'[axis]} index {j})"
                )
            segs.append((j, s0, s1))
    if not segs:
        return [], np.zeros_like(mask)
    idx = np.array([s[0] for s in segs])
    s0 = np.array([s[1] for s in segs])
    s1 = np.array([s[2] for s in segs])
    fixed = other[idx]

    def ends(inner, outer):
        pos = coords[outer].copy()
        snap_out = snapped[outer, idx] if axis == 0 else snapped[idx, outer]
        phi_out = phi_line(coords[outer], fixed)
        need = ~snap_out & (phi_out != 0)
        if np.any(need):
            pos[need] = _bisect(phi_line, coords[inner][need], coords[outer][need], fixed[need])
        return pos

    a = ends(s0, s0 - 1)
    b = ends(s1 - 1, s1)
    near = np.zeros_like(mask)
    close_a = (coords[s0] - a) < SNAP_FRACTION * abs(h)
    close_b = (b - coords[s1 - 1]) < SNAP_FRACTION * abs(h)
    for sel, node in ((close_a, s0), (close_b, s1 - 1)):
        if axis == 0:
            near[node[sel], idx[sel]] = True
        else:
            near[idx[sel], node[sel]] = True
    lines = list(zip(idx.tolist(), s0.tolist(), s1.tolist(), a.tolist(), b.tolist()))
    return lines, near


def build_embedded_lines(curve: ImplicitCurve, grid: Grid2D, min_nodes: int = 2):
    """x-lines, y-lines and the interior mask for ``curve`` on ``grid``.

    Nodes whose boundary crossing is closer than ``SNAP_FRACTION * h`` are
    moved to the exterior and the crossing is snapped onto them, in both
    directions, so every interior node sits on exactly one x-line and one
    y-line. Segments with fewer than ``min_nodes`` nodes raise RefinementError.
    """
    if grid.periodic:
        raise ConfigurationError("embedded curves need a non-periodic grid")
    X, Y = grid.mesh()
    mask = curve(X, Y) < 0
    if not np.any(mask):
        raise ConfigurationError(f"curve {curve.name!r} has no interior nodes on this grid")
    snapped = np.zeros_like(mask)
    for _ in range(3):
        _, near_x = _crossings(curve, grid, mask, snapped, 0)
        _, near_y = _crossings(curve, grid, mask, snapped, 1)
        near = near_x | near_y
        if not np.any(near):
            break
        snapped |= near
        mask &= ~near
    raw_x, _ = _crossings(curve, grid, mask, snapped, 0)
    raw_y, _ = _crossings(curve, grid, mask, snapped, 1)
    x_lines = [EmbeddedLine(0, j, grid.y[j], s0, s1, a, b) for j, s0, s1, a, b in raw_x]
    y_lines = [EmbeddedLine(1, i, grid.x[i], s0, s1, a, b) for i, s0, s1, a, b in raw_y]
    for line in x_lines + y_lines:
        if line.stop - line.start < min_nodes:
            where = (grid.x[line.start], line.coord) if line.axis == 0 else (line.coord, grid.y[line.start])
            raise RefinementError(
                f"segment with {line.stop - line.start} interior node(s) near (x, y) = "
                f"({where[0]:.6g}, {where[1]:.6g}); refine the grid"
            )
    return x_lines, y_lines, mask


def periodic_lines(grid: Grid2D):
    nx, ny = grid.shape
    x_lines = [EmbeddedLine(0, j, grid.y[j], 0, nx, None, None) for j in range(ny)]
    y_lines = [EmbeddedLine(1, i, grid.x[i], 0, ny, None, None) for i in range(nx)]
    return x_lines, y_lines, np.ones(grid.shape, dtype=bool)


# ----------------------------------------------------------------- packing


@dataclass
class AxisLines:
    """Packed form of all lines along one axis, with gather/scatter maps to the field."""

    lines: list
    batch: LineBatch
    node_pos: np.ndarray  # packed positions of interior nodes
    node_idx: np.ndarray  # matching flat field indices
    left_pos: np.ndarray  # packed position of each line's left boundary point (-1 if periodic)
    right_pos: np.ndarray

    @classmethod
    def build(cls, lines, grid: Grid2D):
        coords = grid.x if lines and lines[0].axis == 0 else grid.y
        h = coords[1] - coords[0]
        ny = grid.shape[1]
        geoms, pos, idx, lpos, rpos = [], [], [], [], []
        offset = 0
        for line in lines:
            nodes = line.nodes
            pts = coords[line.start : line.stop]
            if line.axis == 0:
                flat = nodes * ny + line.index
            else:
                flat = line.index * ny + nodes
            if line.periodic:
                geoms.append(LineGrid(pts, "periodic", period=h * coords.size, spacing=h))
                pos.append(offset + np.arange(nodes.size))
                lpos.append(-1)
                rpos.append(-1)
                offset += nodes.size + 1
            else:
                geoms.append(LineGrid(np.concatenate(([line.a], pts, [line.b])), "dirichlet", spacing=h))
                pos.append(offset + 1 + np.arange(nodes.size))
                lpos.append(offset)
                rpos.append(offset + nodes.size + 1)
                offset += nodes.size + 2
            idx.append(flat)
        batch = LineBatch.from_lines(geoms)
        return cls(
            lines,
            batch,
            np.concatenate(pos).astype(np.int64),
            np.concatenate(idx).astype(np.int64),
            np.asarray(lpos, dtype=np.int64),
            np.asarray(rpos, dtype=np.int64),
        )


@dataclass
class Domain2D:
    """Grid, interior mask and the x/y line collections used by every sweep."""

    grid: Grid2D
    x_lines: list
    y_lines: list
    mask: np.ndarray
    curve: ImplicitCurve | None = None
    packed: tuple = field(init=False, repr=False)

    def __post_init__(self):
        self.packed = (AxisLines.build(self.x_lines, self.grid), AxisLines.build(self.y_lines, self.grid))

    @classmethod
    def periodic(cls, grid: Grid2D):
        if not grid.periodic:
            raise ConfigurationError("periodic domain needs a periodic grid")
        return cls(grid, *periodic_lines(grid))

    @classmethod
    def from_curve(cls, curve: ImplicitCurve, grid: Grid2D, min_nodes: int = 2):
        return cls(grid, *build_embedded_lines(curve, grid, min_nodes), curve=curve)

    @classmethod
    def rectangle(cls, grid: Grid2D):
        """Dirichlet box whose edges are the outermost grid lines."""
        x0, x1, y0, y1 = grid.bounds
        return cls.from_curve(ImplicitCurve.rectangle(x0, x1, y0, y1), grid)

    @property
    def is_periodic(self):
        return self.grid.periodic

    @property
    def cell_area(self):
        return self.grid.hx * self.grid.hy
