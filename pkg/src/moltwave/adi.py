"""Dimensionally split convolution operators on 2D fields.

With univariate inverses ``Lx^{-1}``, ``Ly^{-1}`` (every line along one axis
swept independently) and ``Dg = 1 - Lg^{-1}``:

    C     = Ly^{-1} Dx + Lx^{-1} Dy
    D_adi = 1 - Lx^{-1} Ly^{-1}

and ``(Laplacian / alpha^2)^m = (-1)^m C^m sum_{p>=m} binom(p-1, m-1) D_adi^{p-m}``.

Fields are ``(nx, ny)`` arrays; exterior nodes of an embedded domain are
neither read nor written (they stay zero). Intermediate operands on bounded
domains take homogeneous boundary values.
"""

from __future__ import annotations

import numpy as np

from .conv1d import ConvWorkspace, LineBatch, LineGrid
from .errors import ConfigurationError
from .geometry import Domain2D


class ADIOperators:
    """Per-axis inverses and the split operators for one (domain, alpha).

    ``symmetrize=True`` replaces ``Lx^{-1} Ly^{-1}`` in ``D_adi`` by the mean of
    both orderings. ``C`` needs no such option: by linearity it already equals
    ``Lx^{-1} + Ly^{-1} - Ly^{-1}Lx^{-1} - Lx^{-1}Ly^{-1}`` and is evaluated in
    that form with four sweeps.
    """

    def __init__(self, domain: Domain2D, alpha: float, quadrature: str = "linear", symmetrize: bool = False):
        self.domain = domain
        self.alpha = alpha
        self.quadrature = quadrature
        self.symmetrize = bool(symmetrize)
        self.ws = tuple(ConvWorkspace(ax.batch, alpha, quadrature) for ax in domain.packed)
        self.shape = domain.grid.shape
        self.sweeps = 0
        # largest |value| any sweep left at an embedded boundary point (targets are zero)
        self.boundary_residual = 0.0

    # -- univariate ----------------------------------------------------------

    def linv(self, v, axis):
        """Lg^{-1} along ``axis`` (0 = x, 1 = y) on every line; other axis untouched."""
        if axis not in (0, 1):
            raise ConfigurationError(f"axis must be 0 or 1, got {axis!r}")
        ax = self.domain.packed[axis]
        packed = np.zeros(ax.batch.size)
        flat = np.asarray(v, dtype=float).reshape(-1)
        packed[ax.node_pos] = flat[ax.node_idx]
        w = self.ws[axis].linv(packed)
        if not ax.batch.periodic.all():
            ends = np.concatenate((ax.left_pos, ax.right_pos))
            ends = ends[ends >= 0]
            if ends.size:
                self.boundary_residual = max(self.boundary_residual, float(np.max(np.abs(w[ends]))))
        out = np.zeros(flat.size)
        out[ax.node_idx] = w[ax.node_pos]
        self.sweeps += 1
        return out.reshape(self.shape)

    def d(self, v, axis):
        return self._restrict(v) - self.linv(v, axis)

    def _restrict(self, v):
        v = np.asarray(v, dtype=float)
        return v if self.domain.is_periodic else np.where(self.domain.mask, v, 0.0)

    # -- split operators ---------------------------------------------------------

    def C_and_D(self, v):
        """(C[v], D_adi[v]) from one set of four sweeps."""
        v = self._restrict(v)
        a = self.linv(v, 0)
        b = self.linv(v, 1)
        ya = self.linv(a, 1)  # Ly^{-1} Lx^{-1} v
        xb = self.linv(b, 0)  # Lx^{-1} Ly^{-1} v
        c = (a - ya) + (b - xb)
        if self.symmetrize:
            d = v - 0.5 * (xb + ya)
        else:
            d = v - xb
        return c, d

    def C(self, v):
        return self.C_and_D(v)[0]

    def D_adi(self, v):
        v = self._restrict(v)
        if self.symmetrize:
            return self.C_and_D(v)[1]
        return v - self.linv(self.linv(v, 1), 0)


class StageTable:
    """The P auxiliary fields of the stage-reuse recursion.

    Stage 1: ``v_1 = C[u]``. Stage p: ``v_p = D[v_{p-1}]`` and ``v_j = C[v_j]``
    for ``j = p-1, ..., 1``. Afterwards ``v_j = C^{p+1-j} D^{j-1} u``, i.e. the
    term ``C^m D^{p-m} u`` sits in ``v[p - m]`` (0-based). ``op_count`` counts
    applications of C or D_adi.
    """

    def __init__(self, ops: ADIOperators, u):
        self.ops = ops
        self.u = u
        self.v = []
        self.stage = 0
        self.op_count = 0

    def advance(self):
        p = self.stage + 1
        if p == 1:
            self.v = [self.ops.C(self.u)]
            self.op_count += 1
        else:
            c_last, d_last = self.ops.C_and_D(self.v[-1])
            self.op_count += 2
            new = [None] * (p - 1)
            new[-1] = c_last
            for j in range(p - 3, -1, -1):
                new[j] = self.ops.C(self.v[j])
                self.op_count += 1
            self.v = new + [d_last]
        self.stage = p
        return self

    def term(self, m):
        """C^m D^{stage-m} u."""
        if not 1 <= m <= self.stage:
            raise IndexError(f"m={m} outside 1..{self.stage}")
        return self.v[self.stage - m]

    def stages(self, P):
        """Advance to stage P, yielding ``(p, table)`` after each stage."""
        while self.stage < P:
            self.advance()
            yield self.stage, self


def build_stage_table(u, P: int, ops: ADIOperators) -> StageTable:
    if P < 1:
        raise ConfigurationError(f"P must be >= 1, got {P}")
    table = StageTable(ops, u)
    for _ in table.stages(P):
        pass
    return table


class PeriodicOperators3D:
    """C_xyz and D_xyz on a periodic box; no time stepping is built on them.

        C_xyz = Ly^{-1}Lz^{-1}Dx + Lz^{-1}Lx^{-1}Dy + Lx^{-1}Ly^{-1}Dz
        D_xyz = 1 - Lx^{-1}Ly^{-1}Lz^{-1}
    """

    def __init__(self, shape, lengths, alpha: float, quadrature: str = "linear"):
        if len(shape) != 3 or len(lengths) != 3:
            raise ConfigurationError("3D operators need three axis sizes and lengths")
        self.shape = tuple(int(n) for n in shape)
        self.alpha = alpha
        self.ws = []
        for axis, (n, length) in enumerate(zip(self.shape, lengths)):
            line = LineGrid.uniform(0.0, float(length), n, "periodic")
            lines = self.shape[:axis] + self.shape[axis + 1:]
            batch = LineBatch.from_lines([line] * (lines[0] * lines[1]))
            self.ws.append(ConvWorkspace(batch, alpha, quadrature))

    def linv(self, v, axis):
        v = np.moveaxis(np.asarray(v, dtype=float), axis, -1)
        rows = v.reshape(-1, v.shape[-1])
        packed = np.concatenate((rows, rows[:, :1]), axis=1).ravel()
        w = self.ws[axis].linv(packed).reshape(rows.shape[0], -1)[:, :-1]
        return np.moveaxis(w.reshape(v.shape), -1, axis)

    def C(self, v):
        a, b, c = (self.linv(v, k) for k in range(3))
        dx, dy, dz = v - a, v - b, v - c
        return (self.linv(self.linv(dx, 1), 2) + self.linv(self.linv(dy, 2), 0)
                + self.linv(self.linv(dz, 0), 1))

    def D(self, v):
        return v - self.linv(self.linv(self.linv(v, 2), 1), 0)


# functional entry points -------------------------------------------------------------


def apply_Lgamma_inv(field, axis, ops: ADIOperators):
    """Lg^{-1} along ``axis`` ("x"/"y" or 0/1)."""
    return ops.linv(field, {"x": 0, "y": 1}.get(axis, axis))


def apply_C(field, ops: ADIOperators):
    return ops.C(field)


def apply_D_adi(field, ops: ADIOperators):
    return ops.D_adi(field)
