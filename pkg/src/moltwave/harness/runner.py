"""Build a solver from a RunConfig, drive it, and write snapshots and a summary."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..conv1d import LineGrid
from ..errors import ConfigurationError
from ..geometry import Domain2D, Grid2D, ImplicitCurve
from ..highorder1d import ConstantBoundary, DirichletData, SineBoundary, Wave1D, ZeroBoundary
from ..metrics import energy_functional, l2_error
from ..params import SolverParams
from ..presets import make_preset
from ..scheme2d import SourceSpec, Wave2D, point_source
from .config import RunConfig

FLOAT_FMT = "%.16e"  # 17 significant digits


@dataclass
class Problem:
    """A configured solver together with its initial state and reference data."""

    config: RunConfig
    params: SolverParams
    solver: object
    state: object
    exact: object = None  # t -> array on the grid, or None
    source: SourceSpec | None = None
    domain: Domain2D | None = None
    line: LineGrid | None = None
    mask: np.ndarray | None = None
    cell_volume: float = 1.0

    @property
    def dim(self):
        return self.config.dimension

    def error(self, state):
        if self.exact is None:
            return math.nan
        return l2_error(state.u_curr, self.exact(state.t), self.cell_volume, self.mask)

    def energy(self, state):
        if self.dim == 2:
            return energy_functional(state, self.params.dt, self.params.c, domain=self.domain)
        return energy_functional(state, self.params.dt, self.params.c, x=self.line.points,
                                 periodic=self.line.kind == "periodic", period=self.line.period)

    def step(self, state):
        if self.source is not None:
            return self.solver.step_sourced(state, self.source)
        return self.solver.step(state)


@dataclass
class RunResult:
    summary: dict
    state: object
    errors: list = field(default_factory=list)
    energies: list = field(default_factory=list)
    max_abs: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)


def _boundary_function(spec: dict):
    kind = spec.get("kind", "zero")
    if kind == "zero":
        return ZeroBoundary()
    if kind == "constant":
        return ConstantBoundary(float(spec.get("value", 0.0)))
    return SineBoundary(float(spec.get("amplitude", 1.0)), float(spec["omega"]), float(spec.get("phase", 0.0)))


def _params(config: RunConfig) -> SolverParams:
    return SolverParams(config.c, config.time_step, config.order_P, config.beta)


def build_problem(config: RunConfig) -> Problem:
    params = _params(config)
    if config.dimension == 1:
        return _build_1d(config, params)
    return _build_2d(config, params)


def _initial_data(config, preset, *coords, shape):
    if preset is None:
        return np.zeros(shape), None, None
    f = preset.f(*coords)
    g = preset.g(*coords)
    if not hasattr(preset, "f_even"):
        return f, g, None
    return f, g, (lambda m: preset.f_even(m, *coords), lambda m: preset.g_even(m, *coords))


def _start(config, solver, preset, exact, f, g, derivs, **kw):
    if config.start == "exact":
        if exact is None:
            raise ConfigurationError(f"start = 'exact' needs an exact solution; {config.ic!r} has none")
        return solver.start(f, g, u1=exact(solver.params.dt), **kw)
    if derivs is None:
        return solver.start(f, g, **kw)
    return solver.start(f, g, derivs[0], derivs[1], **kw)


def _build_1d(config, params):
    x0, x1 = config.bounds[0], config.bounds[1]
    line = LineGrid.uniform(x0, x1, config.nx, config.bc)
    boundary = None
    if config.bc == "dirichlet":
        boundary = DirichletData(_boundary_function(config.boundary_left), _boundary_function(config.boundary_right))
    solver = Wave1D(line, params, boundary, config.quadrature)
    x = line.points
    preset = None if config.ic == "zero" else make_preset(1, config.ic, **config.ic_params)
    exact = None
    if preset is not None and getattr(preset, "exact", None) is not None:
        exact = lambda t: preset.exact(t, x)  # noqa: E731
    f, g, derivs = _initial_data(config, preset, x, shape=x.shape)
    state = _start(config, solver, preset, exact, f, g, derivs)
    mask = None
    if config.bc == "dirichlet":
        mask = np.ones(x.size, dtype=bool)
        mask[[0, -1]] = False
    return Problem(config, params, solver, state, exact, None, None, line, mask, line.spacing)


def _domain(config) -> Domain2D:
    x0, x1, y0, y1 = config.bounds
    periodic = config.geometry == "periodic"
    grid = Grid2D.uniform(x0, x1, config.nx, y0, y1, config.ny, periodic=periodic)
    gp = config.geometry_params
    if config.geometry == "periodic":
        return Domain2D.periodic(grid)
    if config.geometry == "box":
        return Domain2D.rectangle(grid)
    if config.geometry == "ellipse":
        curve = ImplicitCurve.ellipse()
    else:
        curve = ImplicitCurve.circle(float(gp.get("radius", 1.0)), float(gp.get("cx", 0.0)), float(gp.get("cy", 0.0)))
    return Domain2D.from_curve(curve, grid, int(gp.get("min_nodes", 2)))


def _build_2d(config, params):
    domain = _domain(config)
    solver = Wave2D(domain, params, config.quadrature, config.symmetrize, config.source_variant)
    X, Y = solver.X, solver.Y
    preset = None if config.ic == "zero" else make_preset(2, config.ic, **config.ic_params)
    mask = None if domain.is_periodic else domain.mask

    def masked(a):
        return a if mask is None else np.where(mask, a, 0.0)

    exact = None
    if preset is not None and getattr(preset, "exact", None) is not None:
        exact = lambda t: masked(preset.exact(t, X, Y))  # noqa: E731
    f, g, derivs = _initial_data(config, preset, X, Y, shape=domain.grid.shape)
    source = None
    if config.source == "point":
        sp = config.source_params
        source = point_source(float(sp.get("x0", 0.0)), float(sp.get("y0", 0.0)), domain.grid.hx, domain.grid.hy,
                              float(sp.get("omega", 4.0 * math.pi)), float(sp.get("amplitude", 1.0)),
                              sp.get("tau"), params.dt)
    elif config.source == "manufactured":
        if not hasattr(preset, "source"):
            raise ConfigurationError("source = 'manufactured' needs ic = 'manufactured'")
        source = SourceSpec(preset.source)
    state = _start(config, solver, preset, exact, f, g, derivs, source=source)
    return Problem(config, params, solver, state, exact, source, domain, None, mask, domain.cell_area)


# ------------------------------------------------------------------ output


def write_field(path, problem: Problem, u):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if problem.dim == 1:
        data = np.column_stack([problem.line.points, u])
        header = "x,u"
    else:
        X, Y = problem.solver.X, problem.solver.Y
        data = np.column_stack([X.ravel(), Y.ravel(), np.asarray(u).ravel()])
        header = "x,y,u"
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt=FLOAT_FMT)


def write_rows(path, rows, fieldnames):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames)
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(row.get(k)) for k in fieldnames})


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return FLOAT_FMT % v if math.isfinite(v) else str(float(v))
    return "" if v is None else str(v)


SUMMARY_FIELDS = ["dimension", "order_P", "beta", "dt", "steps", "final_time", "max_abs_u", "l2_error_max",
                  "energy_ratio_max", "boundary_residual", "wall_seconds", "seconds_per_step"]


# ----------------------------------------------------------------- driving


def run_simulation(config: RunConfig, out_dir=None, callback=None, problem: Problem | None = None) -> RunResult:
    """Run the configured solver to ``config.num_steps``.

    Writes ``fields/u_<step>.csv`` for the first and last levels and every
    ``snapshot_stride`` steps (0 disables the periodic ones) and ``summary.csv`` under ``out_dir`` (default
    ``config.output_dir``; nothing is written when both are None).
    ``callback(problem, state)`` is called after every level.
    """
    out = out_dir if out_dir is not None else config.output_dir
    out = Path(out) if out is not None else None
    problem = problem or build_problem(config)
    state = problem.state
    n_target = config.num_steps
    stride = config.snapshot_stride
    result = RunResult({}, state)

    def record(st, snapshot):
        result.max_abs.append(float(np.max(np.abs(st.u_curr))))
        if problem.exact is not None:
            result.errors.append(problem.error(st))
        if config.track_energy:
            result.energies.append(problem.energy(st))
        if snapshot and out is not None:
            write_field(out / "fields" / f"u_{st.n}.csv", problem, st.u_curr)
            result.snapshots.append(st.n)
        if callback is not None:
            callback(problem, st)

    if out is not None:
        write_field(out / "fields" / "u_0.csv", problem, state.u_prev)
        result.snapshots.append(0)
    def due(n):
        return n == n_target or (stride > 0 and n % stride == 0)

    record(state, due(state.n))
    wall = 0.0
    while state.n < n_target:
        t0 = time.perf_counter()
        state = problem.step(state)
        wall += time.perf_counter() - t0
        record(state, due(state.n))
    result.state = state
    steps_taken = max(1, n_target - 1)
    energies = np.asarray(result.energies)
    residual = math.nan
    if problem.dim == 2 and not problem.domain.is_periodic:
        residual = problem.solver.ops.boundary_residual
    result.summary = {
        "dimension": config.dimension,
        "order_P": config.order_P,
        "beta": problem.params.beta,
        "dt": problem.params.dt,
        "steps": state.n,
        "final_time": state.t,
        "max_abs_u": float(max(result.max_abs + [float(np.max(np.abs(state.u_prev)))])),
        "l2_error_max": float(max(result.errors)) if result.errors else math.nan,
        "energy_ratio_max": float(energies.max() / energies[0]) if energies.size and energies[0] > 0 else math.nan,
        "boundary_residual": residual,
        "wall_seconds": wall,
        "seconds_per_step": wall / steps_taken,
    }
    if out is not None:
        write_rows(out / "summary.csv", [result.summary], SUMMARY_FIELDS)
    return result
