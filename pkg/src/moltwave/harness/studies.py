"""Convergence, stability and anisotropy studies built on run_simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, NumericalError
from ..metrics import convergence_rates, wavefront_radii
from .config import RunConfig
from .runner import build_problem, run_simulation, write_rows


@dataclass(frozen=True)
class ErrorRecord:
    dt: float
    l2_error: float
    rate: float  # NaN on the first row
    wall_seconds: float

    def as_row(self, order_P):
        return {"order_P": order_P, "dt": self.dt, "l2_error": self.l2_error, "rate": self.rate,
                "wall_seconds": self.wall_seconds}


ERROR_FIELDS = ["order_P", "dt", "l2_error", "rate", "wall_seconds"]


def records_from_errors(dts, errors, walls=None):
    walls = [math.nan] * len(dts) if walls is None else walls
    rates = convergence_rates(errors)
    return [ErrorRecord(float(d), float(e), float(r), float(w)) for d, e, r, w in zip(dts, errors, rates, walls)]


def convergence_study(config: RunConfig, dts, out_dir=None):
    """Max-over-steps L2 error for each dt; rates are log2 of successive ratios."""
    dts = [float(d) for d in dts]
    if not dts:
        raise ConfigurationError("convergence study needs at least one dt")
    errors, walls = [], []
    for dt in dts:
        cfg = config.replace(dt=dt, steps=None, snapshot_stride=0, output_dir=None)
        problem = build_problem(cfg)
        if problem.exact is None:
            raise ConfigurationError(f"initial condition {cfg.ic!r} has no exact solution to measure errors against")
        res = run_simulation(cfg, out_dir=None, problem=problem)
        errors.append(res.summary["l2_error_max"])
        walls.append(res.summary["wall_seconds"])
    records = records_from_errors(dts, errors, walls)
    out = out_dir if out_dir is not None else config.output_dir
    if out is not None:
        write_rows(Path(out) / "errors.csv", [r.as_row(config.order_P) for r in records], ERROR_FIELDS)
    return records


@dataclass(frozen=True)
class StabilityRecord:
    order_P: int
    beta: float
    dt: float
    steps: int
    initial_max: float
    max_abs_u: float

    @property
    def growth(self):
        return self.max_abs_u / self.initial_max


def stability_study(config: RunConfig, steps: int, out_dir=None):
    """Run ``steps`` levels and compare max |u| over the run with max |u^0|."""
    cfg = config.replace(steps=int(steps), output_dir=None, snapshot_stride=0)
    problem = build_problem(cfg)
    u0 = float(np.max(np.abs(problem.state.u_prev)))
    if u0 == 0:
        raise ConfigurationError("stability study needs nonzero initial data")
    res = run_simulation(cfg, out_dir=None, problem=problem)
    rec = StabilityRecord(cfg.order_P, problem.params.beta, problem.params.dt, res.state.n, u0,
                          res.summary["max_abs_u"])
    out = out_dir if out_dir is not None else config.output_dir
    if out is not None:
        row = dict(rec.__dict__, growth=rec.growth)
        write_rows(Path(out) / "summary.csv", [row], list(row))
    return rec


@dataclass(frozen=True)
class AnisotropyResult:
    orders: tuple
    steps: list
    times: list
    metrics: dict  # order -> list of metric values (NaN where no front was found)
    radii: dict  # order -> list of mean front radii
    chosen_step: int
    chosen_time: float

    def at_chosen(self, order):
        return self.metrics[order][self.steps.index(self.chosen_step)]

    @property
    def ratio(self):
        a, b = self.orders[:2]
        return self.at_chosen(b) / self.at_chosen(a)


def anisotropy_study(config: RunConfig, out_dir=None):
    """Point-source runs at each order; the metric is compared at the snapshot
    where the lowest order is most anisotropic.

    ``config.anisotropy`` keys: ``orders`` (default [1, 2]), ``sectors`` (64),
    ``threshold`` (0.1), ``radius_window`` as fractions of the half-width
    ([0.2, 0.8]) restricting which snapshots are eligible, ``center``, and
    ``exclude_radius`` (4 grid spacings) cutting the source footprint out of
    the search band.
    """
    if config.dimension != 2 or config.source != "point":
        raise ConfigurationError("anisotropy study needs a 2D point-source config")
    opts = dict(config.anisotropy)
    orders = tuple(int(p) for p in opts.get("orders", (1, 2)))
    sectors = int(opts.get("sectors", 64))
    threshold = float(opts.get("threshold", 0.1))
    lo, hi = (float(v) for v in opts.get("radius_window", (0.2, 0.8)))
    x0, x1, y0, y1 = config.bounds
    half = 0.5 * min(x1 - x0, y1 - y0)
    sp = config.source_params
    center = tuple(opts.get("center", (float(sp.get("x0", 0.0)), float(sp.get("y0", 0.0)))))
    # the forced region around the source is not part of the wavefront
    h = max((x1 - x0) / (config.nx - 1), (y1 - y0) / (config.ny - 1))
    band = (float(opts.get("exclude_radius", 4.0 * h)), 0.95 * half)

    fields = {}
    for p in orders:
        cfg = config.replace(order_P=p, beta=None, output_dir=None, snapshot_stride=0)
        snaps = {}
        run_simulation(cfg, out_dir=None, callback=lambda prob, st, snaps=snaps: snaps.__setitem__(st.n, (st.t, st.u_curr)))
        fields[p] = snaps
    common = sorted(set.intersection(*(set(f) for f in fields.values())))
    problem = build_problem(config.replace(order_P=orders[0], beta=None))
    x, y = problem.domain.grid.x, problem.domain.grid.y

    metrics = {p: [] for p in orders}
    radii = {p: [] for p in orders}
    for n in common:
        for p in orders:
            try:
                _, r = wavefront_radii(fields[p][n][1], x, y, center, band, sectors, threshold)
                metrics[p].append(float((r.max() - r.min()) / r.mean()))
                radii[p].append(float(r.mean()))
            except NumericalError:
                metrics[p].append(math.nan)
                radii[p].append(math.nan)
    base = orders[0]
    eligible = [i for i, n in enumerate(common)
                if all(math.isfinite(metrics[p][i]) for p in orders) and lo * half <= radii[base][i] <= hi * half]
    if not eligible:
        raise NumericalError("no snapshot has a detectable wavefront inside the radius window")
    best = max(eligible, key=lambda i: metrics[base][i])
    times = [fields[base][n][0] for n in common]
    result = AnisotropyResult(orders, common, times, metrics, radii, common[best], times[best])
    out = out_dir if out_dir is not None else config.output_dir
    if out is not None:
        rows = []
        for i, n in enumerate(common):
            row = {"step": n, "t": times[i]}
            for p in orders:
                row[f"metric_P{p}"] = metrics[p][i]
                row[f"radius_P{p}"] = radii[p][i]
            rows.append(row)
        names = ["step", "t"] + [f"{k}_P{p}" for p in orders for k in ("metric", "radius")]
        write_rows(Path(out) / "anisotropy.csv", rows, names)
        summary = {"chosen_step": result.chosen_step, "chosen_time": result.chosen_time}
        for p in orders:
            summary[f"metric_P{p}"] = result.at_chosen(p)
        summary["ratio"] = result.ratio
        write_rows(Path(out) / "summary.csv", [summary], list(summary))
    return result


__all__ = [
    "AnisotropyResult",
    "ErrorRecord",
    "StabilityRecord",
    "anisotropy_study",
    "convergence_study",
    "records_from_errors",
    "stability_study",
]
