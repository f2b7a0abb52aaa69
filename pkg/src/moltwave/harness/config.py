"""Run configuration: a flat TOML file with a few parameter sub-tables.

See docs/config_schema.md for every key. Example::

    dimension = 2
    order_P = 2
    cfl = 2.0
    T = 1.0
    nx = 80
    ny = 80
    bounds = [-1.0, 1.0, -1.0, 1.0]
    geometry = "box"
    ic = "standing_mode"
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from ..conv1d import QUADRATURES
from ..errors import ConfigurationError
from ..params import beta_max
from ..scheme2d import SOURCE_VARIANTS

GEOMETRIES = ("box", "periodic", "ellipse", "circle")
SOURCES = ("none", "point", "manufactured")
STARTS = ("taylor", "exact")
BOUNDARY_KINDS = ("zero", "constant", "sine")


@dataclass
class RunConfig:
    dimension: int = 2
    order_P: int = 1
    beta: float | None = None
    c: float = 1.0
    cfl: float | None = None
    dt: float | None = None
    T: float = 1.0
    steps: int | None = None
    nx: int = 81
    ny: int = 81
    bounds: tuple = (-1.0, 1.0, -1.0, 1.0)
    bc: str = "dirichlet"
    ic: str = "zero"
    ic_params: dict = field(default_factory=dict)
    start: str = "taylor"
    geometry: str = "box"
    geometry_params: dict = field(default_factory=dict)
    source: str = "none"
    source_params: dict = field(default_factory=dict)
    source_variant: str = "consistent"
    boundary_left: dict = field(default_factory=dict)
    boundary_right: dict = field(default_factory=dict)
    symmetrize: bool = False
    quadrature: str = "linear"
    track_energy: bool = False
    output_dir: str | None = None
    snapshot_stride: int = 0
    anisotropy: dict = field(default_factory=dict)

    def __post_init__(self):
        self.bounds = tuple(float(b) for b in self.bounds)
        self.validate()

    # -- validation ----------------------------------------------------------

    def validate(self):
        def need(cond, msg):
            if not cond:
                raise ConfigurationError(msg)

        need(self.dimension in (1, 2), f"dimension must be 1 or 2, got {self.dimension!r}")
        need(isinstance(self.order_P, int) and 1 <= self.order_P <= 10, f"order_P must be in 1..10, got {self.order_P!r}")
        need((self.cfl is None) != (self.dt is None), "give exactly one of cfl and dt")
        for name in ("c", "T", "cfl", "dt", "beta"):
            val = getattr(self, name)
            need(val is None or (math.isfinite(val) and val > 0), f"{name} must be positive, got {val!r}")
        if self.beta is not None:
            need(self.beta <= beta_max(self.order_P) * (1 + 1e-12),
                 f"beta={self.beta} exceeds beta_max({self.order_P}) = {beta_max(self.order_P):.6f}")
        need(self.steps is None or self.steps >= 1, "steps must be >= 1")
        need(self.nx >= 4, "nx must be at least 4")
        nb = 2 if self.dimension == 1 else 4
        need(len(self.bounds) in (2, 4) and len(self.bounds) >= nb, f"bounds needs {nb} numbers")
        need(self.bounds[1] > self.bounds[0], "bounds must satisfy x1 > x0")
        if self.dimension == 2:
            need(self.ny >= 4, "ny must be at least 4")
            need(self.bounds[3] > self.bounds[2], "bounds must satisfy y1 > y0")
            need(self.geometry in GEOMETRIES, f"geometry must be one of {GEOMETRIES}")
        need(self.bc in ("dirichlet", "periodic"), "bc must be 'dirichlet' or 'periodic'")
        if self.dimension == 2:
            need((self.bc == "periodic") == (self.geometry == "periodic"),
                 "2D periodic runs need geometry = 'periodic' and bc = 'periodic'")
        need(self.start in STARTS, f"start must be one of {STARTS}")
        need(self.source in SOURCES, f"source must be one of {SOURCES}")
        need(self.source == "none" or self.dimension == 2, "sources are supported in 2D only")
        need(self.source == "none" or self.order_P in (1, 2), "sourced runs need order_P 1 or 2")
        need(self.source_variant in SOURCE_VARIANTS, f"source_variant must be one of {SOURCE_VARIANTS}")
        need(self.quadrature in QUADRATURES, f"quadrature must be one of {sorted(QUADRATURES)}")
        need(self.snapshot_stride >= 0, "snapshot_stride must be >= 0")
        for side in (self.boundary_left, self.boundary_right):
            kind = side.get("kind", "zero")
            need(kind in BOUNDARY_KINDS, f"boundary kind must be one of {BOUNDARY_KINDS}")
        if self.dimension == 2:
            need(not self.boundary_left and not self.boundary_right,
                 "2D runs support homogeneous Dirichlet or periodic boundaries only")
        if self.bc == "periodic":
            need(not self.boundary_left and not self.boundary_right, "periodic runs take no boundary data")

    # -- derived -------------------------------------------------------------

    @property
    def hx(self):
        x0, x1 = self.bounds[0], self.bounds[1]
        return (x1 - x0) / (self.nx if self.bc == "periodic" else self.nx - 1)

    @property
    def time_step(self):
        return self.dt if self.dt is not None else self.cfl * self.hx / self.c

    @property
    def num_steps(self):
        if self.steps is not None:
            return self.steps
        ratio = self.T / self.time_step
        n = round(ratio)
        return max(1, n if abs(ratio - n) < 1e-9 * max(1.0, ratio) else math.ceil(ratio))

    def replace(self, **changes):
        """Copy with some fields changed; setting dt clears cfl and vice versa."""
        if "dt" in changes and "cfl" not in changes:
            changes["cfl"] = None
        if "cfl" in changes and "dt" not in changes:
            changes["dt"] = None
        return dataclasses.replace(self, **changes)


def config_from_dict(data: dict) -> RunConfig:
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
    return RunConfig(**data)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomli.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except tomli.TOMLDecodeError as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}") from exc
    return config_from_dict(data)
