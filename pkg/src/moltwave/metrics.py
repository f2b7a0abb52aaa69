"""Error norms, a discrete energy, and the wavefront anisotropy measure."""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import ConfigurationError, NumericalError
from .geometry import Domain2D


def l2_error(u, exact, cell_volume, mask=None):
    """sqrt(sum over interior of (u - exact)^2 * cell volume)."""
    diff = np.asarray(u, dtype=float) - np.asarray(exact, dtype=float)
    if mask is not None:
        diff = np.where(mask, diff, 0.0)
    return math.sqrt(float(np.sum(diff * diff)) * cell_volume)


def convergence_rates(errors):
    """log2 of successive error ratios; the first row has none (NaN)."""
    e = np.asarray(errors, dtype=float)
    rates = np.full(e.shape, np.nan)
    if e.size > 1:
        rates[1:] = np.log2(e[:-1] / e[1:])
    return rates


def fitted_order(dts, errors):
    """Least-squares slope of log(error) against log(dt)."""
    return float(np.polyfit(np.log(dts), np.log(errors), 1)[0])


# -------------------------------------------------------------------- energy


def _line_gradient_sq(values, points, h_perp):
    """sum over edges of (du / h_e)^2 * h_e * h_perp for one line."""
    du = np.diff(values)
    he = np.diff(points)
    return float(np.sum(du * du / he)) * h_perp


def gradient_energy_1d(u, x, periodic=False, period=None):
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    if periodic:
        u = np.append(u, u[0])
        x = np.append(x, x[0] + period)
    return _line_gradient_sq(u, x, 1.0)


def gradient_energy_2d(u, domain: Domain2D):
    """Edge-based sum of |grad u|^2. On embedded domains the end edges run to the
    off-grid boundary points (zero boundary values), so the gradient there is one-sided."""
    g = domain.grid
    total = 0.0
    for axis, lines, coords, h_perp in ((0, domain.x_lines, g.x, g.hy), (1, domain.y_lines, g.y, g.hx)):
        for line in lines:
            sl = slice(line.start, line.stop)
            vals = u[sl, line.index] if axis == 0 else u[line.index, sl]
            pts = coords[sl]
            if line.periodic:
                h = coords[1] - coords[0]
                vals = np.append(vals, vals[0])
                pts = np.append(pts, pts[-1] + h)
            else:
                vals = np.concatenate(([line.left_value], vals, [line.right_value]))
                pts = np.concatenate(([line.a], pts, [line.b]))
            total += _line_gradient_sq(vals, pts, h_perp)
    return total


def energy_functional(state, dt, c, domain: Domain2D | None = None, x=None, periodic=False, period=None):
    """Discrete energy of a three-level state.

    Kinetic part ((u^n - u^{n-1}) / dt)^2 summed over interior nodes times the
    cell volume; potential part c^2 |grad u|^2 averaged over the two levels so
    that the functional is centred at t^{n-1/2}. Pass ``domain`` for 2D states
    and ``x`` for 1D lines.
    """
    up = np.asarray(state.u_prev, dtype=float)
    uc = np.asarray(state.u_curr, dtype=float)
    vel = (uc - up) / dt
    if domain is not None:
        vel = np.where(domain.mask, vel, 0.0)
        kinetic = float(np.sum(vel * vel)) * domain.cell_area
        potential = 0.5 * (gradient_energy_2d(uc, domain) + gradient_energy_2d(up, domain))
    elif x is not None:
        x = np.asarray(x, dtype=float)
        if periodic:
            weights = np.full(x.size, period / x.size)
        else:
            # trapezoid weights; Dirichlet endpoints carry no kinetic energy of their own
            weights = np.zeros(x.size)
            weights[1:-1] = 0.5 * (x[2:] - x[:-2])
            vel[0] = vel[-1] = 0.0
        kinetic = float(np.sum(weights * vel * vel))
        potential = 0.5 * (gradient_energy_1d(uc, x, periodic, period) + gradient_energy_1d(up, x, periodic, period))
    else:
        raise ConfigurationError("energy_functional needs a 2D domain or 1D coordinates")
    return kinetic + c * c * potential


# ---------------------------------------------------------------- anisotropy


def wavefront_radii(field, x, y, center, radius_band, sectors=64, threshold=0.1, samples_per_cell=8):
    """Outermost radial maximum of |u| along the centre ray of each angular sector.

    The field is interpolated with cubic splines on a uniform grid; each peak is
    refined by a parabola through its three samples. A local maximum counts as
    the front only if it exceeds ``threshold`` times the largest |u| in the band.
    """
    field = np.abs(np.asarray(field, dtype=float))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    hx, hy = x[1] - x[0], y[1] - y[0]
    r0, r1 = radius_band
    if not 0 <= r0 < r1:
        raise ConfigurationError(f"bad radius band {radius_band}")
    dr = min(hx, hy) / samples_per_cell
    r = np.arange(r0, r1 + 0.5 * dr, dr)
    theta = (np.arange(sectors) + 0.5) * 2.0 * math.pi / sectors
    px = center[0] + r[None, :] * np.cos(theta)[:, None]
    py = center[1] + r[None, :] * np.sin(theta)[:, None]
    coords = np.stack([(px - x[0]) / hx, (py - y[0]) / hy])
    prof = map_coordinates(field, coords.reshape(2, -1), order=3, mode="nearest").reshape(px.shape)
    level = threshold * float(prof.max())
    if not level > 0:
        raise NumericalError("no wavefront: field vanishes in the radius band")
    radii = np.empty(sectors)
    for k in range(sectors):
        p = prof[k]
        peaks = np.flatnonzero((p[1:-1] >= p[:-2]) & (p[1:-1] > p[2:]) & (p[1:-1] >= level)) + 1
        if peaks.size == 0:
            raise NumericalError(
                f"no wavefront above {level:.3g} in sector {k} (theta = {theta[k]:.3f}) within r in [{r0}, {r1}]"
            )
        i = peaks[-1]
        denom = p[i - 1] - 2.0 * p[i] + p[i + 1]
        shift = 0.5 * (p[i - 1] - p[i + 1]) / denom if denom != 0 else 0.0
        radii[k] = r[i] + shift * dr
    return theta, radii


def anisotropy_metric(field, x, y, center=(0.0, 0.0), radius_band=None, sectors=64, threshold=0.1):
    """(max r - min r) / mean r of the wavefront radius over angular sectors."""
    if radius_band is None:
        half = 0.5 * min(x[-1] - x[0], y[-1] - y[0])
        radius_band = (0.0, half)
    _, radii = wavefront_radii(field, x, y, center, radius_band, sectors, threshold)
    return float((radii.max() - radii.min()) / radii.mean())
