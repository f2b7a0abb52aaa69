"""The 1D order-2P scheme: boundary levels, start-up, update and long runs."""

import math

import numpy as np
import pytest

from moltwave.conv1d import LineGrid
from moltwave.errors import ConfigurationError, InstabilityError
from moltwave.highorder1d import (
    ConstantBoundary,
    DirichletData,
    SineBoundary,
    TabulatedBoundary,
    Wave1D,
    WaveState1D,
    ZeroBoundary,
    boundary_values_ILW,
    initial_step,
    step_1d,
)
from moltwave.params import SolverParams, amplification_factor
from moltwave.presets import StandingWave1D

TWO_PI = 2 * math.pi


def periodic_solver(n, dt, P, c=1.0, beta=None, quadrature="linear"):
    line = LineGrid.uniform(0.0, 1.0, n, "periodic")
    return Wave1D(line, SolverParams(c, dt, P, beta), quadrature=quadrature)


# ------------------------------------------------------------ boundary levels


def test_zero_boundary_gives_zero():
    prm = SolverParams(1.0, 0.1, 3)
    for m in range(4):
        assert boundary_values_ILW(DirichletData.homogeneous(), m, 0.7, prm) == (0.0, 0.0)


def test_constant_boundary_levels():
    prm = SolverParams(1.0, 0.1, 2)
    data = DirichletData(ConstantBoundary(1.0), ConstantBoundary(1.0))
    assert boundary_values_ILW(data, 0, 0.3, prm) == (1.0, 1.0)
    for m in (1, 2):
        assert boundary_values_ILW(data, m, 0.3, prm) == (0.0, 0.0)


@pytest.mark.parametrize("t", [0.0, 0.37, 1.3])
def test_sine_boundary_first_level(t):
    omega = 3.0
    prm = SolverParams(1.0, 0.05, 2)
    data = DirichletData(SineBoundary(1.0, omega), ZeroBoundary())
    left, right = boundary_values_ILW(data, 1, t, prm)
    assert left == pytest.approx((omega * prm.dt / prm.beta) ** 2 * math.sin(omega * t), abs=1e-15)
    assert right == 0.0


def test_boundary_level_out_of_range():
    prm = SolverParams(1.0, 0.1, 2)
    with pytest.raises(ConfigurationError):
        boundary_values_ILW(DirichletData.homogeneous(), 3, 0.0, prm)


def test_missing_derivative_is_configuration_error():
    class ValueOnly(ZeroBoundary):
        def derivative(self, t, order):
            if order:
                raise NotImplementedError
            return 0.0

    prm = SolverParams(1.0, 0.1, 2)
    with pytest.raises(ConfigurationError):
        boundary_values_ILW(DirichletData(ValueOnly(), ValueOnly()), 1, 0.0, prm)


@pytest.mark.parametrize("order", [0, 2, 4])
def test_tabulated_boundary_matches_analytic(order):
    omega = 2.0
    tab = TabulatedBoundary(lambda t: math.sin(omega * t), h=1e-2, accuracy=4)
    exact = SineBoundary(1.0, omega).derivative(0.4, order)
    assert tab.derivative(0.4, order) == pytest.approx(exact, abs=1e-5 * max(1, abs(exact)))


# --------------------------------------------------------------- start-up


def test_zero_data_start():
    solver = periodic_solver(64, 0.1, 2)
    assert not np.any(initial_step(np.zeros(64), np.zeros(64), solver))


@pytest.mark.parametrize("dt", [0.02, 0.01])
def test_start_from_displacement(dt):
    solver = periodic_solver(512, dt, 1, quadrature="cubic")
    x = solver.line.points
    u1 = initial_step(np.sin(TWO_PI * x), np.zeros_like(x), solver)
    expected = (1 - (TWO_PI * dt) ** 2 / 2) * np.sin(TWO_PI * x)
    assert np.abs(u1 - expected).max() < 5e-3 * (TWO_PI * dt) ** 2
    assert np.abs(u1 - math.cos(TWO_PI * dt) * np.sin(TWO_PI * x)).max() < 2 * (TWO_PI * dt) ** 4 / 24


def test_start_from_velocity():
    errs = []
    for dt in (0.02, 0.01):
        solver = periodic_solver(512, dt, 1, quadrature="cubic")
        x = solver.line.points
        u1 = initial_step(np.zeros_like(x), np.sin(TWO_PI * x), solver)
        expected = dt * (1 - (TWO_PI * dt) ** 2 / 6) * np.sin(TWO_PI * x)
        assert np.abs(u1 - expected).max() < 1e-3 * dt * (TWO_PI * dt) ** 2
        exact = math.sin(TWO_PI * dt) / TWO_PI * np.sin(TWO_PI * x)
        errs.append(np.abs(u1 - exact).max())
    # O(dt^5) local error
    assert math.log2(errs[0] / errs[1]) == pytest.approx(5.0, abs=0.3)


def test_analytic_and_operator_start_agree():
    wave = StandingWave1D()
    gaps = []
    for dt in (0.05, 0.025):
        solver = periodic_solver(1024, dt, 3, quadrature="cubic")
        x = solver.line.points
        f = wave.f(x)
        a = solver.initial_step(f, np.zeros_like(x))
        b = solver.initial_step(f, np.zeros_like(x), lambda m: wave.f_even(m, x), lambda m: wave.g_even(m, x))
        assert np.abs(b - math.cos(TWO_PI * dt) * f).max() < (TWO_PI * dt) ** 8 / math.factorial(8)
        gaps.append(np.abs(a - b).max())
    # the operator series is truncated at p = P, so the two differ at O(dt^{2P+2})
    assert math.log2(gaps[0] / gaps[1]) == pytest.approx(8.0, abs=0.5)


# ----------------------------------------------------------------- update


def test_first_order_scheme_is_base_update():
    solver = periodic_solver(128, 0.05, 1)
    x = solver.line.points
    rng = np.random.default_rng(0)
    u0, u1 = rng.standard_normal(128), np.sin(TWO_PI * x)
    out = step_1d(WaveState1D(u0, u1), solver)
    beta = solver.params.beta
    base = 2 * u1 - u0 - beta**2 * solver.D(u1)
    assert np.array_equal(out.u_curr, base)


@pytest.mark.parametrize("P", [1, 2, 3])
def test_periodic_amplification(P):
    n, dt = 256, 0.1
    solver = periodic_solver(n, dt, P)
    x = solver.line.points
    u0 = np.sin(TWO_PI * x)
    dhat = float(np.dot(solver.D(u0), u0) / np.dot(u0, u0))
    r1, _ = amplification_factor(P, solver.params.beta, dhat)
    # start on the discrete eigenmode so the ratio is exactly rho
    u1 = (r1 * (u0 + 0j)).real
    u1i = (r1 * (u0 + 0j)).imag
    st_re = step_1d(WaveState1D(u0, u1), solver)
    st_im = step_1d(WaveState1D(np.zeros(n), u1i), solver)
    pred = r1 * r1
    assert np.abs(st_re.u_curr - pred.real * u0).max() < 1e-10
    assert np.abs(st_im.u_curr - pred.imag * u0).max() < 1e-10
    assert abs(r1) == pytest.approx(1.0, abs=1e-12)


def test_zero_data_stays_zero():
    line = LineGrid.uniform(0.0, 1.0, 101)
    solver = Wave1D(line, SolverParams(1.0, 0.05, 3))
    state = solver.start(np.zeros(101), np.zeros(101))
    for _ in range(20):
        state = solver.step(state)
        assert not np.any(state.u_curr)


@pytest.mark.parametrize("P", [1, 2, 3])
def test_time_reversibility(P):
    line = LineGrid.uniform(0.0, 1.0, 201)
    solver = Wave1D(line, SolverParams(1.0, 0.03, P))
    x = line.points
    rng = np.random.default_rng(P)
    u_prev = np.sin(math.pi * x) + 0.1 * rng.standard_normal(201)
    u_prev[[0, -1]] = 0
    u_curr = np.sin(math.pi * x) * 0.99
    fwd = solver.step(WaveState1D(u_prev, u_curr))
    back = solver.step(WaveState1D(fwd.u_curr, u_curr))
    assert np.abs(back.u_curr - u_prev).max() <= 1e-13


def test_dirichlet_data_is_imposed():
    line = LineGrid.uniform(0.0, 1.0, 101)
    data = DirichletData(SineBoundary(0.5, 3.0), ConstantBoundary(0.25))
    solver = Wave1D(line, SolverParams(1.0, 0.05, 2), data)
    state = solver.start(np.zeros(101), np.zeros(101))
    for _ in range(10):
        state = solver.step(state)
    assert state.u_curr[0] == pytest.approx(0.5 * math.sin(3.0 * state.t), abs=1e-15)
    assert state.u_curr[-1] == 0.25


def test_sentinel_reports_step():
    solver = periodic_solver(64, 0.1, 1)
    x = solver.line.points
    u = np.sin(TWO_PI * x)
    state = WaveState1D(u, 1e7 * u, n=5, reference=1.0)
    with pytest.raises(InstabilityError) as err:
        solver.step(state)
    assert err.value.step == 6


def test_periodic_line_rejects_boundary_data():
    with pytest.raises(ConfigurationError):
        Wave1D(LineGrid.uniform(0.0, 1.0, 16, "periodic"), SolverParams(1.0, 0.1, 1), DirichletData.homogeneous())


@pytest.mark.slow
@pytest.mark.parametrize("P", [1, 2])
def test_long_run_bounded(P):
    n = 100
    dt = 10 / n  # CFL 10
    solver = periodic_solver(n, dt, P)
    x = solver.line.points
    state = solver.start(np.sin(TWO_PI * x), np.zeros(n))
    peak = 0.0
    for _ in range(10_000):
        state = solver.step(state)
        peak = max(peak, np.abs(state.u_curr).max())
    assert peak <= 2.0
