import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerreg.eos import IdealGas
from eulerreg.errors import BadParams, NonAdmissibleState, StepFailure
from eulerreg.regularization import RegularizationCoeffs
from eulerreg.solver import (
    ConservedField,
    Grid,
    SchemeSpec,
    advance,
    initial_condition,
    lax_step,
    parabolic_step,
    read_manifest,
    read_snapshot,
    rhs_parabolic,
    rhs_regularized,
    smooth_exact,
    stable_dt,
    write_manifest,
    write_snapshot,
)
from eulerreg.solver.schemes import lax_epsilon

AIR = IdealGas(1.4)
WAVY = {"rho0": 1.0, "amp": 0.2, "u0": 0.3, "u_amp": 0.1, "p0": 1.0, "p_amp": 0.1}


def smooth(n, params=WAVY, dim=1, boundary="periodic"):
    grid = Grid((n,) * dim, ((0.0, 1.0),) * dim, boundary)
    return initial_condition("smooth", params, grid, AIR)


def random_field(n, seed, boundary="periodic"):
    rng = np.random.default_rng(seed)
    grid = Grid((n,), ((0.0, 1.0),), boundary)
    return ConservedField.from_primitive(grid, rng.uniform(0.5, 2.0, n), rng.uniform(-1, 1, (1, n)), rng.uniform(0.5, 3.0, n))


def order(errs):
    errs = np.asarray(errs)
    return np.log2(errs[:-1] / errs[1:])


# grids and fields


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid((3,), ((0.0, 1.0),))
    with pytest.raises(ValueError):
        Grid((8,), ((1.0, 0.0),))
    with pytest.raises(ValueError):
        Grid((8,), ((0.0, 1.0),), "reflecting")
    with pytest.raises(ValueError):
        Grid((8, 8, 8), ((0, 1),) * 3)


def test_grid_geometry():
    g = Grid((4, 8), ((0.0, 1.0), (-1.0, 1.0)))
    assert g.h == (0.25, 0.25) and g.cell_volume == 0.0625
    assert np.allclose(g.centers(0), [0.125, 0.375, 0.625, 0.875])
    assert g.mesh()[0].shape == (4, 8)
    assert g.refined(2).n == (8, 16)


def test_field_primitive_round_trip():
    f = random_field(16, 1)
    g = ConservedField.from_primitive(f.grid, f.rho, f.u, f.e)
    assert np.allclose(g.U, f.U, rtol=1e-15)
    with pytest.raises(ValueError):
        ConservedField(f.grid, np.zeros((2, 16)))


# right-hand sides


@pytest.mark.parametrize("dim", [1, 2])
@pytest.mark.parametrize("boundary", ["periodic", "farfield"])
def test_constant_state_is_stationary(dim, boundary):
    grid = Grid((8,) * dim, ((0.0, 1.0),) * dim, boundary)
    u = np.zeros((dim,) + grid.n)
    u[0] = 0.7
    f = ConservedField.from_primitive(grid, np.full(grid.n, 1.3), u, np.full(grid.n, 2.0))
    for form in ("conservative", "brenner"):
        for l_form in ("split", "entropy"):
            dU = rhs_regularized(f, RegularizationCoeffs(0.1, 0.05, "symmetric", mu=0.1), AIR, form, l_form)
            assert np.abs(dU).max() <= 1e-13
    assert np.abs(rhs_parabolic(f, 0.1, AIR)).max() <= 1e-13


@pytest.mark.parametrize("scheme", ["gp-regularized", "gp-brenner", "parabolic"])
def test_periodic_conservation(scheme):
    f0 = smooth(64)
    traj = advance(f0, SchemeSpec(scheme), RegularizationCoeffs(0.02, 0.01), AIR, 0.1)
    assert np.allclose(traj.final.totals(), f0.totals(), rtol=0, atol=1e-12)


def test_periodic_conservation_2d():
    f0 = smooth(24, dim=2)
    traj = advance(f0, SchemeSpec(), RegularizationCoeffs(0.02, 0.02, "symmetric", mu=0.01, lambda_visc=0.0), AIR, 0.05)
    assert np.allclose(traj.final.totals(), f0.totals(), rtol=0, atol=1e-12)


def test_2d_reproduces_1d_profile():
    params = {"rho0": 1.0, "amp": 0.2, "u0": 0.3, "u_amp": 0.1, "p0": 1.0}
    f1 = initial_condition("smooth", params, Grid((32,), ((0.0, 1.0),)), AIR)
    g2 = Grid((32, 4), ((0.0, 1.0), (0.0, 1.0)))
    x = g2.mesh()[0]
    rho = 1.0 + 0.2 * np.sin(2 * np.pi * x)
    u = np.zeros((2,) + g2.n)
    u[0] = 0.3 + 0.1 * np.sin(2 * np.pi * x)
    f2 = ConservedField.from_primitive(g2, rho, u, AIR.internal_energy(rho, np.ones(g2.n)))
    c = RegularizationCoeffs(0.02, 0.01)
    d1 = rhs_regularized(f1, c, AIR)
    d2 = rhs_regularized(f2, c, AIR)
    assert np.allclose(d2[[0, 1, 3], :, 2], d1, atol=1e-12)
    assert np.abs(d2[2]).max() <= 1e-12


@pytest.mark.parametrize("n", [16, 50, 128])
@pytest.mark.parametrize("seed", [0, 1])
def test_lax_equals_parabolic_forward_euler(n, seed):
    f = random_field(n, seed)
    dt = 0.3 * f.grid.h[0]
    a = lax_step(f, dt, AIR, check=False).U
    b = parabolic_step(f, dt, lax_epsilon(f.grid, dt), AIR, check=False).U
    assert np.abs(a - b).max() <= 1e-14 * np.abs(f.U).max()


def test_split_form_is_the_parabolic_system():
    for n in (32, 64, 128):
        f = smooth(n)
        eps = 0.01
        a = rhs_regularized(f, RegularizationCoeffs(eps, eps, "parabolic"), AIR)
        b = rhs_parabolic(f, eps, AIR)
        assert np.abs(a - b).max() <= 1e-11 * np.abs(b).max()


def test_entropy_l_form_converges_to_parabolic():
    errs = []
    for n in (32, 64, 128, 256):
        f = smooth(n)
        a = rhs_regularized(f, RegularizationCoeffs(0.05, 0.05), AIR, l_form="entropy")
        errs.append(np.abs(a - rhs_parabolic(f, 0.05, AIR)).max())
    assert np.all(order(errs) >= 1.9), errs


def test_brenner_form_converges_to_conservative():
    errs = []
    c = RegularizationCoeffs(0.05, 0.02, "symmetric", mu=0.03)
    for n in (32, 64, 128, 256):
        f = smooth(n)
        errs.append(np.abs(rhs_regularized(f, c, AIR, "brenner") - rhs_regularized(f, c, AIR)).max())
    assert np.all(order(errs) >= 1.9), errs


def test_contact_keeps_u_and_p_uniform():
    grid = Grid((100,), ((0.0, 1.0),), "farfield")
    f0 = initial_condition("contact", {"beta": 1.0, "p": 1.0, "x0": 0.3}, grid, AIR)
    traj = advance(f0, SchemeSpec(), RegularizationCoeffs(0.01, 0.01), AIR, 0.1)
    rho, u, e = traj.primitive(-1)
    assert np.abs(u - 1.0).max() <= 1e-12
    assert np.abs(AIR.pressure(rho, e) - 1.0).max() <= 1e-12
    assert rho.max() <= 2.0 and rho.min() >= 1.0
    assert np.sum((rho > 1.0 + 1e-6) & (rho < 2.0 - 1e-6)) > 2


def test_gaussian_density_peak_decays():
    grid = Grid((80,), ((-1.0, 1.0),), "farfield")
    x = grid.centers()
    rho = 1.0 + np.exp(-(x**2) / 0.02)
    f0 = ConservedField.from_primitive(grid, rho, np.zeros((1, 80)), AIR.internal_energy(rho, np.ones(80)))
    peaks = []
    advance(f0, SchemeSpec(), RegularizationCoeffs(0.02, 0.02), AIR, 0.05, callbacks=[lambda f: peaks.append(f.rho.max())])
    assert np.all(np.diff(peaks) < 0)


@pytest.mark.parametrize("scheme,coeffs", [
    ("gp-regularized", RegularizationCoeffs(0.01, 0.01, "symmetric", mu=0.01)),
    ("parabolic", RegularizationCoeffs(0.01, 0.01)),
])
def test_galilean_boost(scheme, coeffs):
    """Boosting by V = 1 for t = 1/4 equals the rest-frame run shifted by a quarter period."""
    devs = []
    for n in (32, 64, 128):
        rest = advance(smooth(n, {**WAVY, "u0": 0.0}), SchemeSpec(scheme), coeffs, AIR, 0.25).final
        moved = advance(smooth(n, {**WAVY, "u0": 1.0}), SchemeSpec(scheme), coeffs, AIR, 0.25).final
        devs.append(np.abs(np.roll(rest.rho, n // 4) - moved.rho).max())
    assert devs[-1] < 2e-3
    assert np.all(order(devs) >= 1.5), devs


# manufactured solution


def _manufactured(a, d, gamma=1.4):
    x, t = sp.symbols("x t", real=True)
    rho = 1 + sp.Rational(1, 5) * sp.sin(2 * sp.pi * (x - t))
    u = sp.Rational(1, 2) + sp.Rational(1, 10) * sp.cos(2 * sp.pi * x + t)
    p = 1 + sp.Rational(1, 10) * sp.sin(2 * sp.pi * x + 2 * t)
    e = p / ((gamma - 1) * rho)
    E = rho * e + rho * u**2 / 2
    rx, ux, ex = sp.diff(rho, x), sp.diff(u, x), sp.diff(e, x)
    f = a * rx
    G = a * rho * ux
    l = (d - a) * (-p / rho) * rx + a * e * rx + d * rho * ex
    F = [rho * u - f, rho * u**2 + p - (G + f * u), (E + p) * u - (l + u**2 * f / 2 + G * u)]
    U = [rho, rho * u, E]
    S = [sp.lambdify((x, t), sp.diff(Ui, t) + sp.diff(Fi, x), "numpy") for Ui, Fi in zip(U, F)]
    ex_rho = sp.lambdify((x, t), rho, "numpy")
    ex_u = sp.lambdify((x, t), u, "numpy")
    ex_e = sp.lambdify((x, t), e, "numpy")
    return S, ex_rho, ex_u, ex_e


def test_manufactured_solution_second_order():
    a, d = 0.02, 0.01
    S, ex_rho, ex_u, ex_e = _manufactured(a, d)

    def source(t, grid):
        xc = grid.centers()
        return np.array([Si(xc, t) + 0 * xc for Si in S])

    errs = []
    for n in (32, 64, 128):
        grid = Grid((n,), ((0.0, 1.0),))
        xc = grid.centers()
        f0 = ConservedField.from_primitive(grid, ex_rho(xc, 0.0), ex_u(xc, 0.0)[None], ex_e(xc, 0.0))
        traj = advance(f0, SchemeSpec(cfl=0.4), RegularizationCoeffs(a, d), AIR, 0.2, source=source, record_stride=10**6)
        errs.append(np.abs(traj.final.rho - ex_rho(xc, 0.2)).mean())
    assert np.all(order(errs) >= 1.9), errs


# time stepping


def test_stable_dt_limits():
    f = smooth(100)
    c = RegularizationCoeffs(0.0, 0.0, "zero")
    dt_h = stable_dt(f, SchemeSpec(cfl=0.5), c, AIR)
    big = RegularizationCoeffs(1.0, 1.0)
    dt_v = stable_dt(f, SchemeSpec(cfl=0.5, viscfactor=0.9), big, AIR)
    assert dt_v == pytest.approx(0.9 * f.grid.h[0] ** 2 / 2)
    assert dt_v < dt_h


@pytest.mark.parametrize("integrator", ["forward-euler", "ssp-rk2", "ssp-rk3"])
def test_advance_lands_on_t_end(integrator):
    traj = advance(smooth(32), SchemeSpec(integrator=integrator, cfl=0.3), RegularizationCoeffs(0.02, 0.02), AIR, 0.123)
    assert traj.times[-1] == 0.123
    assert traj.steps == len(traj) - 1


def test_advance_strides_and_max_steps():
    seen = []
    traj = advance(smooth(32), SchemeSpec(), RegularizationCoeffs(0.02, 0.02), AIR, 0.2, callbacks=[seen.append], record_stride=5, max_steps=12)
    assert traj.steps == 12 and len(seen) == 13
    assert len(traj) == 3  # initial, step 5, step 10
    with pytest.raises(ValueError):
        advance(smooth(32), SchemeSpec(), RegularizationCoeffs(), AIR, -1.0)


def test_mesh_scaled_coefficients_are_recorded():
    f0 = smooth(50)
    traj = advance(f0, SchemeSpec(), RegularizationCoeffs(c0=0.5), AIR, 0.05)
    c = traj.coeffs[0]
    beta = np.max(np.abs(f0.u[0]) + np.sqrt(AIR.sound_speed2(f0.rho, f0.e)))
    assert c.d == pytest.approx(0.5 * f0.grid.h[0] * beta) and c.a == c.d


def test_step_failure_carries_partial_trajectory():
    grid = Grid((100,), ((0.0, 1.0),), "farfield")
    f0 = initial_condition("riemann", {"left": (1.0, -2.0, 0.4), "right": (1.0, 2.0, 0.4)}, grid, AIR)
    with pytest.raises(StepFailure) as info:
        advance(f0, SchemeSpec(cfl=0.9), RegularizationCoeffs(0.0, 0.0, "zero"), AIR, 0.5)
    traj = info.value.trajectory
    assert "admissibility" in str(info.value)
    assert traj.times[0] == 0.0 and len(traj) >= 1
    assert traj.steps == len(traj) - 1 or traj.steps == len(traj) - 2


def test_rhs_rejects_inadmissible_state():
    f = random_field(8, 3)
    U = f.U.copy()
    U[0, 2] = -1.0
    with pytest.raises(NonAdmissibleState):
        rhs_regularized(f.with_state(U, 0.0), RegularizationCoeffs(0.1, 0.1), AIR)


def test_scheme_spec_validation():
    for kw in ({"scheme": "upwind"}, {"integrator": "rk4"}, {"cfl": 1.5}, {"viscfactor": 0.0}, {"l_form": "x"}):
        with pytest.raises(ValueError):
            SchemeSpec(**kw)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), a=st.floats(0.0, 0.05), d=st.floats(0.0, 0.05))
def test_single_step_conserves_mass_property(seed, a, d):
    f = random_field(24, seed)
    dU = rhs_regularized(f, RegularizationCoeffs(a, d), AIR)
    assert abs(dU.sum(axis=1)).max() <= 1e-10 * np.abs(dU).max() + 1e-12


# initial conditions and files


def test_riemann_initial_condition():
    grid = Grid((10,), ((0.0, 1.0),), "farfield")
    f = initial_condition("riemann", {"left": (1.0, 0.0, 1.0), "right": (0.125, 0.0, 0.1)}, grid, AIR)
    assert np.all(f.rho[:5] == 1.0) and np.all(f.rho[5:] == 0.125)
    assert np.allclose(AIR.pressure(f.rho, f.e), [1.0] * 5 + [0.1] * 5)
    sm = initial_condition("riemann", {"left": (1.0, 0.0, 1.0), "right": (0.125, 0.0, 0.1), "smoothing": 0.05}, grid, AIR)
    assert np.all(np.diff(sm.rho) < 0)


@pytest.mark.parametrize("kind,params", [
    ("riemann", {"left": (1.0, 0.0, 1.0)}),
    ("riemann", {"left": (1.0, 0.0, -1.0), "right": (1.0, 0.0, 1.0)}),
    ("contact", {"beta": 1.0}),
    ("smooth", {"amp": 2.0}),
    ("custom", {}),
    ("custom", {"profile": "ramp", "X": 10.0, "Y": 0.0, "width": 1.0}),
    ("vortex", {}),
])
def test_initial_condition_errors(kind, params):
    with pytest.raises(BadParams):
        initial_condition(kind, params, Grid((10,), ((-1.0, 1.0),), "farfield"), AIR)


def test_smooth_exact_translation():
    params = {"rho0": 1.0, "amp": 0.2, "u0": 1.0, "p0": 1.0}
    grid = Grid((16,), ((0.0, 1.0),))
    f0 = initial_condition("smooth", params, grid, AIR)
    assert np.allclose(smooth_exact(params, grid, AIR, 0.0).U, f0.U)
    assert np.allclose(smooth_exact(params, grid, AIR, 0.25).rho, np.roll(f0.rho, 4))
    with pytest.raises(BadParams):
        smooth_exact(WAVY, grid, AIR, 0.1)


def test_custom_function_initial_condition():
    grid = Grid((8,), ((0.0, 1.0),))
    f = initial_condition("custom", {"function": lambda g: (np.ones(8), np.zeros((1, 8)), np.full(8, 2.0))}, grid, AIR)
    assert np.all(f.E == 2.0)


@pytest.mark.parametrize("dim", [1, 2])
def test_snapshot_round_trip(tmp_path, dim):
    f = smooth(8, dim=dim)
    s = AIR.entropy(f.rho, f.e)
    path = write_snapshot(tmp_path / "snap.csv", f, AIR, s - 1.0)
    header, table = read_snapshot(path)
    assert header[:dim] == ["x", "y"][:dim] and header[-1] == "min_s_to_date"
    assert np.array_equal(table[:, dim], f.rho.ravel())
    assert np.array_equal(table[:, -2], s.ravel())
    assert np.array_equal(table[:, -1], (s - 1.0).ravel())
    m = write_manifest(tmp_path / "manifest.csv", [(0, 0.0, "snap.csv"), (1, 0.1, "b.csv")])
    assert read_manifest(m) == [(0, 0.0, "snap.csv"), (1, 0.1, "b.csv")]
