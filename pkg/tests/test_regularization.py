import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerreg.eos import IdealGas, thermo_eval
from eulerreg.errors import DegenerateCoefficient, DomainError
from eulerreg.regularization import (
    RegularizationCoeffs,
    admissible_range,
    gamma_coefficient,
    m_matrix,
    m_matrix_check,
    mass_velocity,
    momentum_viscosity,
    n_matrix,
    quadratic_form_J,
    s_matrix,
    viscous_fluxes,
)

from conftest import e_st, gamma_st, rel, rho_st

coef_st = st.floats(0.0, 5.0)
pos_coef_st = st.floats(0.01, 5.0)


# symbolic oracles built from s alone

_r, _e, _g, _a, _d, _x, _al, _gr, _ge = sp.symbols("rho e gamma a d x alpha g_r g_e", real=True)
_s = sp.log(_e ** (1 / (_g - 1)) / _r)
_sr, _se = sp.diff(_s, _r), sp.diff(_s, _e)
_p = -_r**2 * _sr / _se


def _oracle_J():
    f = _a * _gr
    l = (_e * _se - _r * _sr) / _se * f + _d * _r / _se * (_sr * _gr + _se * _ge)
    grad = lambda q: sp.diff(q, _r) * _gr + sp.diff(q, _e) * _ge  # noqa: E731
    J = -f * grad(_e * _se - _r * _sr) + l * grad(_se) + _a * _gr * grad(_s)
    return sp.lambdify((_r, _e, _g, _a, _d, _gr, _ge), sp.simplify(J), "numpy")


def _oracle_S():
    T = 1 / _se
    jac = lambda f, g: sp.diff(f, _r) * sp.diff(g, _e) - sp.diff(f, _e) * sp.diff(g, _r)  # noqa: E731
    cp = T * jac(_s, _p) / jac(T, _p)  # T (ds/dT) at constant p
    w = _al / cp
    h11 = w * _sr**2 + sp.diff(_r**2 * _sr, _r) / _r**2
    h12 = w * _sr * _se + sp.diff(_sr, _e)
    h22 = w * _se**2 + sp.diff(_se, _e)
    k = _x * _se / _r**2
    S = sp.Matrix([[h11 + k * sp.diff(_p, _r), h12 + k * sp.diff(_p, _e) / 2], [h12 + k * sp.diff(_p, _e) / 2, h22]])
    return S


_J = _oracle_J()
_S = _oracle_S()
_detS = sp.lambdify((_r, _e, _g, _x, _al), sp.simplify(_S.det()), "numpy")


# worked examples


def test_fluxes_at_unit_state(air):
    c = RegularizationCoeffs(a=1.0, d=1.0, gform="zero")
    vf = viscous_fluxes(1.0, 1.0, [0.0], [1.0], [0.0], [[0.0]], c, air)
    assert vf.f[0] == pytest.approx(1.0)
    # l = s_e^-1 (e s_e - rho s_rho) f + d rho s_e^-1 grad s = 1 + 2.5 - 2.5 = 1
    assert vf.l[0] == pytest.approx(1.0, rel=1e-14)


def test_zero_coefficients_give_zero_fluxes(air):
    c = RegularizationCoeffs(0.0, 0.0, "zero")
    vf = viscous_fluxes(1.3, 0.7, [0.4, -1.0], [[0.3, 1.0]], [[2.0, -1.0]], np.ones((1, 2, 2)), c, air)
    for arr in (vf.f, vf.Gtensor, vf.l, vf.g, vf.h):
        assert np.all(arr == 0)


def test_mass_velocity():
    assert np.allclose(mass_velocity([1.0], 2.0, [0.5]), [0.75])
    with pytest.raises(DomainError):
        mass_velocity([1.0], 0.0, [0.5])


def test_momentum_viscosity_forms():
    gu = np.array([[0.0, -1.0], [1.0, 0.0]])
    par = momentum_viscosity(2.0, 1.0, gu, RegularizationCoeffs(a=0.5, d=0.5))
    assert np.allclose(par, gu)
    sym = momentum_viscosity(2.0, 1.0, gu, RegularizationCoeffs(gform="symmetric", mu=1.0, lambda_visc=3.0))
    # rigid rotation: symmetric part and divergence vanish
    assert np.allclose(sym, 0)


def test_coefficient_validation():
    with pytest.raises(ValueError):
        RegularizationCoeffs(a=-1.0)
    with pytest.raises(ValueError):
        RegularizationCoeffs(gform="nope")
    with pytest.raises(ValueError):
        RegularizationCoeffs.from_ratio(1.5, 1.0)
    with pytest.raises(ValueError):
        RegularizationCoeffs(gform="symmetric", mu=1.0, lambda_visc=-2.0).check_dissipative(2)


def test_mesh_scaled_resolution():
    c = RegularizationCoeffs(c0=0.5, ratio_x=0.25)
    with pytest.raises(ValueError):
        c.a_of(1.0, 1.0)
    r = c.resolve(0.01, 2.0)
    assert r.d == pytest.approx(0.01) and r.a == pytest.approx(0.0075)


def test_callable_coefficients(air):
    c = RegularizationCoeffs(a=lambda r, e: 0.1 * r, d=lambda r, e: 0.1 * r)
    vf = viscous_fluxes(np.array([1.0, 2.0]), np.array([1.0, 1.0]), np.zeros((2, 1)), [[1.0], [1.0]], [[0.0], [0.0]], np.zeros((2, 1, 1)), c, air)
    assert np.allclose(vf.f[:, 0], [0.1, 0.2])


def test_s_matrix_a_equals_d_alpha_one_singular(air):
    rep = s_matrix(1.0, 1.0, 1.0, 1.0, 1.0, air)
    assert rep.det_closed == 0.0
    assert abs(rep.det_S2) < 1e-14
    assert rep.negative_semidefinite


def test_s_matrix_rejects_d_zero(air):
    with pytest.raises(DegenerateCoefficient):
        s_matrix(1.0, 1.0, 1.0, 0.0, 1.0, air)


def test_m_check_degenerate(air):
    with pytest.raises(DegenerateCoefficient):
        m_matrix_check(1.0, 1.0, 1.0, 0.0, air)
    rep = m_matrix_check(1.0, 1.0, 1.0, 0.0, air, allow_degenerate=True)
    assert rep.degenerate


# interval


def test_interval_is_the_root_set_of_det_S2_alpha0(air):
    """Endpoints are the roots of det(S2^0) in x, solved symbolically."""
    roots = sorted(float(v) for v in sp.solve(_S.det().subs({_r: 1, _e: 1, _g: sp.Rational(7, 5), _al: 0}), _x))
    lo, hi = admissible_range(1.0, 1.0, 0.0, air)
    assert lo == pytest.approx(roots[0], rel=1e-12) and hi == pytest.approx(roots[1], rel=1e-12)
    g = 1.4
    assert lo == pytest.approx(-(2 / (g - 1)) * (1 + np.sqrt(g)), rel=1e-12)
    assert hi == pytest.approx(-(2 / (g - 1)) * (1 - np.sqrt(g)), rel=1e-12)


def test_interval_sign_by_eigenvalues(air):
    lo, hi = admissible_range(1.0, 1.0, 0.0, air)
    for x in np.linspace(lo - 3, hi + 3, 41):
        if min(abs(x - lo), abs(x - hi)) < 1e-3:
            continue
        S = np.asarray(s_matrix(1.0, 1.0, 1.0 - x, 1.0, 0.0, air).S2, dtype=float)
        inside = lo < x < hi
        assert (np.linalg.eigvalsh(S).max() < 0) == inside, x


def test_interval_collapses_at_alpha_one(air):
    for alpha in (1 - 1e-6, 1 - 1e-9, 1.0):
        lo, hi = admissible_range(1.0, 1.0, alpha, air)
        assert abs(lo) < 1e-2 and abs(hi) < 1e-2
    assert admissible_range(1.0, 1.0, 1.0, air) == (0.0, 0.0)
    assert gamma_coefficient(1.0, 1.0, 1.0, air) == 0.0


# properties


@settings(max_examples=150, deadline=None)
@given(rho=rho_st, e=e_st, gamma=gamma_st, a=coef_st, d=coef_st, gr=st.floats(-5, 5), ge=st.floats(-5, 5))
def test_J_matches_symbolic_oracle(rho, e, gamma, a, d, gr, ge):
    J = float(quadratic_form_J(rho, e, [gr], [ge], a, d, IdealGas(gamma)))
    ref = float(_J(rho, e, gamma, a, d, gr, ge))
    N = np.abs(n_matrix(rho, e, a, d, IdealGas(gamma)))
    scale = N[0, 0] * gr * gr + 2 * N[0, 1] * abs(gr * ge) + N[1, 1] * ge * ge
    assert abs(J - ref) <= 1e-11 * max(scale, 1e-300)


@settings(max_examples=150, deadline=None)
@given(rho=rho_st, e=e_st, gamma=gamma_st, a=coef_st, d=pos_coef_st, alpha=st.floats(0.0, 1.0))
def test_det_S2_matches_symbolic_oracle(rho, e, gamma, a, d, alpha):
    rep = s_matrix(rho, e, a, d, alpha, IdealGas(gamma))
    x = 1 - a / d
    ref = float(_detS(rho, e, gamma, x, alpha))
    S = np.abs(np.asarray(rep.S2, dtype=float))
    scale = S[0, 0] * S[1, 1] + S[0, 1] ** 2
    assert abs(float(rep.det_closed) - ref) <= 1e-9 * scale
    assert abs(float(rep.det_S2) - ref) <= 1e-9 * scale


@settings(max_examples=150, deadline=None)
@given(rho=rho_st, e=e_st, gamma=gamma_st, a=coef_st, d=pos_coef_st)
def test_semidefinite_decision_matches_eigenvalues(rho, e, gamma, a, d):
    rep = s_matrix(rho, e, a, d, 0.0, IdealGas(gamma))
    S = np.asarray(rep.S2, dtype=float)
    w = np.linalg.eigvalsh(S)
    tol = 1e-9 * np.abs(S).max()
    if abs(w).min() > tol:
        assert bool(rep.negative_semidefinite) == bool(w.max() < 0)


@settings(max_examples=150, deadline=None)
@given(rho=rho_st, e=e_st, gamma=gamma_st, a=pos_coef_st, d=pos_coef_st, gr=st.floats(-5, 5), ge=st.floats(-5, 5))
def test_shifted_form_is_nonpositive(rho, e, gamma, a, d, gr, ge):
    eos = IdealGas(gamma)
    rep = m_matrix_check(rho, e, a, d, eos)
    M = np.asarray(m_matrix(rho, e, a, d, rep.lambda_, eos), dtype=float)
    assert rel(M[0, 0] * M[1, 1] - M[0, 1] ** 2, rep.det_M2) < 1e-9
    w = np.linalg.eigvalsh(M)
    assert w.max() < 0
    v = np.array([gr, ge])
    if np.linalg.norm(v) > 1e-100:
        v = v / np.linalg.norm(v)
        assert v @ M @ v < 0


@settings(max_examples=100, deadline=None)
@given(rho=rho_st, e=e_st, gamma=gamma_st, d=pos_coef_st, gr=st.floats(-5, 5), ge=st.floats(-5, 5))
def test_a_equals_d_J_nonpositive(rho, e, gamma, d, gr, ge):
    eos = IdealGas(gamma)
    J = float(quadratic_form_J(rho, e, [gr], [ge], d, d, eos))
    N = np.abs(n_matrix(rho, e, d, d, eos))
    assert J <= 1e-12 * (N[0, 0] * gr * gr + 2 * N[0, 1] * abs(gr * ge) + N[1, 1] * ge * ge)


@settings(max_examples=100, deadline=None)
@given(rho=rho_st, e=e_st, gamma=gamma_st, a=coef_st, d=pos_coef_st)
def test_j_criterion_matches_eigenvalues(rho, e, gamma, a, d):
    eos = IdealGas(gamma)
    rep = m_matrix_check(rho, e, a, d, eos)
    N = np.asarray(n_matrix(rho, e, a, d, eos), dtype=float)
    w = np.linalg.eigvalsh(N)
    if abs(w).min() > 1e-9 * np.abs(N).max():
        assert bool(rep.negative_semidefinite) == bool(w.max() < 0)


@settings(max_examples=100, deadline=None)
@given(rho=rho_st, e=e_st, a=coef_st, d=coef_st, data=st.data())
def test_l_rewritings_agree(rho, e, a, d, data):
    gr = data.draw(st.lists(st.floats(-3, 3), min_size=2, max_size=2))
    ge = data.draw(st.lists(st.floats(-3, 3), min_size=2, max_size=2))
    vf = viscous_fluxes(rho, e, [0.3, -0.2], gr, ge, np.zeros((2, 2)), RegularizationCoeffs(a, d, "zero"), IdealGas(1.4))
    th = thermo_eval(rho, e, IdealGas(1.4))
    gr, ge = np.array(gr), np.array(ge)
    ref = (a - d) * (th.p / rho + e) * gr + d * (e * gr + rho * ge)
    assert np.allclose(vf.l, ref, rtol=1e-10, atol=1e-10 * (abs(a) + abs(d)) * (1 + rho + e) * 3)


def test_symmetric_G_is_dissipative():
    rng = np.random.default_rng(0)
    gu = rng.normal(size=(10_000, 2, 2))
    mu = rng.uniform(0, 2, size=10_000)
    lam = rng.uniform(-1, 2, size=10_000)
    lam = np.maximum(lam, -mu)  # 2 mu + 2 lam >= 0
    c = RegularizationCoeffs(gform="symmetric", mu=lambda r, e: mu, lambda_visc=lambda r, e: lam)
    G = momentum_viscosity(np.ones(10_000), np.ones(10_000), gu, c)
    work = np.einsum("nij,nij->n", G, gu)
    assert work.min() >= -1e-12
    Gp = momentum_viscosity(np.ones(10_000), np.ones(10_000), gu, RegularizationCoeffs(a=0.3, d=0.3))
    assert np.einsum("nij,nij->n", Gp, gu).min() >= 0
