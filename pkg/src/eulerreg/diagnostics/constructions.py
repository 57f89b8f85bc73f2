"""
Standalone constructions that exhibit the failure modes of other regularizations.

* :func:`a_neq_d_counterexample`: with a != d some generalized entropy is
  produced with the wrong sign at a point.
* :func:`ns_entropy_violation_demo`: Fourier heat conduction lowers the
  minimum of the specific entropy.
* :func:`rigid_rotation_heating`: the monolithic parabolic viscosity heats a
  rigidly rotating fluid, a symmetric G does not.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ..eos import thermo_eval
from ..errors import BadEos, NoCounterexample
from ..regularization import RegularizationCoeffs, quadratic_form_J, s_matrix
from ..solver.grid import ConservedField, Grid, pad
from ..solver.initial import initial_condition
from ..solver.schemes import rhs_parabolic, rhs_regularized
from ..solver.stepping import Trajectory
from .certificates import Certificate, min_entropy_certificate
from .entropies import EntropyFamily


@dataclass
class Counterexample:
    X: float
    Y: float
    eigenvalue: float
    S2: np.ndarray
    x: float
    epsilon: float
    family: EntropyFamily
    field: ConservedField
    value: float


def a_neq_d_counterexample(rho_star, e_star, a, d, eos, grid: Optional[Grid] = None, family="crafted", scale=1.0) -> Counterexample:
    """Initial data at which a generalized entropy inequality fails pointwise.

    ``family="crafted"`` works with S2 = S2^1. (X, Y) is the eigenvector of
    its positive eigenvalue (length ``scale``), so d rho (X,Y) S2 (X,Y)^T > 0.
    With grad s = s_rho X + s_e Y,
    epsilon = min(c_p (X,Y) S2 (X,Y)^T / |grad s|^2, 1) / 2 and
    f(s) = exp((1-epsilon) s / c_p), the production term

        d rho f'' |grad s|^2 + J f' - f' s_e G : grad u        (u = 0)

    is strictly positive at the origin of the field rho* + X w tanh(x/w),
    e* + Y w tanh(x/w), m = 0.

    ``family="physical"`` uses S2^0 and f(s) = s instead; then the production
    term is J itself and a counterexample exists exactly when x = 1 - a/d
    lies outside :func:`~eulerreg.regularization.admissible_range` at alpha = 0.

    Raises
    ------
    NoCounterexample
        If the relevant S2 has no positive eigenvalue (always when a == d).
    """
    if family not in ("crafted", "physical"):
        raise ValueError("family must be 'crafted' or 'physical'")
    if a == d:
        raise NoCounterexample("a == d: S2 is negative semi-definite, no violating gradients exist")
    alpha = 1.0 if family == "crafted" else 0.0
    rep = s_matrix(rho_star, e_star, a, d, alpha, eos)
    S = np.asarray(rep.S2, dtype=float).reshape(2, 2)
    w, V = np.linalg.eigh(S)
    if not w[-1] > 0:
        raise NoCounterexample(f"S2 (alpha={alpha:g}) has no positive eigenvalue")
    X, Y = scale * V[:, -1]
    if X < 0:
        X, Y = -X, -Y
    th = thermo_eval(rho_star, e_star, eos)
    quad = float(np.array([X, Y]) @ S @ np.array([X, Y]))
    gs2 = float((th.s_rho * X + th.s_e * Y) ** 2)
    cp = float(th.cp)
    if family == "crafted":
        eps = 0.5 * min(quad * cp / gs2, 1.0) if gs2 > 0 else 0.5
        fam = EntropyFamily.crafted(eps, cp)
    else:
        eps = 0.0
        fam = EntropyFamily.physical()
    J = float(quadratic_form_J(rho_star, e_star, [X], [Y], a, d, eos))
    s = float(th.s)
    value = d * rho_star * float(fam.fpp(s)) * gs2 + J * float(fam.fp(s))
    if not value > 0:
        raise NoCounterexample(f"production term is not positive ({value:.3g})")
    if grid is None:
        grid = Grid((201,), ((-1.0, 1.0),), "farfield")
    field = initial_condition(
        "custom", {"profile": "ramp", "X": X, "Y": Y, "rho_star": rho_star, "e_star": e_star, "x0": 0.0}, grid, eos
    )
    return Counterexample(float(X), float(Y), float(w[-1]), S, float(rep.x), eps, fam, field, value)


@dataclass
class NSDemo:
    dsdt_at_origin: float
    #: kappa Lap T0(0) / rho0(0), the textbook form of the rate
    reference: float
    #: kappa Lap T0(0) / (rho0(0) T0(0)), the exact continuum rate
    exact: float
    laplacian_T0: float
    certificate: Certificate
    field: ConservedField
    trajectory: Optional[Trajectory] = None


def _energy_at_temperature(eos, rho, T):
    g = lambda e: float(eos.temperature(rho, e)) - T
    lo, hi = 1e-3, 1.0
    while g(lo) > 0:
        lo *= 1e-3
    while g(hi) < 0:
        hi *= 10
    return brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def _heat_tendency(field: ConservedField, eos, kappa):
    """Energy tendency div(kappa grad T) with the compact stencil."""
    grid = field.grid
    P = pad(field.U, grid, field.far)
    rho = P[0]
    u = P[1:-1] / rho
    e = P[-1] / rho - 0.5 * np.sum(u * u, axis=0)
    T = eos.temperature(rho, e)
    h = grid.h[0]
    return kappa * (T[2:] - 2 * T[1:-1] + T[:-2]) / h**2


def _ns_rhs(field, eos, kappa):
    dU = rhs_regularized(field, RegularizationCoeffs(0.0, 0.0, "zero"), eos)
    dU[-1] += _heat_tendency(field, eos, kappa)
    return dU


def ns_entropy_violation_demo(eos, kappa, rho_star=1.0, T_star=1.0, u0=0.0, n_half=50, h=0.01, march_steps=0, dt=None) -> NSDemo:
    """Rate of change of the specific entropy at its minimum under Navier-Stokes heat conduction.

    Profiles q(x) = R^2 (1 - exp(-x^2/R^2)), R^2 = T*/4, give s0 = s* + q with
    a global minimum at 0 and T0 = T* - q with T0'' (0) = -2. Each (s0, T0)
    pair is mapped to (rho0, e0), the velocity is the constant u0, and the
    rate ds/dt = s_rho rho_t + s_e e_t at x = 0 is computed from the discrete
    Euler tendency plus the heat-flux divergence kappa T''. The exact limit is
    kappa T0''(0) / (rho0 T0) < 0; the viscous stress vanishes for constant u.

    With ``march_steps > 0`` the system is also advanced by forward Euler and
    the minimum entropy certificate of the resulting trajectory is attached.

    Raises
    ------
    BadEos
        If p_e = 0 at the base state, so (T, s) are not coordinates there.
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    e_star = _energy_at_temperature(eos, rho_star, T_star)
    th = thermo_eval(rho_star, e_star, eos)
    if th.p_e == 0:
        raise BadEos("p_e = 0 at the base state")
    s_star = float(th.s)
    grid = Grid((2 * n_half + 1,), ((-(n_half + 0.5) * h, (n_half + 0.5) * h),), "farfield")
    x = h * np.arange(-n_half, n_half + 1)
    R2 = 0.25 * T_star
    q = R2 * (1.0 - np.exp(-(x**2) / R2))
    rho, e = eos.state_from_entropy_temperature(s_star + q, T_star - q, guess=(rho_star, e_star))
    field = ConservedField.from_primitive(grid, rho, np.full((1,) + rho.shape, u0), e)

    dU = _ns_rhs(field, eos, kappa)
    i = n_half
    u = u0
    drho = dU[0, i]
    drhoe = dU[-1, i] - u * dU[1, i] + 0.5 * u * u * drho
    de = (drhoe - e[i] * drho) / rho[i]
    ds = eos.entropy_derivs(rho[i], e[i])
    dsdt = float(ds.s_rho * drho + ds.s_e * de)

    lap = -2.0
    cert = Certificate("ns_entropy_rate", bool(-dsdt <= 1e-12), -dsdt, ((i,), 0.0), 1e-12)
    traj = None
    if march_steps > 0:
        if dt is None:
            c = float(np.sqrt(np.max(eos.sound_speed2(rho, e))))
            dt = 0.2 * min(h / (abs(u0) + c), h * h / (2 * max(kappa, 1e-300)) if kappa > 0 else np.inf)
        traj = Trajectory(grid, eos, far=field.far)
        zero = RegularizationCoeffs(0.0, 0.0, "zero")
        traj.append(field, zero)
        f = field
        for _ in range(march_steps):
            f = f.with_state(f.U + dt * _ns_rhs(f, eos, kappa), f.t + dt)
            traj.append(f, zero)
        traj.steps = march_steps
    return NSDemo(
        dsdt_at_origin=dsdt,
        reference=kappa * lap / rho[i],
        exact=kappa * lap / (rho[i] * T_star),
        laplacian_T0=lap,
        certificate=cert if traj is None else min_entropy_certificate(traj, name="ns_min_entropy"),
        field=field,
        trajectory=traj,
    )


def rigid_rotation_heating(eos, scheme="gp-regularized", coeffs: Optional[RegularizationCoeffs] = None, epsilon=0.0, omega=1.0, n=33):
    """Internal-energy production d(rho e)/dt at the centre of a rigid rotation u = omega (-y, x).

    rho = e = 1 on [-1, 1]^2. For ``scheme="parabolic"`` the monolithic
    viscosity epsilon is used, otherwise the regularized right-hand side with
    ``coeffs``. Rigid rotation has grad_s u = 0, so a frame-indifferent
    viscosity produces nothing; epsilon rho |grad u|^2 = 2 epsilon omega^2 is
    the parabolic value.
    """
    if n % 2 == 0:
        raise ValueError("n must be odd so that a cell sits at the centre")
    h = 2.0 / n
    grid = Grid((n, n), ((-1.0, 1.0), (-1.0, 1.0)), "farfield")
    X, Y = grid.mesh()
    field = ConservedField.from_primitive(grid, np.ones(grid.n), np.array([-omega * Y, omega * X]), np.ones(grid.n))
    if scheme == "parabolic":
        dU = rhs_parabolic(field, epsilon, eos)
    else:
        dU = rhs_regularized(field, coeffs, eos)
    c = n // 2
    # u = 0 at the centre, so d(rho e)/dt = dE/dt there
    return float(dU[-1, c, c])
