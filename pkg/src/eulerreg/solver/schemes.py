"""
Semi-discrete right-hand sides on uniform grids.

Every scheme is written in flux form on cell faces so that periodic runs
conserve mass, momentum and total energy to round-off. Convective fluxes are
centred (the face value is the mean of the two adjacent cell fluxes, which is
the second-order centred difference). Viscous fluxes use compact face
gradients ``(q_R - q_L)/h`` with arithmetic-mean face coefficients, i.e.
``div(k grad q)_i = (k_{i+1/2}(q_{i+1}-q_i) - k_{i-1/2}(q_i-q_{i-1}))/h^2``.
Tangential derivatives needed by the symmetric viscosity in 2D are centred
cell differences averaged onto the face.

No upwinding or limiting is applied anywhere; all stabilisation comes from
the regularization itself.
"""

import numpy as np

from ..errors import NonAdmissibleState
from ..regularization import RegularizationCoeffs
from .grid import ConservedField, face_slices, interior, pad

FORMS = ("conservative", "brenner")
L_FORMS = ("split", "entropy")


def primitives(P):
    """rho, u (leading axis dim), E, e from a conserved array (any spatial shape)."""
    rho = P[0]
    u = P[1:-1] / rho
    E = P[-1]
    e = E / rho - 0.5 * np.sum(u * u, axis=0)
    return rho, u, E, e


def check_positive(rho, e):
    """Raise NonAdmissibleState at the first cell with rho <= 0 or e <= 0."""
    bad = ~((rho > 0) & (e > 0))
    if np.any(bad):
        idx = np.unravel_index(int(np.flatnonzero(bad)[0]), rho.shape)
        raise NonAdmissibleState(
            f"non-admissible state at cell {tuple(int(i) for i in idx)}: "
            f"rho={float(rho[idx]):.6g}, e={float(e[idx]):.6g}",
            where=tuple(int(i) for i in idx),
        )


def euler_flux(rho, u, E, p, axis):
    """Exact Euler flux along ``axis``; shape ``(dim+2,) + rho.shape``."""
    dim = u.shape[0]
    F = np.empty((dim + 2,) + np.shape(rho))
    mk = rho * u[axis]
    F[0] = mk
    for j in range(dim):
        F[1 + j] = mk * u[j]
    F[1 + axis] += p
    F[-1] = u[axis] * (E + p)
    return F


def max_wave_speed(field: ConservedField, eos):
    """beta = max over cells of |u| + c."""
    rho, u, _, e = primitives(field.U)
    c = np.sqrt(np.maximum(eos.sound_speed2(rho, e), 0.0))
    return float(np.max(np.sqrt(np.sum(u * u, axis=0)) + c))


def resolve_coeffs(coeffs: RegularizationCoeffs, field: ConservedField, eos):
    """Freeze mesh-scaled coefficients against the current field."""
    if not coeffs.mesh_scaled:
        return coeffs
    return coeffs.resolve(max(field.grid.h), max_wave_speed(field, eos))


class _Faces:
    """Face averaging and differencing helpers for one axis of a padded array."""

    def __init__(self, dim, axis, h):
        self.dim = dim
        self.axis = axis
        self.h = h
        left, right = face_slices(dim, axis)
        self.L = (Ellipsis,) + left
        self.R = (Ellipsis,) + right

    def avg(self, q):
        q = np.asarray(q)
        if q.ndim == 0:
            return q
        return 0.5 * (q[self.L] + q[self.R])

    def dn(self, q):
        return (q[self.R] - q[self.L]) / self.h[self.axis]

    def tangential(self, q, j):
        """d q / d x_j at faces normal to ``axis`` (j != axis)."""
        dim, k = self.dim, self.axis
        plus, minus = [], []
        for ax in range(dim):
            if ax == j:
                plus.append(slice(2, None))
                minus.append(slice(0, -2))
            elif ax == k:
                plus.append(slice(None))
                minus.append(slice(None))
            else:
                plus.append(slice(1, -1))
                minus.append(slice(1, -1))
        T = (q[(Ellipsis,) + tuple(plus)] - q[(Ellipsis,) + tuple(minus)]) / (2 * self.h[j])
        lo = [slice(None)] * dim
        hi = [slice(None)] * dim
        lo[k] = slice(0, -1)
        hi[k] = slice(1, None)
        return 0.5 * (T[(Ellipsis,) + tuple(lo)] + T[(Ellipsis,) + tuple(hi)])

    def grad_row(self, q, i):
        """Component i of grad(q) at the faces."""
        return self.dn(q) if i == self.axis else self.tangential(q, i)


def _g_row(fc: _Faces, gform, u, rho_b, a_b, mu_b, lam_b):
    """Row ``axis`` of the momentum viscosity G at faces, shape (dim, faces)."""
    dim, k = fc.dim, fc.axis
    du_k = fc.dn(u)  # d_k u_j for all j
    if gform == "zero":
        return np.zeros_like(du_k)
    if gform == "parabolic":
        return a_b * rho_b * du_k
    G = np.empty_like(du_k)
    div = sum(fc.grad_row(u[i], i) for i in range(dim))
    for j in range(dim):
        dj_uk = du_k[k] if j == k else fc.tangential(u[k], j)
        G[j] = mu_b * rho_b * (du_k[j] + dj_uk)
    G[k] += lam_b * rho_b * div
    return G


def _coeff_cells(coeffs, rho, e):
    shape = rho.shape
    a = np.broadcast_to(coeffs.a_of(rho, e), shape)
    d = np.broadcast_to(coeffs.d_of(rho, e), shape)
    mu = np.broadcast_to(coeffs.mu_of(rho, e), shape)
    lam = np.broadcast_to(coeffs.lambda_of(rho, e), shape)
    return a, d, mu, lam


def _divergence(fluxes, grid):
    out = 0.0
    for k, F in enumerate(fluxes):
        out = out + np.diff(F, axis=1 + k) / grid.h[k]
    return out


def rhs_regularized(field: ConservedField, coeffs: RegularizationCoeffs, eos, form="conservative", l_form="split", source=None):
    """Tendency dU/dt of the regularized Euler system.

    ``form="conservative"`` discretizes the balance laws with fluxes f, g =
    G + f(x)u and h = l - |u|^2 f/2; ``form="brenner"`` discretizes the
    equivalent two-velocity form with u_m = u - a grad(log rho) and
    q = (a-d) p grad(log rho) + d rho grad(e).

    ``l_form`` selects the face discretization of l in the conservative
    form: ``"split"`` uses (d-a) rho s_rho/s_e grad(rho) + a e grad(rho) + d rho grad(e),
    which keeps u and p exactly uniform across a contact when a = d;
    ``"entropy"`` uses s_e^-1 (e s_e - rho s_rho) f + d rho s_e^-1 grad(s).

    ``source(t, grid)``, if given, is added to the tendency.
    """
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    if l_form not in L_FORMS:
        raise ValueError(f"l_form must be one of {L_FORMS}")
    grid = field.grid
    dim = grid.dim
    check_positive(field.rho, field.e)
    coeffs = resolve_coeffs(coeffs, field, eos)

    P = pad(field.U, grid, field.far)
    rho, u, E, e = primitives(P)
    p = eos.pressure(rho, e)
    a, d, mu, lam = _coeff_cells(coeffs, rho, e)
    if form == "conservative":
        ds = eos.entropy_derivs(rho, e)
        if l_form == "split":
            w_rho = rho * ds.s_rho / ds.s_e
        else:
            w_rho = (e * ds.s_e - rho * ds.s_rho) / ds.s_e
            w_s = rho / ds.s_e
    u2 = np.sum(u * u, axis=0)

    fluxes = []
    for k in range(dim):
        fc = _Faces(dim, k, grid.h)
        a_b, d_b, rho_b = fc.avg(a), fc.avg(d), fc.avg(rho)
        u_b = fc.avg(u)
        G = _g_row(fc, coeffs.gform, u, rho_b, a_b, fc.avg(mu), fc.avg(lam))
        conv = fc.avg(euler_flux(rho, u, E, p, k))
        if form == "conservative":
            f = a_b * fc.dn(rho)
            if l_form == "split":
                l = (d_b - a_b) * fc.avg(w_rho) * fc.dn(rho) + a_b * fc.avg(e) * fc.dn(rho) + d_b * rho_b * fc.dn(e)
            else:
                l = fc.avg(w_rho) * f + d_b * fc.avg(w_s) * fc.dn(ds.s)
            visc = np.empty_like(conv)
            visc[0] = f
            visc[1:-1] = G + f * u_b
            visc[-1] = l + 0.5 * fc.avg(u2) * f + np.sum(G * u_b, axis=0)
            fluxes.append(conv - visc)
        else:
            glog = fc.dn(np.log(rho))
            drift = a_b * glog
            q = (a_b - d_b) * fc.avg(p) * glog + d_b * rho_b * fc.dn(e)
            F = conv.copy()
            F[0] -= drift * rho_b
            F[1:-1] -= drift * fc.avg(P[1:-1]) + G
            F[-1] -= drift * fc.avg(E) + q + np.sum(G * u_b, axis=0)
            fluxes.append(F)

    dU = -_divergence(fluxes, grid)
    if source is not None:
        dU = dU + source(field.t, grid)
    return dU


def rhs_parabolic(field: ConservedField, epsilon, eos, source=None):
    """Tendency of the monolithic parabolic regularization: centred Euler fluxes plus eps Laplacian(U)."""
    if np.any(np.asarray(epsilon) < 0):
        raise ValueError("epsilon must be non-negative")
    grid = field.grid
    check_positive(field.rho, field.e)
    P = pad(field.U, grid, field.far)
    rho, u, E, e = primitives(P)
    p = eos.pressure(rho, e)
    fluxes = []
    for k in range(grid.dim):
        fc = _Faces(grid.dim, k, grid.h)
        fluxes.append(fc.avg(euler_flux(rho, u, E, p, k)) - epsilon * fc.dn(P))
    dU = -_divergence(fluxes, grid)
    if source is not None:
        dU = dU + source(field.t, grid)
    return dU


def parabolic_step(field: ConservedField, dt, epsilon, eos, check=True):
    """One forward-Euler step of the parabolic scheme."""
    U = field.U + dt * rhs_parabolic(field, epsilon, eos)
    out = field.with_state(U, field.t + dt)
    if check:
        check_positive(out.rho, out.e)
    return out


def lax_step(field: ConservedField, dt, eos, check=True):
    """One step of the Lax scheme U_i <- (U_{i+1} + U_{i-1})/2 - dt/(2h) (F_{i+1} - F_{i-1})."""
    grid = field.grid
    if grid.dim != 1:
        raise ValueError("the Lax scheme is implemented in 1D only")
    P = pad(field.U, grid, field.far)
    rho, u, E, e = primitives(P)
    F = euler_flux(rho, u, E, eos.pressure(rho, e), 0)
    lam = dt / grid.h[0]
    U = 0.5 * (P[:, 2:] + P[:, :-2]) - 0.5 * lam * (F[:, 2:] - F[:, :-2])
    out = field.with_state(U, field.t + dt)
    if check:
        check_positive(out.rho, out.e)
    return out


def lax_epsilon(grid, dt):
    """Artificial viscosity h^2/(2 dt) of the Lax scheme."""
    return 0.5 * grid.h[0] ** 2 / dt


__all__ = [
    "rhs_regularized",
    "rhs_parabolic",
    "parabolic_step",
    "lax_step",
    "lax_epsilon",
    "euler_flux",
    "primitives",
    "max_wave_speed",
    "resolve_coeffs",
    "check_positive",
    "interior",
]
