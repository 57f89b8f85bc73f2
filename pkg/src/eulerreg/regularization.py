"""
Viscous flux structure of the entropy-consistent regularization.

The regularized Euler system adds the fluxes

    f = a grad(rho)                                  (mass)
    g = G(grad_s u) + f (x) u                        (momentum)
    h = l - |u|^2 f / 2                              (energy, plus g.u)
    l = s_e^-1 (e s_e - rho s_rho) f + d rho s_e^-1 grad(s)

with a, d >= 0 and G : grad(u) >= 0. This module evaluates those fluxes
pointwise and the quadratic forms (J, N, M, S) that decide the minimum
entropy principle and the generalized entropy inequalities.

State arguments (rho, e, a, d) broadcast against each other; gradient
arguments carry one extra trailing axis of length ``dim`` and velocity
gradients two (``grad_u[..., i, j] = d_i u_j``).
"""

from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np

from .eos import EosModel, thermo_eval, h2_from_parts, EntropyDerivs
from .errors import DegenerateCoefficient, DomainError, EosConsistencyError

Coeff = Union[float, Callable]

GFORMS = ("parabolic", "symmetric", "zero")

#: relative agreement required between equivalent closed forms
IDENTITY_RTOL = 1e-12


def _field(c, rho, e):
    if callable(c):
        return np.asarray(c(rho, e), dtype=float)
    return np.asarray(c, dtype=float)


@dataclass(frozen=True)
class RegularizationCoeffs:
    """Coefficient fields a(rho, e), d(rho, e) and the momentum viscosity choice.

    ``gform`` selects G:

    * ``"parabolic"``: G = a rho grad(u) (the monolithic parabolic special case)
    * ``"symmetric"``: G = 2 mu rho grad_s(u) + lambda_visc rho div(u) I
    * ``"zero"``: G = 0

    If ``c0`` is set the coefficients are mesh scaled: d = c0 h max(|u|+c) and
    a = (1 - ratio_x) d, resolved by :meth:`resolve` once h and the wave speed
    are known.
    """

    a: Coeff = 0.0
    d: Coeff = 0.0
    gform: str = "parabolic"
    mu: Coeff = 0.0
    lambda_visc: Coeff = 0.0
    c0: Optional[float] = None
    ratio_x: Optional[float] = None

    def __post_init__(self):
        if self.gform not in GFORMS:
            raise ValueError(f"gform must be one of {GFORMS}, got {self.gform!r}")
        for name in ("a", "d", "mu"):
            v = getattr(self, name)
            if not callable(v) and v < 0:
                raise ValueError(f"{name} must be non-negative, got {v}")
        if self.c0 is not None and self.c0 < 0:
            raise ValueError("c0 must be non-negative")
        if self.ratio_x is not None and self.ratio_x > 1:
            raise ValueError("ratio_x = 1 - a/d must not exceed 1 (a >= 0)")

    @classmethod
    def from_ratio(cls, ratio_x, d, **kwargs):
        """Coefficients with x = 1 - a/d given and d a constant."""
        if ratio_x > 1:
            raise ValueError("ratio_x = 1 - a/d must not exceed 1 (a >= 0)")
        return cls(a=(1.0 - ratio_x) * d, d=d, ratio_x=ratio_x, **kwargs)

    @property
    def mesh_scaled(self):
        return self.c0 is not None

    def resolve(self, h, beta):
        """Freeze mesh-scaled coefficients for spacing ``h`` and wave speed ``beta``."""
        if not self.mesh_scaled:
            return self
        d = self.c0 * h * beta
        x = 0.0 if self.ratio_x is None else self.ratio_x
        return replace(self, a=(1.0 - x) * d, d=d, c0=None)

    def a_of(self, rho, e):
        if self.mesh_scaled:
            raise ValueError("mesh-scaled coefficients must be resolved first")
        return _field(self.a, rho, e)

    def d_of(self, rho, e):
        if self.mesh_scaled:
            raise ValueError("mesh-scaled coefficients must be resolved first")
        return _field(self.d, rho, e)

    def mu_of(self, rho, e):
        return _field(self.mu, rho, e)

    def lambda_of(self, rho, e):
        return _field(self.lambda_visc, rho, e)

    def check_dissipative(self, dim, rho=1.0, e=1.0):
        """Raise unless mu >= 0 and 2 mu + dim lambda_visc >= 0 at (rho, e)."""
        if self.gform != "symmetric":
            return
        mu = self.mu_of(rho, e)
        lam = self.lambda_of(rho, e)
        if np.any(mu < 0) or np.any(2 * mu + dim * lam < 0):
            raise ValueError("symmetric viscosity needs mu >= 0 and 2 mu + dim lambda_visc >= 0")


@dataclass(frozen=True)
class ViscousFluxes:
    f: np.ndarray
    Gtensor: np.ndarray
    l: np.ndarray
    g: np.ndarray
    h: np.ndarray


def momentum_viscosity(rho, e, grad_u, coeffs: RegularizationCoeffs):
    """The tensor G as a function of the velocity gradient."""
    grad_u = np.asarray(grad_u, dtype=float)
    rho = np.asarray(rho, dtype=float)
    e = np.asarray(e, dtype=float)
    ex = lambda v: np.asarray(v)[..., None, None]  # noqa: E731
    if coeffs.gform == "zero":
        return np.zeros_like(grad_u)
    if coeffs.gform == "parabolic":
        return ex(coeffs.a_of(rho, e) * rho) * grad_u
    mu = ex(coeffs.mu_of(rho, e) * rho)
    lam = ex(coeffs.lambda_of(rho, e) * rho)
    dim = grad_u.shape[-1]
    div = ex(np.trace(grad_u, axis1=-2, axis2=-1))
    return mu * (grad_u + np.swapaxes(grad_u, -1, -2)) + lam * div * np.eye(dim)


def _dot(x, y):
    return np.sum(x * y, axis=-1)


def viscous_fluxes(rho, e, u, grad_rho, grad_e, grad_u, coeffs: RegularizationCoeffs, eos: EosModel):
    """Evaluate f, G, l and the assembled g = G + f(x)u, h = l - |u|^2 f/2.

    l is computed from its defining form and cross-checked against the two
    equivalent rewritings (d-a) rho s_rho/s_e grad(rho) + a e grad(rho) + d rho grad(e)
    and (a-d)(p/rho + e) grad(rho) + d grad(rho e).
    """
    th = thermo_eval(rho, e, eos)
    rho = th.rho
    e = th.e
    a = coeffs.a_of(rho, e)
    d = coeffs.d_of(rho, e)
    gr = np.asarray(grad_rho, dtype=float)
    ge = np.asarray(grad_e, dtype=float)
    u = np.asarray(u, dtype=float)
    A = a[..., None]
    Dd = d[..., None]
    R = rho[..., None]
    E = e[..., None]
    se = th.s_e[..., None]
    sr = th.s_rho[..., None]

    f = A * gr
    grad_s = sr * gr + se * ge
    l = (E * se - R * sr) / se * f + Dd * R / se * grad_s
    l_alt = (Dd - A) * R * sr / se * gr + A * E * gr + Dd * R * ge
    l_pe = (A - Dd) * (th.p[..., None] / R + E) * gr + Dd * (E * gr + R * ge)
    scale = (np.abs(A * E * gr) + np.abs(Dd * R * ge) + np.abs((Dd - A) * R * sr / se * gr)).max(initial=0.0)
    if max(np.abs(l - l_alt).max(initial=0.0), np.abs(l - l_pe).max(initial=0.0)) > 1e3 * IDENTITY_RTOL * max(scale, 1e-300):
        raise EosConsistencyError("equivalent forms of the energy flux l disagree")

    G = momentum_viscosity(rho, e, grad_u, coeffs)
    g = G + f[..., :, None] * u[..., None, :]
    h = l - 0.5 * _dot(u, u)[..., None] * f
    return ViscousFluxes(f=f, Gtensor=G, l=l, g=g, h=h)


def n_matrix(rho, e, a, d, eos: EosModel):
    """The 2x2 coefficient matrix N2 with J = (grad rho, grad e) N (grad rho, grad e)^T."""
    th = thermo_eval(rho, e, eos)
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    r = th.rho
    k = r * th.s_rho / th.s_e
    n11 = (d - a) * k * th.s_rhoe + a * th.drho_rho2srho / r
    n12 = 0.5 * ((d - a) * k * th.s_ee + (d + a) * r * th.s_rhoe)
    n22 = d * r * th.s_ee
    n11, n12, n22 = np.broadcast_arrays(n11, n12, n22)
    return np.array([[n11, n12], [n12, n22]])


def quadratic_form_J(rho, e, grad_rho, grad_e, a, d, eos: EosModel):
    """J = -f . grad(e s_e - rho s_rho) + l . grad(s_e) + a grad(rho) . grad(s).

    Evaluated directly through the chain rule and again through N2; the two
    must agree to 1e-12 relative to the magnitude of the individual terms.
    """
    th = thermo_eval(rho, e, eos)
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    gr = np.asarray(grad_rho, dtype=float)
    ge = np.asarray(grad_e, dtype=float)
    ex = lambda v: np.asarray(v)[..., None]  # noqa: E731
    r, ee = ex(th.rho), ex(th.e)
    sr, se = ex(th.s_rho), ex(th.s_e)
    srr, sre, see = ex(th.s_rhorho), ex(th.s_rhoe), ex(th.s_ee)

    f = ex(a) * gr
    grad_se = sre * gr + see * ge
    grad_sr = srr * gr + sre * ge
    grad_s = sr * gr + se * ge
    l = (ee * se - r * sr) / se * f + ex(d) * r / se * grad_s
    grad_q = ge * se + ee * grad_se - gr * sr - r * grad_sr
    J = -_dot(f, grad_q) + _dot(l, grad_se) + ex(a)[..., 0] * _dot(gr, grad_s)

    N = n_matrix(rho, e, a, d, eos)
    J2 = N[0, 0] * _dot(gr, gr) + 2 * N[0, 1] * _dot(gr, ge) + N[1, 1] * _dot(ge, ge)
    scale = (
        np.abs(N[0, 0]) * _dot(gr, gr) + 2 * np.abs(N[0, 1] * _dot(gr, ge)) + np.abs(N[1, 1]) * _dot(ge, ge)
        + np.abs(_dot(f, grad_q)) + np.abs(_dot(l, grad_se))
    )
    if np.any(np.abs(J - J2) > IDENTITY_RTOL * 10 * scale):
        raise EosConsistencyError("J from its definition and from N2 disagree")
    return J


def q_matrix(rho, e, eos: EosModel):
    """Q2: the form (rho/s_e) grad(s_e) . grad(s) (N2 with a = 0, d = 1)."""
    return n_matrix(rho, e, 0.0, 1.0, eos)


def m_matrix(rho, e, a, d, lam, eos: EosModel):
    """M2 = N2 + lam d Q2."""
    return n_matrix(rho, e, a, d, eos) + np.asarray(lam) * np.asarray(d) * q_matrix(rho, e, eos)


@dataclass(frozen=True)
class MReport:
    lambda_: np.ndarray
    det_M2: np.ndarray
    m22: np.ndarray
    #: left side of ad det(Sigma) - (d-a)^2 rho^-2 s_e^2 p_e^2 / 4 (lambda = 0)
    j_criterion: np.ndarray
    #: J itself (lambda = 0) negative semi-definite
    negative_semidefinite: np.ndarray
    degenerate: bool = False


def _det_m2_closed(th, a, dprime):
    return a * dprime * th.detSigma - 0.25 * (dprime - a) ** 2 * th.s_e**2 * th.p_e**2 / th.rho**2


def m_matrix_check(rho, e, a, d, eos: EosModel, allow_degenerate=False) -> MReport:
    """Semi-definiteness analysis of J and of its lambda-shifted form.

    lambda is chosen so that d (1 + lambda) = a, which makes det(M2) =
    a^2 det(Sigma) >= 0 and m22 = a rho s_ee <= 0. With d = 0 that choice is
    impossible; pass ``allow_degenerate=True`` to get the lambda = 0 analysis
    only.
    """
    th = thermo_eval(rho, e, eos)
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    crit = _det_m2_closed(th, a, d)
    semidef = (d * th.s_ee <= 0) & (crit >= 0)
    if np.any(d == 0):
        if not allow_degenerate:
            raise DegenerateCoefficient("d = 0: lambda with d(1 + lambda) = a does not exist")
        return MReport(np.full(np.shape(crit), np.nan), crit, d * th.rho * th.s_ee, crit, semidef, True)
    lam = a / d - 1.0
    dprime = d * (1.0 + lam)
    return MReport(
        lambda_=lam,
        det_M2=_det_m2_closed(th, a, dprime),
        m22=dprime * th.rho * th.s_ee,
        j_criterion=crit,
        negative_semidefinite=semidef,
    )


@dataclass(frozen=True)
class SReport:
    S2: np.ndarray
    det_S2: np.ndarray
    det_closed: np.ndarray
    x: np.ndarray
    negative_semidefinite: np.ndarray


def s_matrix(rho, e, a, d, alpha, eos: EosModel) -> SReport:
    """The matrix S2^alpha deciding the generalized entropy inequality.

    With x = 1 - a/d, S2 = H2^alpha + x rho^-2 s_e [[p_rho, p_e/2], [p_e/2, 0]]
    and

        det(S2^alpha) = rho^-2 ((1-alpha) det(Sigma) (1-x) - x^2 rho^-2 s_e^2 p_e^2 / 4).

    The semi-definiteness decision uses s22 <= 0 together with the closed-form
    determinant (exactly zero when a = d and alpha = 1).
    """
    if np.any(np.asarray(alpha) > 1):
        raise ValueError("alpha must not exceed 1")
    th = thermo_eval(rho, e, eos)
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    if np.any(d == 0):
        raise DegenerateCoefficient("d = 0: x = 1 - a/d undefined")
    x = 1.0 - a / d
    der = EntropyDerivs(th.s, th.s_rho, th.s_e, th.s_rhorho, th.s_rhoe, th.s_ee)
    H = h2_from_parts(th.rho, der, th.drho_rho2srho, th.cp, alpha)
    w = x * th.s_e / th.rho**2
    s11 = H[0, 0] + w * th.p_rho
    s12 = H[0, 1] + 0.5 * w * th.p_e
    s22 = H[1, 1] + 0 * w
    s11, s12, s22 = np.broadcast_arrays(s11, s12, s22)
    S2 = np.array([[s11, s12], [s12, s22]])
    det = s11 * s22 - s12**2
    det_closed = (
        (1.0 - alpha) * th.detSigma * (1.0 - x) - 0.25 * x**2 * th.s_e**2 * th.p_e**2 / th.rho**2
    ) / th.rho**2
    return SReport(S2=S2, det_S2=det, det_closed=det_closed, x=x, negative_semidefinite=(s22 <= 0) & (det_closed >= 0))


def admissible_range(rho, e, alpha, eos: EosModel):
    """Interval of x = 1 - a/d for which S2^alpha is negative definite.

    Gamma = (1-alpha) det(Sigma) rho^2 s_e^-2 p_e^-2, Delta = Gamma (1 + Gamma),
    interval = (-2 Gamma - 2 sqrt(Delta), -2 Gamma + 2 sqrt(Delta)).
    For an ideal gas and alpha = 0 this is -(2/(gamma-1)) (1 +/- sqrt(gamma)).
    Returns (-inf, inf) where p_e = 0.
    """
    if np.any(np.asarray(alpha) > 1):
        raise ValueError("alpha must not exceed 1")
    th = thermo_eval(rho, e, eos)
    with np.errstate(divide="ignore", invalid="ignore"):
        gam = (1.0 - alpha) * th.detSigma * th.rho**2 / (th.s_e**2 * th.p_e**2)
        root = 2.0 * np.sqrt(gam * (1.0 + gam))
        # + 0.0 turns the -0.0 of the collapsed interval into 0.0
        lo = np.where(th.p_e == 0, -np.inf, -2.0 * gam - root) + 0.0
        hi = np.where(th.p_e == 0, np.inf, -2.0 * gam + root)
    if np.ndim(lo) == 0:
        return float(lo), float(hi)
    return lo, hi


def gamma_coefficient(rho, e, alpha, eos: EosModel):
    """Gamma = (1-alpha) det(Sigma) rho^2 s_e^-2 p_e^-2."""
    th = thermo_eval(rho, e, eos)
    return (1.0 - alpha) * th.detSigma * th.rho**2 / (th.s_e**2 * th.p_e**2)


def mass_velocity(u, rho, f):
    """u_m = u - f / rho."""
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0)):
        raise DomainError("density must be positive")
    return np.asarray(u, dtype=float) - np.asarray(f, dtype=float) / rho[..., None]
