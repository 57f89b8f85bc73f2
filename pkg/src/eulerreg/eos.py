"""
Equation of state built from a specific entropy s(rho, e).

Everything thermodynamic is derived from s and its first and second partial
derivatives: pressure from ``p s_e + rho^2 s_rho = 0``, temperature from
``T = 1/s_e``, and the sound speed, heat capacity and the matrices Sigma and
H2 from the identities collected below. All functions accept scalars or numpy
arrays and broadcast elementwise.

All quantities are nondimensional.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, EosConsistencyError, NonAdmissibleState

#: relative tolerance for the permanent det(Sigma) self-check
DET_SIGMA_RTOL = 1e-10


class EntropyDerivs(NamedTuple):
    """s and its partials up to second order at one (rho, e)."""

    s: np.ndarray
    s_rho: np.ndarray
    s_e: np.ndarray
    s_rhorho: np.ndarray
    s_rhoe: np.ndarray
    s_ee: np.ndarray


class EosModel:
    """Base class: an equation of state given through its specific entropy.

    Subclasses implement :meth:`entropy_derivs`. The remaining methods are
    generic and only use that evaluator, so a user-supplied entropy gets the
    full machinery for free.
    """

    kind = "abstract"

    def entropy_derivs(self, rho, e) -> EntropyDerivs:
        raise NotImplementedError

    def entropy(self, rho, e):
        return self.entropy_derivs(rho, e).s

    def pressure(self, rho, e):
        d = self.entropy_derivs(rho, e)
        return -rho**2 * d.s_rho / d.s_e

    def temperature(self, rho, e):
        return 1.0 / self.entropy_derivs(rho, e).s_e

    def sound_speed2(self, rho, e):
        d = self.entropy_derivs(rho, e)
        dr = 2 * rho * d.s_rho + rho**2 * d.s_rhorho
        return rho**2 / d.s_e**3 * (
            2 * d.s_e * d.s_rho * d.s_rhoe - d.s_e**2 * dr / rho**2 - d.s_rho**2 * d.s_ee
        )

    def internal_energy(self, rho, p, e_guess=1.0, rtol=1e-14, maxiter=100):
        """Invert p(rho, e) = p for e by Newton iteration on e."""
        rho = np.asarray(rho, dtype=float)
        p = np.asarray(p, dtype=float)
        e = np.broadcast_to(np.asarray(e_guess, dtype=float), np.broadcast(rho, p).shape).copy()
        for _ in range(maxiter):
            th = _derive(rho, e, self.entropy_derivs(rho, e))
            step = (th["p"] - p) / th["p_e"]
            e_new = e - step
            # Newton may overshoot into e <= 0 from a poor guess
            e_new = np.where(e_new > 0, e_new, 0.5 * e)
            if np.all(np.abs(e_new - e) <= rtol * np.abs(e_new)):
                return e_new if e_new.ndim else float(e_new)
            e = e_new
        raise DomainError("internal_energy: Newton iteration did not converge")

    def state_from_entropy_temperature(self, s, T, guess=(1.0, 1.0), rtol=1e-13, maxiter=100):
        """Return (rho, e) with s(rho, e) = s and T(rho, e) = T.

        Requires p_e != 0 so that (T, s) are valid coordinates.
        """
        s = np.asarray(s, dtype=float)
        T = np.asarray(T, dtype=float)
        shape = np.broadcast(s, T).shape
        rho = np.full(shape, float(guess[0]))
        e = np.full(shape, float(guess[1]))
        for _ in range(maxiter):
            d = self.entropy_derivs(rho, e)
            T_e = -d.s_ee / d.s_e**2
            T_rho = -d.s_rhoe / d.s_e**2
            r1 = d.s - s
            r2 = 1.0 / d.s_e - T
            det = d.s_rho * T_e - d.s_e * T_rho
            drho = (r1 * T_e - d.s_e * r2) / det
            de = (d.s_rho * r2 - T_rho * r1) / det
            rho_new = np.where(rho - drho > 0, rho - drho, 0.5 * rho)
            e_new = np.where(e - de > 0, e - de, 0.5 * e)
            done = np.all(np.abs(rho_new - rho) <= rtol * rho_new) and np.all(
                np.abs(e_new - e) <= rtol * e_new
            )
            rho, e = rho_new, e_new
            if done:
                return rho, e
        raise DomainError("state_from_entropy_temperature: Newton iteration did not converge")


@dataclass(frozen=True)
class IdealGas(EosModel):
    """Polytropic ideal gas, s = log(e^(1/(gamma-1)) / rho)."""

    gamma: float = 1.4
    kind = "ideal"

    def __post_init__(self):
        if not self.gamma > 1:
            raise DomainError(f"gamma must exceed 1, got {self.gamma}")

    def entropy_derivs(self, rho, e):
        k = self.gamma - 1.0
        rho = np.asarray(rho, dtype=float)
        e = np.asarray(e, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.log(e) / k - np.log(rho)
        return EntropyDerivs(
            s=s,
            s_rho=-1.0 / rho,
            s_e=1.0 / (k * e),
            s_rhorho=1.0 / rho**2,
            s_rhoe=np.zeros(np.broadcast(rho, e).shape),
            s_ee=-1.0 / (k * e**2),
        )

    def pressure(self, rho, e):
        return (self.gamma - 1.0) * np.asarray(rho) * np.asarray(e)

    def temperature(self, rho, e):
        return (self.gamma - 1.0) * np.asarray(e, dtype=float) + 0.0 * np.asarray(rho)

    def sound_speed2(self, rho, e):
        return self.gamma * (self.gamma - 1.0) * np.asarray(e, dtype=float) + 0.0 * np.asarray(rho)

    def internal_energy(self, rho, p, e_guess=None, rtol=None, maxiter=None):
        return np.asarray(p, dtype=float) / ((self.gamma - 1.0) * np.asarray(rho, dtype=float))

    def state_from_entropy_temperature(self, s, T, guess=None, rtol=None, maxiter=None):
        k = self.gamma - 1.0
        e = np.asarray(T, dtype=float) / k
        rho = e ** (1.0 / k) * np.exp(-np.asarray(s, dtype=float))
        return rho, e


@dataclass(frozen=True)
class UserEos(EosModel):
    """Equation of state from a user callable.

    ``derivs(rho, e)`` must return the six-tuple
    ``(s, s_rho, s_e, s_rhorho, s_rhoe, s_ee)``. Check it with
    :func:`derivative_check` before trusting it.
    """

    derivs: Callable
    name: str = "user"
    kind = "user"

    def entropy_derivs(self, rho, e):
        out = self.derivs(np.asarray(rho, dtype=float), np.asarray(e, dtype=float))
        shape = np.broadcast(rho, e).shape
        return EntropyDerivs(*(np.broadcast_to(np.asarray(v, dtype=float), shape) for v in out))


@dataclass(frozen=True)
class ThermoDerivs:
    """Pointwise thermodynamic quantities derived from s at (rho, e)."""

    rho: np.ndarray
    e: np.ndarray
    s: np.ndarray
    s_rho: np.ndarray
    s_e: np.ndarray
    s_rhorho: np.ndarray
    s_rhoe: np.ndarray
    s_ee: np.ndarray
    #: d/drho (rho^2 s_rho)
    drho_rho2srho: np.ndarray
    p: np.ndarray
    T: np.ndarray
    p_rho: np.ndarray
    p_e: np.ndarray
    T_rho: np.ndarray
    T_e: np.ndarray
    c2: np.ndarray
    cp: np.ndarray
    sigma: np.ndarray
    detSigma: np.ndarray
    h2: np.ndarray


@dataclass(frozen=True)
class AdmissibilityReport:
    convex: np.ndarray
    positiveT: np.ndarray
    hyperbolic: np.ndarray
    cpTe: np.ndarray

    @property
    def ok(self):
        return bool(np.all(self.convex) and np.all(self.positiveT))


def _check_domain(rho, e):
    rho = np.asarray(rho, dtype=float)
    e = np.asarray(e, dtype=float)
    if np.any(~(rho > 0)):
        raise DomainError("density must be positive")
    if np.any(~(e > 0)):
        raise DomainError("internal energy must be positive")
    return rho, e


def _derive(rho, e, d):
    """Raw thermodynamic algebra from entropy derivatives, no checks."""
    D = 2 * rho * d.s_rho + rho**2 * d.s_rhorho
    p = -rho**2 * d.s_rho / d.s_e
    p_e = rho**2 / d.s_e**2 * (d.s_rho * d.s_ee - d.s_e * d.s_rhoe)
    p_rho = (rho**2 * d.s_rho * d.s_rhoe - d.s_e * D) / d.s_e**2
    T_e = -d.s_ee / d.s_e**2
    T_rho = -d.s_rhoe / d.s_e**2
    c2 = p_rho - d.s_rho / d.s_e * p_e
    jac = p_rho * T_e - p_e * T_rho
    cp = (p_rho * d.s_e - p_e * d.s_rho) / (d.s_e * jac)
    return dict(D=D, p=p, p_e=p_e, p_rho=p_rho, T_e=T_e, T_rho=T_rho, c2=c2, cp=cp, jac=jac)


def _convexity(rho, d, D):
    """The three strict inequalities of convexity of -s in (1/rho, e)."""
    return (D < 0) & (d.s_ee < 0) & (D * d.s_ee - rho**2 * d.s_rhoe**2 > 0)


def _where(mask):
    bad = np.flatnonzero(~np.asarray(mask))
    return int(bad[0]) if np.ndim(mask) else None


def h2_from_parts(rho, d, D, cp, alpha=1.0):
    """Assemble H2^alpha (shape (2, 2) + broadcast shape)."""
    w = alpha / cp
    h11 = w * d.s_rho**2 + D / rho**2
    h12 = w * d.s_rho * d.s_e + d.s_rhoe
    h22 = w * d.s_e**2 + d.s_ee
    return np.array([[h11, h12], [h12, h22]])


def thermo_eval(rho, e, eos: EosModel) -> ThermoDerivs:
    """Evaluate every thermodynamic quantity of ``eos`` at (rho, e).

    Raises
    ------
    DomainError
        If rho <= 0 or e <= 0.
    NonAdmissibleState
        If s_e <= 0 or -s is not strictly convex at the state.
    EosConsistencyError
        If det(Sigma) computed directly and through
        ``s_e^3 (p_rho T_e - p_e T_rho)`` disagree beyond 1e-10 (relative).
    """
    rho, e = _check_domain(rho, e)
    d = eos.entropy_derivs(rho, e)
    if np.any(~(d.s_e > 0)):
        raise NonAdmissibleState("non-positive temperature (s_e <= 0)", _where(d.s_e > 0))
    t = _derive(rho, e, d)
    D = t["D"]
    convex = _convexity(rho, d, D)
    if np.any(~convex):
        raise NonAdmissibleState("-s is not strictly convex at this state", _where(convex))

    sigma = np.array([[D / rho, rho * d.s_rhoe], [rho * d.s_rhoe, rho * d.s_ee]])
    det_direct = sigma[0, 0] * sigma[1, 1] - sigma[0, 1] ** 2
    det_chain = d.s_e**3 * t["jac"]
    scale = np.abs(D * d.s_ee) + np.abs(rho**2 * d.s_rhoe**2)
    if np.any(np.abs(det_direct - det_chain) > DET_SIGMA_RTOL * scale):
        raise EosConsistencyError("det(Sigma) self-check failed; entropy derivatives inconsistent")

    return ThermoDerivs(
        rho=rho,
        e=e,
        s=d.s,
        s_rho=d.s_rho,
        s_e=d.s_e,
        s_rhorho=d.s_rhorho,
        s_rhoe=d.s_rhoe,
        s_ee=d.s_ee,
        drho_rho2srho=D,
        p=t["p"],
        T=1.0 / d.s_e,
        p_rho=t["p_rho"],
        p_e=t["p_e"],
        T_rho=t["T_rho"],
        T_e=t["T_e"],
        c2=t["c2"],
        cp=t["cp"],
        sigma=sigma,
        detSigma=det_direct,
        h2=h2_from_parts(rho, d, D, t["cp"]),
    )


def h2_matrix(derivs: ThermoDerivs, alpha=1.0):
    """H2^alpha: the H2 matrix with 1/c_p replaced by alpha/c_p.

    alpha = 1 gives the degenerate matrix (det = 0, h22 < 0); alpha = 0 gives
    rho^-2 Sigma-like matrix with det = rho^-2 det(Sigma).
    """
    if np.any(np.asarray(alpha) > 1):
        raise ValueError("alpha must not exceed 1")
    d = EntropyDerivs(derivs.s, derivs.s_rho, derivs.s_e, derivs.s_rhorho, derivs.s_rhoe, derivs.s_ee)
    return h2_from_parts(derivs.rho, d, derivs.drho_rho2srho, derivs.cp, alpha)


def check_admissibility(rho, e, eos: EosModel) -> AdmissibilityReport:
    """Report convexity, positive temperature, hyperbolicity and c_p T_e; never raises."""
    rho = np.asarray(rho, dtype=float)
    e = np.asarray(e, dtype=float)
    with np.errstate(all="ignore"):
        d = eos.entropy_derivs(rho, e)
        t = _derive(rho, e, d)
        convex = _convexity(rho, d, t["D"]) & (rho > 0) & (e > 0)
        return AdmissibilityReport(
            convex=convex,
            positiveT=d.s_e > 0,
            hyperbolic=t["c2"] > 0,
            cpTe=t["cp"] * t["T_e"],
        )


def derivative_check(eos: EosModel, rho, e, h0=1e-2, levels=3):
    """Compare the analytic entropy derivatives against centered differences of s.

    Steps are relative (h0*rho, h0*e) and halved ``levels`` times. Returns a
    dict mapping derivative name to ``(errors, orders)`` where ``orders`` are
    the observed convergence rates between successive levels.
    """
    rho = float(rho)
    e = float(e)
    exact = eos.entropy_derivs(rho, e)
    s = lambda r, ee: float(eos.entropy(r, ee))  # noqa: E731
    errs = {k: [] for k in ("s_rho", "s_e", "s_rhorho", "s_rhoe", "s_ee")}
    for lev in range(levels + 1):
        hr = h0 * rho / 2**lev
        he = h0 * e / 2**lev
        s0 = s(rho, e)
        fd = {
            "s_rho": (s(rho + hr, e) - s(rho - hr, e)) / (2 * hr),
            "s_e": (s(rho, e + he) - s(rho, e - he)) / (2 * he),
            "s_rhorho": (s(rho + hr, e) - 2 * s0 + s(rho - hr, e)) / hr**2,
            "s_ee": (s(rho, e + he) - 2 * s0 + s(rho, e - he)) / he**2,
            "s_rhoe": (
                s(rho + hr, e + he) - s(rho + hr, e - he) - s(rho - hr, e + he) + s(rho - hr, e - he)
            )
            / (4 * hr * he),
        }
        for k, v in fd.items():
            errs[k].append(abs(v - float(getattr(exact, k))))
    out = {}
    for k, v in errs.items():
        v = np.array(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            orders = np.log2(v[:-1] / v[1:])
        out[k] = (v, orders)
    return out
