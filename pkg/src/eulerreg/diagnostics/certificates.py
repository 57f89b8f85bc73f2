"""
Pass/fail certificates evaluated on solver trajectories.

A certificate reduces a trajectory to one worst-case number and compares it
with a tolerance: ``passed`` is ``worst <= tol`` (strictly ``worst < tol``
for positivity, whose tolerance is 0).
"""

from dataclasses import dataclass, field as dc_field
import numpy as np

from ..eos import thermo_eval
from ..solver.grid import pad
from ..solver.schemes import _Faces, primitives
from ..solver.stepping import Trajectory
from .entropies import EntropyFamily

#: calibrated constant of the entropy-residual tolerance C (h + dt), see tests
RESIDUAL_C = 1.0


@dataclass
class Certificate:
    name: str
    passed: bool
    worst: float
    where: tuple
    tol: float
    extra: dict = dc_field(default_factory=dict)

    def line(self):
        """``name,pass,worst,where,tol`` with ``where`` as ``cell@t``."""
        cell, t = self.where
        cell_s = "-".join(str(int(c)) for c in cell) if cell is not None else ""
        return f"{self.name},{'pass' if self.passed else 'fail'},{self.worst:.17g},{cell_s}@{t:.17g},{self.tol:.17g}"


def _cell(idx, shape):
    return tuple(int(i) for i in np.unravel_index(int(idx), shape))


def min_entropy_certificate(trajectory: Trajectory, tol=None, name="min_entropy") -> Certificate:
    """min_x s(x, t) >= min_x s(x, 0) - tol at every recorded time.

    ``worst`` is max_t (min s(0) - min s(t)); the default tolerance is
    ``1e-8 |min s(0)| + 1e-12``.
    """
    s0 = float(np.min(trajectory.entropy(0)))
    if tol is None:
        tol = 1e-8 * abs(s0) + 1e-12
    worst, where = -np.inf, (None, trajectory.times[0])
    for i in range(len(trajectory)):
        s = trajectory.entropy(i)
        k = int(np.argmin(s))
        v = s0 - float(s.flat[k])
        if v > worst:
            worst, where = v, (_cell(k, s.shape), trajectory.times[i])
    return Certificate(name, bool(worst <= tol), float(worst), where, float(tol))


def positivity_certificate(trajectory: Trajectory, name="positivity") -> Certificate:
    """rho > 0 and e > 0 everywhere; ``worst`` is minus the smallest of min rho, min e."""
    worst, where = -np.inf, (None, trajectory.times[0])
    for i in range(len(trajectory)):
        rho, _, e = trajectory.primitive(i)
        for q in (rho, e):
            k = int(np.nanargmin(q)) if not np.all(np.isnan(q)) else 0
            v = -float(q.flat[k]) if not np.isnan(q).any() else np.inf
            if v > worst:
                worst, where = v, (_cell(k, q.shape), trajectory.times[i])
    return Certificate(name, bool(worst < 0.0), float(worst), where, 0.0)


def _coeff(c, rho, e):
    return np.broadcast_to(np.asarray(c(rho, e) if callable(c) else c, dtype=float), rho.shape)


def _divergences(U, grid, far, eos, family, a, d):
    """Cell divergence of the primary flux and of its u-tilde rewrite."""
    rho, u, _, e = primitives(pad(U, grid, far))
    fs = family.f(eos.entropy(rho, e))
    rf = rho * fs
    ac, dc = _coeff(a, rho, e), _coeff(d, rho, e)
    prim, alt = 0.0, 0.0
    for k in range(grid.dim):
        fc = _Faces(grid.dim, k, grid.h)
        ab, db = fc.avg(ac), fc.avg(dc)
        F = fc.avg(u[k] * rf) - db * fc.avg(rho) * fc.dn(fs) - ab * fc.avg(fs) * fc.dn(rho)
        ut = fc.avg(u[k]) + (db - ab) * fc.dn(np.log(rho))
        Ft = ut * fc.avg(rf) - db * fc.dn(rf)
        prim = prim + np.diff(F, axis=k) / grid.h[k]
        alt = alt + np.diff(Ft, axis=k) / grid.h[k]
    return prim, alt


def entropy_inequality_residual(
    trajectory: Trajectory,
    family: EntropyFamily,
    a=None,
    d=None,
    C=RESIDUAL_C,
    tol=None,
    check_family=True,
    name=None,
) -> Certificate:
    """Discrete residual of d_t(rho f) + div(u rho f - d rho grad f - a f grad rho) >= 0.

    Between consecutive recorded states n, n+1 the residual is the forward
    difference of rho f(s) plus the trapezoidal average of the flux
    divergences at n and n+1 (centred convective flux, compact viscous
    fluxes with arithmetic-mean face coefficients). The trajectory must be
    recorded every step.

    ``a`` and ``d`` default to the coefficients stored with each step. The
    certificate passes iff the residual is >= -tol everywhere with
    tol = C (h + dt_max) max(rho (|f(s)| + |f'(s)|)) over the initial state.

    ``extra["alt_diff"]`` is the largest difference between this residual and
    the one built from the rewritten flux rho f u~ - d grad(rho f),
    u~ = u + (d - a) grad(log rho); the two agree to truncation order.

    Raises
    ------
    FamilyNotGeneralized
        If ``check_family`` and the family fails f' > 0, f'/c_p - f'' > 0
        on any recorded state.
    """
    eos = trajectory.eos
    grid = trajectory.grid
    name = name or f"entropy_{family.name}"
    if check_family:
        for i in range(len(trajectory)):
            rho, _, e = trajectory.primitive(i)
            family.check_generalized(eos.entropy(rho, e), thermo_eval(rho, e, eos).cp)
    rho0, _, e0 = trajectory.primitive(0)
    s0 = eos.entropy(rho0, e0)
    scale = float(np.max(rho0 * (np.abs(family.f(s0)) + np.abs(family.fp(s0)))))
    times = trajectory.times
    dts = np.diff(times)
    if len(trajectory) < 2:
        tol = 0.0 if tol is None else tol
        return Certificate(name, True, 0.0, (None, times[0]), float(tol), {"alt_diff": 0.0})
    if tol is None:
        tol = C * (max(grid.h) + float(np.max(dts))) * scale
    worst, where, alt_diff = -np.inf, (None, times[0]), 0.0
    for n in range(len(trajectory) - 1):
        co = trajectory.coeffs[n]
        an = co.a if a is None else a
        dn = co.d if d is None else d
        Un, Um = trajectory.states[n], trajectory.states[n + 1]
        Dn = _divergences(Un, grid, trajectory.far, eos, family, an, dn)
        Dm = _divergences(Um, grid, trajectory.far, eos, family, an, dn)
        rf = []
        for U in (Un, Um):
            rho, _, _, e = primitives(U)
            rf.append(rho * family.f(eos.entropy(rho, e)))
        dt = dts[n]
        R = (rf[1] - rf[0]) / dt + 0.5 * (Dn[0] + Dm[0])
        Rt = (rf[1] - rf[0]) / dt + 0.5 * (Dn[1] + Dm[1])
        alt_diff = max(alt_diff, float(np.max(np.abs(R - Rt))))
        k = int(np.argmin(R))
        v = -float(R.flat[k])
        if v > worst:
            worst, where = v, (_cell(k, R.shape), times[n])
    return Certificate(name, bool(worst <= tol), float(worst), where, float(tol), {"alt_diff": alt_diff, "scale": scale})
