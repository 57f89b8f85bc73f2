"""Explicit method-of-lines time integration and trajectory recording."""

from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..errors import NonAdmissibleState, StepFailure
from ..regularization import RegularizationCoeffs
from .grid import ConservedField, Grid
from .schemes import (
    L_FORMS,
    check_positive,
    lax_step,
    primitives,
    resolve_coeffs,
    rhs_parabolic,
    rhs_regularized,
)

SCHEMES = ("gp-regularized", "gp-brenner", "lax", "parabolic")
INTEGRATORS = ("forward-euler", "ssp-rk2", "ssp-rk3")

#: stable dt below this fraction of t_end aborts the run
DT_UNDERFLOW = 1e-14


@dataclass(frozen=True)
class SchemeSpec:
    """Spatial scheme, time integrator and step-size controls.

    ``parabolic`` uses epsilon = d of the (resolved) coefficients. ``lax``
    ignores the integrator and steps with dt = cfl h / beta.
    """

    scheme: str = "gp-regularized"
    integrator: str = "ssp-rk3"
    cfl: float = 0.5
    viscfactor: float = 0.9
    l_form: str = "split"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"integrator must be one of {INTEGRATORS}")
        if not 0 < self.cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")
        if not 0 < self.viscfactor <= 1:
            raise ValueError("viscfactor must lie in (0, 1]")
        if self.l_form not in L_FORMS:
            raise ValueError(f"l_form must be one of {L_FORMS}")


@dataclass
class Trajectory:
    """Recorded states of one run.

    ``coeffs[i]`` holds the resolved coefficients used for the step that
    starts at ``states[i]`` (the last entry repeats the previous one).
    """

    grid: Grid
    eos: object
    times: List[float] = dc_field(default_factory=list)
    states: List[np.ndarray] = dc_field(default_factory=list)
    coeffs: List[RegularizationCoeffs] = dc_field(default_factory=list)
    far: Optional[np.ndarray] = None
    steps: int = 0

    def __len__(self):
        return len(self.states)

    def append(self, field: ConservedField, coeffs):
        self.times.append(float(field.t))
        self.states.append(field.U.copy())
        self.coeffs.append(coeffs)

    def field(self, i) -> ConservedField:
        return ConservedField(self.grid, self.states[i], self.times[i], self.far)

    @property
    def final(self) -> ConservedField:
        return self.field(-1)

    def primitive(self, i):
        """rho, u, e of snapshot ``i``."""
        rho, u, _, e = primitives(self.states[i])
        return rho, u, e

    def entropy(self, i):
        rho, _, e = self.primitive(i)
        return self.eos.entropy(rho, e)


def _diffusivity(coeffs: RegularizationCoeffs, rho, e, scheme):
    a = np.max(coeffs.a_of(rho, e))
    d = np.max(coeffs.d_of(rho, e))
    if scheme == "parabolic":
        return float(d)
    if coeffs.gform == "parabolic":
        mom = a
    elif coeffs.gform == "symmetric":
        mom = np.max(2 * coeffs.mu_of(rho, e) + np.maximum(coeffs.lambda_of(rho, e), 0))
    else:
        mom = 0.0
    return float(max(a, d, mom))


def stable_dt(field: ConservedField, scheme: SchemeSpec, coeffs: RegularizationCoeffs, eos):
    """Largest dt allowed by the hyperbolic CFL and the explicit viscous limit.

    ``coeffs`` must already be resolved. The viscous bound is
    viscfactor / (2 nu sum_k h_k^-2), the forward-Euler limit of the discrete
    Laplacian in ``dim`` dimensions.
    """
    grid = field.grid
    rho, u, _, e = primitives(field.U)
    c = np.sqrt(np.maximum(eos.sound_speed2(rho, e), 0.0))
    rate = sum((np.abs(u[k]) + c) / grid.h[k] for k in range(grid.dim))
    dt_h = scheme.cfl / float(np.max(rate))
    if scheme.scheme == "lax":
        return dt_h
    nu = _diffusivity(coeffs, rho, e, scheme.scheme)
    if nu <= 0:
        return dt_h
    dt_v = scheme.viscfactor / (2 * nu * sum(1 / hk**2 for hk in grid.h))
    return min(dt_h, dt_v)


def _tendency(scheme: SchemeSpec, coeffs, eos, source):
    if scheme.scheme == "parabolic":
        eps = coeffs.d
        return lambda f: rhs_parabolic(f, eps, eos, source)
    form = "brenner" if scheme.scheme == "gp-brenner" else "conservative"
    return lambda f: rhs_regularized(f, coeffs, eos, form=form, l_form=scheme.l_form, source=source)


def _rk_step(field: ConservedField, dt, L, integrator):
    U0, t = field.U, field.t
    stage = field.with_state
    if integrator == "forward-euler":
        return stage(U0 + dt * L(field), t + dt)
    U1 = U0 + dt * L(field)
    if integrator == "ssp-rk2":
        U = 0.5 * U0 + 0.5 * (U1 + dt * L(stage(U1, t + dt)))
        return stage(U, t + dt)
    U2 = 0.75 * U0 + 0.25 * (U1 + dt * L(stage(U1, t + dt)))
    U = U0 / 3 + 2 / 3 * (U2 + dt * L(stage(U2, t + 0.5 * dt)))
    return stage(U, t + dt)


def advance(
    field: ConservedField,
    scheme: SchemeSpec,
    coeffs: RegularizationCoeffs,
    eos,
    t_end,
    callbacks: Sequence[Callable[[ConservedField], None]] = (),
    record_stride=1,
    check_stride=1,
    source=None,
    max_steps=None,
) -> Trajectory:
    """Integrate from ``field.t`` to ``t_end``.

    Mesh-scaled coefficients are frozen at the start of every step. Every
    accepted state is passed to each callback; every ``record_stride``-th
    state and the final state are stored in the returned trajectory.
    Admissibility is checked every ``check_stride`` steps (the RHS also
    refuses inadmissible input).

    Raises
    ------
    StepFailure
        If the stable step drops below ``1e-14 t_end`` or a state loses
        admissibility. The partial trajectory, ending with the offending
        state when one exists, is attached.
    """
    if t_end < field.t:
        raise ValueError("t_end precedes the initial time")
    if record_stride < 1 or check_stride < 1:
        raise ValueError("strides must be >= 1")
    if coeffs.gform == "symmetric":
        coeffs.check_dissipative(field.grid.dim)
    traj = Trajectory(field.grid, eos, far=field.far)
    current = resolve_coeffs(coeffs, field, eos)
    traj.append(field, current)
    for cb in callbacks:
        cb(field)
    step = 0
    while field.t < t_end:
        if max_steps is not None and step >= max_steps:
            break
        current = resolve_coeffs(coeffs, field, eos)
        if traj.times[-1] == field.t:
            traj.coeffs[-1] = current
        dt_stable = stable_dt(field, scheme, current, eos)
        if not np.isfinite(dt_stable) or dt_stable < DT_UNDERFLOW * t_end:
            raise StepFailure(f"time step underflow at t={field.t:.6g} (dt={dt_stable:.3g})", traj)
        dt = min(dt_stable, t_end - field.t)
        new = None
        try:
            if scheme.scheme == "lax":
                new = lax_step(field, dt, eos, check=False)
            else:
                new = _rk_step(field, dt, _tendency(scheme, current, eos, source), scheme.integrator)
            if t_end - new.t < 1e-12 * max(t_end, 1.0):
                new = new.with_state(new.U, t_end)
            step += 1
            if step % check_stride == 0:
                check_positive(new.rho, new.e)
        except NonAdmissibleState as exc:
            if new is not None:
                traj.append(new, current)
            traj.steps = step
            raise StepFailure(f"admissibility lost at t={field.t:.6g}: {exc}", traj) from exc
        field = new
        for cb in callbacks:
            cb(field)
        if step % record_stride == 0 or field.t >= t_end:
            traj.append(field, current)
    traj.steps = step
    return traj


__all__ = ["SchemeSpec", "Trajectory", "advance", "stable_dt", "SCHEMES", "INTEGRATORS"]
