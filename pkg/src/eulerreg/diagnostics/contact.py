"""Quality metrics for the contact-wave problem."""

from dataclasses import dataclass

import numpy as np

from ..solver.stepping import Trajectory


@dataclass
class ContactReport:
    u_drift: float
    p_drift: float
    times: np.ndarray
    widths: np.ndarray


def _crossing(x, phi, level, last=False):
    """Linear-interpolated position where phi crosses ``level`` (first or last crossing)."""
    above = phi >= level
    idx = np.flatnonzero(above[1:] != above[:-1])
    if idx.size == 0:
        return np.nan
    i = idx[-1] if last else idx[0]
    return x[i] + (level - phi[i]) * (x[i + 1] - x[i]) / (phi[i + 1] - phi[i])


def contact_width(x, rho, rho_left, rho_right):
    """Distance between the 10% and 90% crossings of the normalized jump."""
    phi = (rho - rho_left) / (rho_right - rho_left)
    return abs(_crossing(x, phi, 0.9, last=True) - _crossing(x, phi, 0.1))


def contact_quality(trajectory: Trajectory, beta=None, p0=None, rho_left=None, rho_right=None) -> ContactReport:
    """Velocity and pressure drift and the 10%-90% contact width over time (1D).

    ``beta`` and ``p0`` default to the initial mean velocity and pressure;
    ``rho_left``/``rho_right`` to the first and last cell of the initial
    density.
    """
    eos = trajectory.eos
    x = trajectory.grid.centers(0)
    rho0, u0, e0 = trajectory.primitive(0)
    beta = float(np.mean(u0[0])) if beta is None else beta
    p0 = float(np.mean(eos.pressure(rho0, e0))) if p0 is None else p0
    rl = float(rho0[0]) if rho_left is None else rho_left
    rr = float(rho0[-1]) if rho_right is None else rho_right
    ud = pd = 0.0
    widths = []
    for i in range(len(trajectory)):
        rho, u, e = trajectory.primitive(i)
        ud = max(ud, float(np.max(np.abs(u[0] - beta))))
        pd = max(pd, float(np.max(np.abs(eos.pressure(rho, e) - p0))))
        widths.append(contact_width(x, rho, rl, rr))
    return ContactReport(ud, pd, np.asarray(trajectory.times), np.asarray(widths))
