"""
Contact waves: mass diffusion versus the Lax scheme
===================================================

A density jump advected at constant velocity and pressure. With a = d the
regularized scheme keeps u and p exactly uniform. The Lax scheme has the
artificial viscosity h^2/(2 dt), so a small CFL number smears the contact.
"""

from eulerreg.diagnostics import contact_quality
from eulerreg.eos import IdealGas
from eulerreg.regularization import RegularizationCoeffs
from eulerreg.solver import Grid, SchemeSpec, advance, initial_condition

eos = IdealGas(1.4)
grid = Grid((800,), ((0.0, 1.0),), "farfield")
field = initial_condition("contact", {"beta": 1.0, "p": 1.0, "x0": 0.3}, grid, eos)

for scheme, cfl in (("gp-regularized", 0.5), ("lax", 0.9), ("lax", 0.5), ("lax", 0.1)):
    rep = contact_quality(advance(field, SchemeSpec(scheme, cfl=cfl), RegularizationCoeffs(c0=0.5), eos, 0.2))
    print(f"{scheme:15s} cfl={cfl}: width {rep.widths[-1]:.4f}, u drift {rep.u_drift:.1e}, p drift {rep.p_drift:.1e}")
