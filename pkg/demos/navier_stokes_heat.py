"""
Heat conduction lowers the entropy minimum
==========================================

With Fourier heat flux kappa grad T the specific entropy obeys
rho Ds/Dt = div(kappa grad T)/T + (positive terms). At a point where s is
minimal and T is maximal the first term is negative, so the minimum entropy
principle fails for Navier-Stokes.
"""

from eulerreg.diagnostics import ns_entropy_violation_demo
from eulerreg.eos import IdealGas

eos = IdealGas(1.4)
for kappa in (0.0, 0.5, 1.0, 2.0):
    demo = ns_entropy_violation_demo(eos, kappa)
    print(f"kappa = {kappa}: ds/dt(0) = {demo.dsdt_at_origin:+.5f}   exact {demo.exact + 0.0:+.5f}")

# at T* = 2 the 1/T factor matters
demo = ns_entropy_violation_demo(eos, 1.0, T_star=2.0)
print(f"T* = 2: ds/dt(0) = {demo.dsdt_at_origin:+.5f}, kappa Lap T0 / (rho T0) = {demo.exact:+.5f}, kappa Lap T0 / rho = {demo.reference:+.5f}")

# march a few steps and watch the minimum drop
demo = ns_entropy_violation_demo(eos, 1.0, march_steps=50)
print(demo.certificate.line())
