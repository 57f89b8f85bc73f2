"""
Why a = d
=========

The ratio x = 1 - a/d decides whether the regularization is compatible with
the entropy inequalities. This script prints the admissible interval of x,
builds initial data that break a generalized entropy inequality when a != d,
and certifies the same data with a = d.
"""

from eulerreg.diagnostics import EntropyFamily, a_neq_d_counterexample, entropy_inequality_residual
from eulerreg.eos import IdealGas
from eulerreg.errors import NoCounterexample
from eulerreg.regularization import RegularizationCoeffs, admissible_range
from eulerreg.solver import SchemeSpec, advance

eos = IdealGas(1.4)

# physical entropy only (alpha = 0) versus every generalized entropy (alpha = 1)
for alpha in (0.0, 0.5, 0.9, 1.0):
    lo, hi = admissible_range(1.0, 1.0, alpha, eos)
    print(f"alpha = {alpha:3.1f}: {lo:9.4f} < x < {hi:7.4f}")

# a = 0, d = 1 gives x = 1, outside the physical-entropy interval
for a, d in ((0.0, 1.0), (2.0, 1.0), (1.0, 1.0)):
    try:
        cx = a_neq_d_counterexample(1.0, 1.0, a, d, eos)
        print(f"a={a}, d={d}: gradients ({cx.X:.3f}, {cx.Y:.3f}) produce {cx.value:.4f} > 0 for {cx.family.name}")
    except NoCounterexample as exc:
        print(f"a={a}, d={d}: {exc}")

cx = a_neq_d_counterexample(1.0, 1.0, 0.0, 1.0, eos, family="physical")
for a in (0.0, 1.0):
    traj = advance(cx.field, SchemeSpec(), RegularizationCoeffs(a, 1.0), eos, 1.0, max_steps=10)
    print(f"a={a}, d=1:", entropy_inequality_residual(traj, EntropyFamily.physical()).line())
