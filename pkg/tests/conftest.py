import numpy as np
import pytest
import sympy as sp
from hypothesis import strategies as st

from eulerreg.eos import IdealGas, UserEos

GAMMAS = (1.2, 1.4, 2.0, 3.0)

rho_st = st.floats(0.05, 20.0)
e_st = st.floats(0.05, 20.0)
gamma_st = st.sampled_from(GAMMAS)


def _sympy_derivs(expr, r, e):
    names = ["s", "s_rho", "s_e", "s_rhorho", "s_rhoe", "s_ee"]
    exprs = [expr, sp.diff(expr, r), sp.diff(expr, e), sp.diff(expr, r, 2), sp.diff(expr, r, e), sp.diff(expr, e, 2)]
    fns = [sp.lambdify((r, e), sp.simplify(x), "numpy") for x in exprs]
    return names, fns


def ideal_oracle(gamma):
    """Derivatives of s = log(e^(1/(gamma-1)) / rho) by symbolic differentiation."""
    r, e = sp.symbols("rho e", positive=True)
    g = sp.Rational(str(gamma))
    names, fns = _sympy_derivs(sp.log(e ** (1 / (g - 1)) / r), r, e)
    return lambda rho, ee: {n: f(rho, ee) + 0 * rho for n, f in zip(names, fns)}


def vdw_entropy(cv=2.5, a=0.1):
    """s = cv log(e + a rho) - log(rho): ideal gas plus a van der Waals attraction (s_rhoe != 0)."""
    r, e = sp.symbols("rho e", positive=True)
    _, fns = _sympy_derivs(cv * sp.log(e + a * r) - sp.log(r), r, e)

    def derivs(rho, ee):
        return tuple(np.asarray(f(rho, ee), dtype=float) + 0 * rho + 0 * ee for f in fns)

    return UserEos(derivs, name="vdw")


@pytest.fixture
def air():
    return IdealGas(1.4)


@pytest.fixture(scope="session")
def vdw():
    return vdw_entropy()


def rel(a, b, floor=1e-300):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
