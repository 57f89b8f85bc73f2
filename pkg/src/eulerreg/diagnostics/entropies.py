"""Generalized entropy families rho f(s)."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..errors import FamilyNotGeneralized

KINDS = ("physical", "harten", "crafted", "custom")


@dataclass(frozen=True)
class EntropyFamily:
    """A scalar function f of specific entropy with its first two derivatives.

    ``rho f(s)`` is a generalized entropy when f' > 0 and f'/c_p - f'' > 0.

    Use the constructors :meth:`physical`, :meth:`harten`, :meth:`crafted`
    and :meth:`custom`.
    """

    kind: str
    f: Callable
    fp: Callable
    fpp: Callable
    name: str
    q: Optional[float] = None
    eps: Optional[float] = None

    @classmethod
    def physical(cls):
        one = lambda s: np.ones_like(np.asarray(s, dtype=float))
        zero = lambda s: np.zeros_like(np.asarray(s, dtype=float))
        return cls("physical", lambda s: np.asarray(s, dtype=float), one, zero, "physical")

    @classmethod
    def harten(cls, q):
        """f(s) = exp(s/q); generalized iff q > c_p (q > 0)."""
        if q <= 0:
            raise ValueError("q must be positive")
        f = lambda s: np.exp(np.asarray(s, dtype=float) / q)
        return cls("harten", f, lambda s: f(s) / q, lambda s: f(s) / q**2, f"harten(q={q:g})", q=q)

    @classmethod
    def crafted(cls, eps, cp):
        """f(s) = exp((1-eps) s / c_p), the solution of f'' = (1-eps) f' / c_p for constant c_p.

        Generalized for 0 < eps < 1 (f'/c_p - f'' = eps f'/c_p), but only barely,
        which is what lets it expose a != d.
        """
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        k = (1 - eps) / cp
        f = lambda s: np.exp(k * np.asarray(s, dtype=float))
        return cls("crafted", f, lambda s: k * f(s), lambda s: k * k * f(s), f"crafted(eps={eps:g})", q=1 / k, eps=eps)

    @classmethod
    def custom(cls, f, fp, fpp, name="custom"):
        return cls("custom", f, fp, fpp, name)

    def margins(self, s, cp):
        """Return (f'(s), f'(s)/c_p - f''(s)) elementwise."""
        fp = self.fp(s)
        return fp, fp / cp - self.fpp(s)

    def check_generalized(self, s, cp):
        """Raise FamilyNotGeneralized unless both conditions hold at every sample."""
        fp, m = self.margins(s, cp)
        if not (np.all(fp > 0) and np.all(m > 0)):
            raise FamilyNotGeneralized(
                f"{self.name} is not a generalized entropy on the sampled states "
                f"(min f' = {np.min(fp):.3g}, min f'/c_p - f'' = {np.min(m):.3g})"
            )


def family_from_spec(spec, cp=None):
    """Build a family from a config string: ``physical``, ``harten:<q>``, ``harten_cp:<k>`` (q = k c_p) or ``crafted:<eps>``."""
    kind, _, arg = str(spec).partition(":")
    if kind == "physical":
        return EntropyFamily.physical()
    if kind == "harten":
        return EntropyFamily.harten(float(arg))
    if kind in ("harten_cp", "crafted") and cp is None:
        raise ValueError(f"{kind} needs c_p")
    if kind == "harten_cp":
        return EntropyFamily.harten(float(arg) * cp)
    if kind == "crafted":
        return EntropyFamily.crafted(float(arg), cp)
    raise ValueError(f"unknown entropy family {spec!r}")
