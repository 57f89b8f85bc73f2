"""Initial data: Riemann problems, the contact wave, smooth periodic profiles and custom fields."""

import numpy as np

from ..errors import BadParams
from .grid import ConservedField, Grid

KINDS = ("riemann", "contact", "smooth", "custom")


def _need(params, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise BadParams(f"missing parameters: {', '.join(missing)}")


def _velocity(grid, ux, shape):
    u = np.zeros((grid.dim,) + shape)
    u[0] = ux
    return u


def _riemann(params, grid, eos):
    _need(params, "left", "right")
    try:
        (rl, ul, pl), (rr, ur, pr) = params["left"], params["right"]
    except (TypeError, ValueError) as exc:
        raise BadParams("left/right must be (rho, u, p) triples") from exc
    if min(rl, rr, pl, pr) <= 0:
        raise BadParams("Riemann states need rho > 0 and p > 0")
    lo, hi = grid.extent[0]
    x0 = params.get("x0", 0.5 * (lo + hi))
    x = grid.mesh()[0]
    w = params.get("smoothing", 0.0)
    if w < 0:
        raise BadParams("smoothing width must be non-negative")
    # weight of the left state: a step, or a tanh ramp of width w
    sig = (x < x0).astype(float) if w == 0 else 0.5 * (1.0 - np.tanh((x - x0) / w))
    rho = rr + (rl - rr) * sig
    ux = ur + (ul - ur) * sig
    p = pr + (pl - pr) * sig
    e = eos.internal_energy(rho, p)
    return ConservedField.from_primitive(grid, rho, _velocity(grid, ux, grid.n), e)


def _contact(params, grid, eos):
    _need(params, "beta", "p")
    rl = params.get("rho_left", 1.0)
    rr = params.get("rho_right", 2.0)
    if min(rl, rr, params["p"]) <= 0:
        raise BadParams("contact needs rho > 0 and p > 0")
    lo, hi = grid.extent[0]
    x0 = params.get("x0", 0.5 * (lo + hi))
    x = grid.mesh()[0]
    rho = np.where(x < x0, rl, rr)
    e = eos.internal_energy(rho, np.full(grid.n, float(params["p"])))
    return ConservedField.from_primitive(grid, rho, _velocity(grid, params["beta"], grid.n), e)


def smooth_phase(grid: Grid, k=1):
    """2 pi k sum_j (x_j - lo_j)/L_j on the cell centres."""
    X = grid.mesh()
    return sum(2 * np.pi * k * (X[j] - grid.extent[j][0]) / (grid.extent[j][1] - grid.extent[j][0]) for j in range(grid.dim))


def _smooth_primitive(params, grid, shift=None):
    rho0 = params.get("rho0", 1.0)
    amp = params.get("amp", 0.1)
    u0 = params.get("u0", 0.0)
    p0 = params.get("p0", 1.0)
    k = params.get("k", 1)
    if rho0 - abs(amp) <= 0 or p0 - abs(params.get("p_amp", 0.0)) <= 0:
        raise BadParams("smooth profile must keep rho > 0 and p > 0")
    phase = smooth_phase(grid, k)
    if shift is not None:
        phase = phase - shift
    rho = rho0 + amp * np.sin(phase)
    ux = u0 + params.get("u_amp", 0.0) * np.sin(phase)
    p = p0 + params.get("p_amp", 0.0) * np.cos(phase)
    return rho, ux, p


def _smooth(params, grid, eos):
    rho, ux, p = _smooth_primitive(params, grid)
    return ConservedField.from_primitive(grid, rho, _velocity(grid, ux, grid.n), eos.internal_energy(rho, p))


def _custom(params, grid, eos):
    if "function" in params:
        out = params["function"](grid)
        try:
            rho, u, e = out
        except (TypeError, ValueError) as exc:
            raise BadParams("custom function must return (rho, u, e)") from exc
        return ConservedField.from_primitive(grid, rho, u, e)
    if params.get("profile") == "ramp":
        _need(params, "X", "Y")
        rs = params.get("rho_star", 1.0)
        es = params.get("e_star", 1.0)
        X, Y = float(params["X"]), float(params["Y"])
        w = params.get("width")
        if w is None:
            w = 0.25 * min(rs / abs(X) if X else np.inf, es / abs(Y) if Y else np.inf)
        lo, hi = grid.extent[0]
        # w tanh(x/w): linear through the origin up to O(x^3), saturating smoothly
        xi = w * np.tanh((grid.mesh()[0] - params.get("x0", 0.5 * (lo + hi))) / w)
        rho = rs + X * xi
        e = es + Y * xi
        if np.any(rho <= 0) or np.any(e <= 0):
            raise BadParams("ramp width too large for an admissible state")
        return ConservedField.from_primitive(grid, rho, 0.0, e)
    raise BadParams("custom initial condition needs 'function' or profile='ramp'")


def initial_condition(kind, params, grid: Grid, eos) -> ConservedField:
    """Sample initial data of the given ``kind`` on ``grid``.

    Parameters
    ----------
    kind : {"riemann", "contact", "smooth", "custom"}
    params : dict
        riemann: ``left``, ``right`` as (rho, u, p), optional ``x0`` and
        ``smoothing`` (tanh width; 0 gives a sharp jump).
        contact: ``beta``, ``p``, optional ``rho_left`` (1), ``rho_right`` (2), ``x0``.
        smooth: ``rho0``, ``amp``, ``k``, ``u0``, ``u_amp``, ``p0``, ``p_amp``;
        rho = rho0 + amp sin(phase), u_x = u0 + u_amp sin(phase),
        p = p0 + p_amp cos(phase) with phase = 2 pi k sum_j x_j/L_j.
        custom: ``function(grid) -> (rho, u, e)`` or ``profile="ramp"``
        with ``X``, ``Y``, ``rho_star``, ``e_star`` and optional ``width`` w:
        rho = rho_star + X w tanh(x/w), e = e_star + Y w tanh(x/w), u = 0.

    Velocities point along the first axis.

    Raises
    ------
    BadParams
        Missing or inconsistent parameters.
    """
    if kind not in KINDS:
        raise BadParams(f"unknown initial condition kind {kind!r}")
    builder = {"riemann": _riemann, "contact": _contact, "smooth": _smooth, "custom": _custom}[kind]
    return builder(dict(params), grid, eos)


def smooth_exact(params, grid: Grid, eos, t) -> ConservedField:
    """Exact solution of the smooth profile when only density varies (pure translation at u0).

    With uniform u and p the Euler equations reduce to rho_t + u0 rho_x = 0.
    """
    if params.get("u_amp", 0.0) or params.get("p_amp", 0.0):
        raise BadParams("exact solution only available for u_amp = p_amp = 0")
    L = grid.extent[0][1] - grid.extent[0][0]
    shift = 2 * np.pi * params.get("k", 1) * params.get("u0", 0.0) * t / L
    rho, ux, p = _smooth_primitive(params, grid, shift=shift)
    field = ConservedField.from_primitive(grid, rho, _velocity(grid, ux, grid.n), eos.internal_energy(rho, p))
    field.t = t
    return field


def has_exact_solution(kind, params):
    return kind == "smooth" and not params.get("u_amp", 0.0) and not params.get("p_amp", 0.0)
