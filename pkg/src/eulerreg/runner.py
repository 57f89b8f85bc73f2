"""Scenario execution: run, write snapshots and certificates, refinement studies."""

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .config import ScenarioConfig
from .diagnostics import (
    a_neq_d_counterexample,
    entropy_inequality_residual,
    family_from_spec,
    min_entropy_certificate,
    positivity_certificate,
)
from .eos import thermo_eval
from .errors import BadParams, ConfigError, EulerRegError, NoCounterexample, StepFailure
from .solver import advance, initial_condition, smooth_exact, write_manifest, write_snapshot
from .solver.initial import has_exact_solution

OUTPUT_ENV = "EULERREG_OUTPUT_DIR"

EXIT_OK, EXIT_CERT, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3


@dataclass
class RunResult:
    status: int
    trajectory: object
    certificates: list
    paths: List[Path] = field(default_factory=list)
    error: Optional[str] = None
    counterexample: object = None


def output_dir(cfg: ScenarioConfig, override=None) -> Path:
    """Explicit override, then $EULERREG_OUTPUT_DIR, then ``output.directory``."""
    return Path(override or os.environ.get(OUTPUT_ENV) or cfg.output.directory)


def _initial(cfg: ScenarioConfig, grid, eos, coeffs):
    params = dict(cfg.ic.params)
    if cfg.ic.kind == "custom" and params.get("profile") == "counterexample":
        if coeffs.mesh_scaled or callable(coeffs.a) or callable(coeffs.d):
            raise ConfigError("the counterexample profile needs constant a and d")
        try:
            cx = a_neq_d_counterexample(
                params.get("rho_star", 1.0),
                params.get("e_star", 1.0),
                coeffs.a,
                coeffs.d,
                eos,
                grid=grid,
                family=params.get("family", "crafted"),
                scale=params.get("scale", 1.0),
            )
        except NoCounterexample as exc:
            raise ConfigError(f"counterexample profile: {exc}") from exc
        return cx.field, cx
    return initial_condition(cfg.ic.kind, params, grid, eos), None


def _families(cfg, eos, traj, cx):
    rho, _, e = traj.primitive(0)
    cp = float(np.min(thermo_eval(rho, e, eos).cp))
    out = []
    for spec in cfg.diagnostics.families:
        if spec == "crafted:auto":
            if cx is None or cx.epsilon == 0:
                raise ConfigError("crafted:auto needs the crafted counterexample initial condition")
            out.append(cx.family)
        else:
            out.append(family_from_spec(spec, cp))
    return out


def certificates_for(cfg: ScenarioConfig, traj, cx=None):
    eos = traj.eos
    certs = []
    for name in cfg.diagnostics.certificates:
        if name == "positivity":
            certs.append(positivity_certificate(traj))
        elif name == "min_entropy":
            certs.append(min_entropy_certificate(traj, tol=cfg.diagnostics.min_entropy_tol))
        elif name == "entropy":
            for fam in _families(cfg, eos, traj, cx):
                certs.append(entropy_inequality_residual(traj, fam, C=cfg.diagnostics.residual_C))
    return certs


def write_outputs(cfg: ScenarioConfig, traj, certs, out: Path):
    """Snapshots, manifest and the certificate summary; returns the written paths."""
    out.mkdir(parents=True, exist_ok=True)
    eos = traj.eos
    stride = cfg.run.snapshot_stride
    last = len(traj) - 1
    keep = [i for i in range(len(traj)) if i == 0 or i == last or (stride and i % stride == 0)]
    paths, entries = [], []
    running = None
    for i in range(len(traj)):
        s = traj.entropy(i)
        running = s.copy() if running is None else np.minimum(running, s)
        if i in keep:
            name = f"snapshot_{len(entries):05d}.csv"
            paths.append(write_snapshot(out / name, traj.field(i), eos, running))
            entries.append((len(entries), traj.times[i], name))
    paths.append(write_manifest(out / "manifest.csv", entries))
    cert_path = out / "certificates.txt"
    with open(cert_path, "w") as fh:
        fh.write("name,pass,worst,where,tol\n")
        for c in certs:
            fh.write(c.line() + "\n")
    paths.append(cert_path)
    return paths


def run_scenario(cfg: ScenarioConfig, out=None, write=True, refine=0) -> RunResult:
    """Run one scenario; the status is 0 (all pass), 1 (a certificate failed) or 3 (runtime failure).

    On a runtime failure the partial trajectory is still certified and written.
    """
    eos = cfg.build_eos()
    grid = cfg.build_grid(refine)
    coeffs = cfg.build_coeffs()
    scheme = cfg.build_scheme()
    try:
        field0, cx = _initial(cfg, grid, eos, coeffs)
    except BadParams as exc:
        raise ConfigError(str(exc)) from exc
    status, error = EXIT_OK, None
    try:
        traj = advance(field0, scheme, coeffs, eos, cfg.run.t_end, max_steps=cfg.run.max_steps)
    except StepFailure as exc:
        traj, status, error = exc.trajectory, EXIT_RUNTIME, str(exc)
    try:
        certs = certificates_for(cfg, traj, cx)
    except ConfigError:
        raise
    except EulerRegError as exc:
        certs, status, error = [], EXIT_RUNTIME, error or str(exc)
    if status == EXIT_OK and not all(c.passed for c in certs):
        status = EXIT_CERT
    paths = write_outputs(cfg, traj, certs, output_dir(cfg, out)) if write else []
    return RunResult(status, traj, certs, paths, error, cx)


def _l1(a, b, grid):
    return float(np.sum(np.abs(a - b)) * grid.cell_volume)


def _restrict(rho, dim):
    """Average 2^dim fine cells onto the coarse cell."""
    if dim == 1:
        return 0.5 * (rho[0::2] + rho[1::2])
    return 0.25 * (rho[0::2, 0::2] + rho[1::2, 0::2] + rho[0::2, 1::2] + rho[1::2, 1::2])


def _order(coarse, fine):
    if coarse is None or fine is None or coarse <= 0 or fine <= 0:
        return None
    return float(np.log2(coarse / fine))


def refinement_study(cfg: ScenarioConfig, levels, out=None, write=True):
    """Run ``levels`` grids, halving h each time, and tabulate errors and observed orders.

    The error is the L1 density error against the exact translated profile
    when the initial condition has one (smooth data with uniform u and p),
    otherwise the L1 difference to the next finer level (self-convergence).
    ``violation`` is the worst value of the first requested entropy
    certificate (or of the minimum entropy certificate), clipped below at 0.
    """
    if levels < 3:
        raise ConfigError("a refinement study needs at least 3 levels")
    exact = has_exact_solution(cfg.ic.kind, cfg.ic.params)
    results = [run_scenario(cfg, write=False, refine=k) for k in range(levels)]
    rows = []
    for k, res in enumerate(results):
        traj = res.trajectory
        grid = traj.grid
        rho = traj.states[-1][0]
        if exact:
            ref = smooth_exact(cfg.ic.params, grid, traj.eos, traj.times[-1]).rho
            err = _l1(rho, ref, grid)
        elif k + 1 < len(results):
            err = _l1(rho, _restrict(results[k + 1].trajectory.states[-1][0], grid.dim), grid)
        else:
            err = None
        viol = None
        for c in res.certificates:
            if c.name.startswith("entropy") or (viol is None and c.name == "min_entropy"):
                viol = max(c.worst, 0.0)
                if c.name.startswith("entropy"):
                    break
        dt = traj.times[1] - traj.times[0] if len(traj) > 1 else 0.0
        rows.append({"level": k, "n": grid.n[0], "h": max(grid.h), "dt": dt, "error": err, "violation": viol, "status": res.status})
    for k, row in enumerate(rows):
        prev = rows[k - 1] if k else None
        row["order"] = _order(prev["error"], row["error"]) if prev else None
        row["violation_order"] = _order(prev["violation"], row["violation"]) if prev else None
    if write:
        d = output_dir(cfg, out)
        d.mkdir(parents=True, exist_ok=True)
        cols = ["level", "n", "h", "dt", "error", "order", "violation", "violation_order", "status"]
        with open(d / "refinement.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for row in rows:
                w.writerow(["" if row[c] is None else (f"{row[c]:.17g}" if isinstance(row[c], float) else row[c]) for c in cols])
    return rows
