"""Command line entry point ``eulerreg``.

Exit codes: 0 success, 1 a certificate failed (or the checked property does
not hold), 2 configuration or argument error, 3 runtime failure.
"""

import argparse
import sys

from . import config as config_mod
from .eos import IdealGas, check_admissibility, thermo_eval
from .errors import ConfigError, DomainError, EulerRegError, NoCounterexample, NonAdmissibleState
from .regularization import admissible_range, gamma_coefficient
from .runner import EXIT_CERT, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, refinement_study, run_scenario


def _fmt(v):
    return "" if v is None else f"{v:.6g}"


def cmd_run(args):
    cfg = config_mod.load(args.config)
    res = run_scenario(cfg, out=args.output)
    for c in res.certificates:
        print(c.line())
    if res.error:
        print(f"error: {res.error}", file=sys.stderr)
    return res.status


def cmd_refine(args):
    cfg = config_mod.load(args.config)
    rows = refinement_study(cfg, args.levels, out=args.output)
    print("level,n,h,dt,error,order,violation,violation_order")
    for r in rows:
        print(",".join([str(r["level"]), str(r["n"])] + [_fmt(r[k]) for k in ("h", "dt", "error", "order", "violation", "violation_order")]))
    return EXIT_RUNTIME if any(r["status"] == EXIT_RUNTIME for r in rows) else EXIT_OK


def cmd_check_eos(args):
    eos = IdealGas(args.gamma)
    if not (args.rho > 0 and args.e > 0):
        raise DomainError("check-eos needs rho > 0 and e > 0")
    rep = check_admissibility(args.rho, args.e, eos)
    if rep.convex and rep.positiveT:
        th = thermo_eval(args.rho, args.e, eos)
        for name in ("s", "p", "T", "p_rho", "p_e", "T_rho", "T_e", "c2", "cp", "detSigma"):
            print(f"{name} = {float(getattr(th, name)):.17g}")
    print(f"convex = {bool(rep.convex)}")
    print(f"positiveT = {bool(rep.positiveT)}")
    print(f"hyperbolic = {bool(rep.hyperbolic)}")
    print(f"cpTe = {float(rep.cpTe):.17g}")
    return EXIT_OK if rep.ok else EXIT_CERT


def cmd_range(args):
    eos = IdealGas(args.gamma)
    lo, hi = admissible_range(args.rho, args.e, args.alpha, eos)
    print(f"Gamma = {float(gamma_coefficient(args.rho, args.e, args.alpha, eos)):.17g}")
    print(f"x_lo = {lo:.17g}")
    print(f"x_hi = {hi:.17g}")
    print("admissible: x_lo < 1 - a/d < x_hi")
    return EXIT_OK


def cmd_counterexample(args):
    from .diagnostics import a_neq_d_counterexample

    eos = IdealGas(args.gamma)
    try:
        cx = a_neq_d_counterexample(args.rho, args.e, args.a, args.d, eos, family=args.family)
    except NoCounterexample as exc:
        print(f"no counterexample: {exc}")
        return EXIT_CERT
    print(f"x = {cx.x:.17g}")
    print(f"X = {cx.X:.17g}")
    print(f"Y = {cx.Y:.17g}")
    print(f"eigenvalue = {cx.eigenvalue:.17g}")
    print(f"epsilon = {cx.epsilon:.17g}")
    print(f"family = {cx.family.name}")
    print(f"violation = {cx.value:.17g}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="eulerreg", description="Entropy-consistent viscous regularization of the Euler equations.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a scenario and certify it")
    r.add_argument("config")
    r.add_argument("--output", help="output directory (overrides config and $EULERREG_OUTPUT_DIR)")
    r.set_defaults(func=cmd_run)

    f = sub.add_parser("refine", help="grid refinement study")
    f.add_argument("config")
    f.add_argument("--levels", type=int, default=3)
    f.add_argument("--output")
    f.set_defaults(func=cmd_refine)

    c = sub.add_parser("check-eos", help="thermodynamic quantities and admissibility of an ideal-gas state")
    c.add_argument("--gamma", type=float, required=True)
    c.add_argument("--rho", type=float, required=True)
    c.add_argument("--e", type=float, required=True)
    c.set_defaults(func=cmd_check_eos)

    g = sub.add_parser("range", help="admissible interval of x = 1 - a/d")
    g.add_argument("--gamma", type=float, required=True)
    g.add_argument("--alpha", type=float, required=True)
    g.add_argument("--rho", type=float, default=1.0)
    g.add_argument("--e", type=float, default=1.0)
    g.set_defaults(func=cmd_range)

    x = sub.add_parser("counterexample", help="pointwise entropy violation for a != d")
    x.add_argument("--gamma", type=float, required=True)
    x.add_argument("--a", type=float, required=True)
    x.add_argument("--d", type=float, required=True)
    x.add_argument("--rho", type=float, default=1.0)
    x.add_argument("--e", type=float, default=1.0)
    x.add_argument("--family", choices=("crafted", "physical"), default="crafted")
    x.set_defaults(func=cmd_counterexample)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonAdmissibleState, EulerRegError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
