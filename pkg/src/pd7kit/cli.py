"""Command-line entry point: ``pd7kit <subcommand> [options]``.

Results go to stdout or ``--out`` as JSON (``"schema": "pd7kit/1"``), CSV
or plain text.  Complex flags are written ``re,im`` (or a single real);
values that start with a minus sign need the ``--flag=value`` form.
Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .config import FORMATS, load_config
from .errors import PD7Error

SCHEMA = "pd7kit/1"


# ---------------------------------------------------------------------------
# argument types and output helpers
# ---------------------------------------------------------------------------

def complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")


def _float_list(count):
    def parse(text):
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            vals = []
        if len(vals) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers")
        return tuple(vals)
    return parse


def _int_pair(text):
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected nx,ny") from None
    return a, b


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None


def to_jsonable(obj):
    """Complex as ``{"re", "im"}``; non-finite floats as strings."""
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(obj.real)), "im": to_jsonable(float(obj.imag))}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("nan" if math.isnan(v) else ("inf" if v > 0 else "-inf"))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def dumps(payload: dict) -> str:
    body = {"schema": SCHEMA}
    body.update(payload)
    return json.dumps(to_jsonable(body), indent=1, allow_nan=False) + "\n"


def _pretty(payload, indent=0):
    lines = []
    pad = "  " * indent
    for k, v in payload.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_pretty(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {v}")
    return lines


class Output:
    def __init__(self, path, fmt):
        self.path = path
        self.fmt = fmt

    def write_text(self, text):
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def emit(self, payload, csv_rows=None, csv_header=None):
        if self.fmt == "csv" and csv_rows is not None:
            buf = io.StringIO()
            buf.write(",".join(csv_header) + "\n")
            for row in csv_rows:
                buf.write(",".join(_csv_cell(v) for v in row) + "\n")
            self.write_text(buf.getvalue())
        elif self.fmt == "pretty":
            self.write_text("\n".join(_pretty(to_jsonable(payload))) + "\n")
        else:
            self.write_text(dumps(payload))


def _csv_cell(v):
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_ohyama(args, cfg, out):
    from .ohyama import default_table
    R = default_table().compute(args.n)
    if args.emit == "pretty" or out.fmt == "pretty":
        out.write_text(f"R_{args.n}(zeta) = {R.pretty()}\n")
    else:
        out.emit({"n": args.n, "degree": R.degree, "valuation": R.valuation, "coefficients": R.to_json()})
    if cfg.cache_path:
        default_table().save(cfg.cache_path)


def cmd_eval(args, cfg, out):
    from .algebraic import eval_du_dx, eval_u, shifted_jet, solution, eval_U
    sol = solution(args.n, cfg.pole_tol)
    if args.x is not None:
        payload = {"n": args.n, "x": args.x, "u": eval_u(sol, args.x), "du_dx": eval_du_dx(sol, args.x)}
    elif args.z is not None:
        W, dW, d2W = shifted_jet(sol, args.y, args.z)
        payload = {"n": args.n, "y": args.y, "z": args.z, "W": W, "dW_dz": dW, "d2W_dz2": d2W}
    else:
        payload = {"n": args.n, "y": args.y, "U": eval_U(sol, args.y)}
    out.emit(payload)


def cmd_grid(args, cfg, out):
    from .algebraic import density_grid
    g = density_grid(args.n, args.bounds, args.res)
    P = g.points().ravel()
    rows = [(p.real, p.imag, v) for p, v in zip(P, g.values.ravel())]
    if out.fmt == "csv":
        out.emit({}, rows, ["Y_re", "Y_im", "modulus"])
    elif out.fmt == "pretty":
        out.emit({"n": args.n, "resolution": list(args.res), "poles in window": len(g.poles)})
    else:
        out.emit({"n": args.n, "bounds": list(args.bounds), "resolution": list(args.res),
                  "poles": list(g.poles), "values": g.values})


def cmd_residual(args, cfg, out):
    from .acceptance import annulus_samples
    from .algebraic import ode_residual_p3d7, solution
    from .errors import PoleHit, ZeroHit
    sol = solution(args.n, cfg.pole_tol)
    vals, skipped = [], 0
    for x in annulus_samples(args.samples):
        try:
            vals.append((complex(x), abs(ode_residual_p3d7(sol, x))))
        except (PoleHit, ZeroHit):
            skipped += 1
    out.emit({"n": args.n, "samples": args.samples, "skipped": skipped,
              "max_relative_residual": max((v for _, v in vals), default=float("nan")),
              "residuals": [{"x": x, "residual": v} for x, v in vals]})


def cmd_equilibrium(args, cfg, out):
    from .equilibrium import solve_equilibrium
    b = solve_equilibrium(args.y)
    out.emit({"y": b.y, "U": b.U, "branch": b.branch, "residual": b.residual})


def cmd_invariants(args, cfg, out):
    from .equilibrium import invariants_from_E
    w = invariants_from_E(args.y, args.E)
    out.emit({"y": w.y, "E": w.E, "g2": w.g2, "g3": w.g3})


def _solve(y, cfg):
    from .spectral import solve_c1
    return solve_c1(y, quad_tol=cfg.quadrature_tol, newton_tol=cfg.newton_tol)


def cmd_boutroux(args, cfg, out):
    sol = _solve(args.y, cfg)
    out.emit({"y": sol.y, "c1": sol.c1, "residuals": {"I12": sol.I12, "I23": sol.I23},
              "roots": list(sol.roots.s), "E": sol.E, "psi": sol.psi, "xi": sol.xi,
              "kappa": sol.kappa, "c0": sol.c0, "jacobian_det": sol.jacobian_det,
              "iterations": sol.iterations})


def cmd_bowtie(args, cfg, out):
    from .spectral import bowtie_polyline
    ys, Ys = bowtie_polyline(args.rays, args.tol)
    rows = [(y.real, y.imag, Y.real, Y.imag) for y, Y in zip(ys, Ys)]
    if out.fmt == "json":
        out.emit({"rays": args.rays, "y": list(ys), "Y": list(Ys)})
    else:
        out.emit({}, rows, ["y_re", "y_im", "Y_re", "Y_im"])


def cmd_levelset(args, cfg, out):
    from .levelset import trace_K
    sol = _solve(args.y, cfg)
    g = trace_K(sol, stop_tol=cfg.trace_tol)
    out.emit({"y": sol.y, "c1": sol.c1, "case": g.case,
              "arcs": [{"start": a.start, "end": a.end, "arclength": a.arclength,
                        "max_drift": a.max_drift, "end_direction": a.end_direction,
                        "points": [[p.real, p.imag] for p in a.points]} for a in g.arcs]})


def cmd_signchart(args, cfg, out):
    from .levelset import sign_chart
    sol = _solve(args.y, cfg)
    g = sign_chart(sol, args.bounds, args.res)
    P = g.points().ravel()
    rows = [(p.real, p.imag, v) for p, v in zip(P, g.values.ravel())]
    if out.fmt == "json":
        out.emit({"y": sol.y, "bounds": list(args.bounds), "resolution": list(args.res), "sign": g.values})
    else:
        out.emit({}, rows, ["eta_re", "eta_im", "sign"])


def cmd_verify(args, cfg, out):
    from .weierstrass_verify import verify
    rep = verify(args.y, args.n_list, sol_b=_solve(args.y, cfg))
    out.emit(rep.to_dict())


def cmd_toy(args, cfg, out):
    from .toy_rhp import (toy_identity_check, toy_jump_residual, toy_laurent_coefficient,
                          toy_nls_amplitude, toy_ode_residual)
    z = args.z
    N1 = toy_laurent_coefficient(1, z)
    payload = {"z": z, "N1": N1, "identities": toy_identity_check(z, N1),
               "ode_residual": toy_ode_residual(z), "q": toy_nls_amplitude(z)}
    etas = np.linspace(-0.95, 0.95, 20 if args.full_report else 5)
    jumps = [toy_jump_residual(e, z) for e in etas]
    payload["max_jump_residual"] = max(jumps)
    if args.full_report:
        payload["jump_residuals"] = [{"eta": e, "residual": r} for e, r in zip(etas, jumps)]
        payload["N2"] = toy_laurent_coefficient(2, z)
    out.emit(payload)


def cmd_selftest(args, cfg, out):
    from .acceptance import run_acceptance
    results = run_acceptance(args.only or None, echo=lambda line: print(line, flush=True))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help="key=value configuration file")
    g.add_argument("--out", help="write the result here instead of stdout")
    g.add_argument("--format", choices=FORMATS, dest="output_format")
    g.add_argument("--quad-tol", type=float, dest="quadrature_tol")
    g.add_argument("--newton-tol", type=float, dest="newton_tol")
    g.add_argument("--trace-tol", type=float, dest="trace_tol")
    g.add_argument("--pole-tol", type=float, dest="pole_tol")
    g.add_argument("--cache", dest="cache_path", help="JSON cache of Ohyama polynomials")
    g.add_argument("--parallelism", type=int)

    parser = argparse.ArgumentParser(prog="pd7kit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pd7kit {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("ohyama", cmd_ohyama, "Ohyama polynomial R_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit", choices=("json", "pretty"), default="json")

    p = add("eval", cmd_eval, "u_n(x), U_n(y) or W(z) = U_n(y + z/n)")
    p.add_argument("--n", type=int, required=True)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--x", type=complex_arg)
    where.add_argument("--y", type=complex_arg)
    p.add_argument("--z", type=complex_arg)

    p = add("grid", cmd_grid, "|U_n(Y^3)| on a Y-plane grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bounds", type=_float_list(4), default=(-1.0, 1.0, -1.0, 1.0))
    p.add_argument("--res", type=_int_pair, default=(400, 400))

    p = add("residual", cmd_residual, "Painleve ODE residual at quasi-random points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=50)

    p = add("equilibrium", cmd_equilibrium, "root of 8U^3 + 2U = y")
    p.add_argument("--y", type=complex_arg, required=True)

    p = add("invariants", cmd_invariants, "Weierstrass invariants g2, g3")
    p.add_argument("--y", type=complex_arg, required=True)
    p.add_argument("--E", type=complex_arg, required=True)

    p = add("boutroux", cmd_boutroux, "solve the Boutroux conditions for c1(y)")
    p.add_argument("--y", type=complex_arg, required=True)

    p = add("bowtie", cmd_bowtie, "boundary of the bow-tie region")
    p.add_argument("--rays", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-10)

    p = add("levelset", cmd_levelset, "trace the zero level set of Re h")
    p.add_argument("--y", type=complex_arg, required=True)

    p = add("signchart", cmd_signchart, "sign of Re h on a grid")
    p.add_argument("--y", type=complex_arg, required=True)
    p.add_argument("--bounds", type=_float_list(4), default=(-2.0, 2.0, -1.5, 1.5))
    p.add_argument("--res", type=_int_pair, default=(121, 91))

    p = add("verify", cmd_verify, "residuals of the Weierstrass-form ODE versus n")
    p.add_argument("--y", type=complex_arg, required=True)
    p.add_argument("--n-list", type=_int_list, default=[8, 16, 32, 64])

    p = add("toy-rhp", cmd_toy, "checks of the toy Riemann-Hilbert solution")
    p.add_argument("--z", type=complex_arg, required=True)
    p.add_argument("--full-report", action="store_true")

    p = add("selftest", cmd_selftest, "run the acceptance suite")
    p.add_argument("--only", type=_int_list, help="comma-separated criterion numbers")
    return parser


_CSV_DEFAULT = {"grid", "bowtie", "signchart"}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {k: getattr(args, k, None) for k in
                 ("quadrature_tol", "newton_tol", "trace_tol", "pole_tol", "cache_path",
                  "output_format", "parallelism")}
    try:
        cfg = load_config(args.config, **overrides)
    except (OSError, ValueError) as exc:
        print(f"pd7kit: configuration error: {exc}", file=sys.stderr)
        return 2
    fmt = cfg.output_format
    if args.output_format is None and args.command in _CSV_DEFAULT and (args.out or "").endswith(".csv"):
        fmt = "csv"
    if cfg.cache_path:
        from .ohyama import OhyamaTable, set_default_table
        set_default_table(OhyamaTable(path=cfg.cache_path))
    out = Output(args.out, fmt)
    try:
        code = args.func(args, cfg, out)
    except (PD7Error, ArithmeticError, ValueError) as exc:
        print(f"pd7kit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return int(code or 0)


def main(argv=None):
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
