"""Gradient bounds, optimal moduli and flow runs for u_t = alpha(u') u'' on the circle.

Exit status: 0 success, 1 verification failure, 2 usage or input error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import coefficients as co
from . import estimates as es
from .errors import ModContError
from .harness import sharpness_experiment, two_point_check
from .modulus import PeriodicField, check_modulus, parse_modulus
from .solver import Dirichlet, Periodic, SolverConfig, solve
from .supersolution import minimal_supersolution
from .translators import build_translator

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def jsonable(obj):
    """Replace infinities by ``"+inf"``/``"-inf"`` tags and numpy scalars by floats."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isinf(v):
            return "+inf" if v > 0 else "-inf"
        return None if math.isnan(v) else v
    return obj


def _emit_json(obj, out):
    json.dump(jsonable(obj), out, indent=2, ensure_ascii=False)
    out.write("\n")


def _fmt(v):
    v = float(v)
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return repr(v)


def _write_csv(path, header, rows):
    f = sys.stdout if path in (None, "-") else open(path, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if f is not sys.stdout:
            f.close()


def _read_field(path):
    """Uniformly spaced ``x,u`` samples from a CSV file."""
    try:
        x, u = co.read_table(path, ("x", "u"))
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if x.size < 4:
        raise UsageError("need at least 4 samples")
    h = np.diff(x)
    if np.any(h <= 0) or np.ptp(h) > 1e-9 * h.mean():
        raise UsageError("x must be uniformly spaced and increasing")
    return x, u


def _range(text):
    try:
        a, b = (float(s) for s in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected a:b") from exc
    return a, b


def _coeff(text):
    try:
        return co.parse_coefficient(text)
    except (ValueError, OSError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


def _psi(text, period):
    try:
        return parse_modulus(text, period)
    except (ValueError, OSError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands

def cmd_classify(args, out):
    res = es.lipschitz_classifier(_coeff(args.coeff))
    if args.json:
        _emit_json(res, out)
    else:
        out.write(f"bounded_above: {res['bounded_above']}\nbounded_below: {res['bounded_below']}\n")
    return EXIT_OK


def cmd_translator(args, out):
    prof = build_translator(_coeff(args.coeff), args.speed, p_range=args.prange)
    p, x, v = prof.samples(args.n, args.t)
    _write_csv(args.out, ("p", "x", "v"), zip(p, x, v))
    return EXIT_OK


def cmd_bound(args, out):
    coeff = _coeff(args.coeff)
    psi = _psi(args.psi, args.L)
    res = {"t": args.t, "coeff": coeff.describe(), "psi": psi.describe()}
    if args.side in ("upper", "both"):
        res["upper"] = es.gradient_bound_upper(coeff, psi, args.t)
        crit = es.criterion_upper(coeff, psi)
        res["criterion_value"], res["criterion_satisfied"] = crit.value, crit.satisfied
    if args.side in ("lower", "both"):
        res["lower"] = es.gradient_bound_lower(coeff, psi, args.t)
    if args.json:
        _emit_json(res, out)
    else:
        for key in ("upper", "lower"):
            if key in res:
                out.write(f"{key}: {_fmt(res[key])}\n")
    return EXIT_OK


def cmd_solve(args, out):
    coeff = _coeff(args.coeff)
    x, u = _read_field(args.init)
    h = x[1] - x[0]
    if args.bc == "periodic":
        L = x.size * h
        boundary = Periodic(L, float(x[0]))
        n = x.size
    elif args.bc.startswith("dirichlet"):
        _, _, val = args.bc.partition(":")
        try:
            c = float(val or 0.0)
        except ValueError as exc:
            raise UsageError(f"bad boundary value in {args.bc!r}") from exc
        boundary = Dirichlet((float(x[0]), float(x[-1])), c, c)
        n = x.size - 1
    else:
        raise UsageError(f"unknown boundary condition {args.bc!r}")
    if args.N is not None and args.N != n:
        grid = SolverConfig(args.N, args.T, boundary).grid()
        if args.bc == "periodic":
            u = np.interp(grid, np.append(x, x[0] + L), np.append(u, u[0]))
        else:
            u = np.interp(grid, x, u)
        n = args.N
    times = tuple(np.linspace(0.0, args.T, args.frames))
    cfg = SolverConfig(n, args.T, boundary, scheme=args.scheme, output_times=times)
    traj = solve(coeff, u, cfg)
    rows = ((t, xi, ui) for t, f in zip(traj.times, traj.fields) for xi, ui in zip(traj.x, f))
    _write_csv(args.out, ("t", "x", "u"), rows)
    return EXIT_OK


def cmd_supersolution(args, out):
    coeff = _coeff(args.coeff)
    psi = _psi(args.psi, args.L)
    cfg = SolverConfig(args.N, args.T, Dirichlet((0.0, 0.5 * args.L)), scheme=args.scheme)
    br = minimal_supersolution(coeff, psi, args.k, cfg)
    rows = ((t, z, lo, up) for t, lf, uf in zip(br.times, br.lower.fields, br.upper.fields)
            for z, lo, up in zip(br.z, lf, uf))
    _write_csv(args.out, ("t", "z", "lower", "upper"), rows)
    return EXIT_OK


def cmd_verify_modulus(args, out):
    x, u = _read_field(args.field)
    L = x.size * (x[1] - x[0])
    psi = _psi(args.psi, L)
    field = PeriodicField(L, u)
    rep = check_modulus(field, psi)
    res = {"initial": {"holds": rep.holds, "worst_violation": rep.worst_violation,
                       "witness": list(rep.witness)}}
    ok = rep.holds
    if args.coeff is not None:
        coeff = _coeff(args.coeff)
        times = tuple(np.linspace(0.0, args.T, args.frames))
        run = solve(coeff, u, SolverConfig(x.size, args.T, Periodic(L, float(x[0])),
                                           output_times=times))
        br = minimal_supersolution(coeff, psi, args.k, SolverConfig(
            x.size, args.T, Dirichlet((0.0, 0.5 * L)), output_times=times))
        tp = two_point_check(run, br.upper)
        res["evolution"] = tp.as_dict()
        ok = ok and tp.passed
    res["pass"] = ok
    _emit_json(res, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sharpness(args, out):
    coeff = _coeff(args.coeff)
    psi = _psi(args.psi, args.L)
    z = 0.25 * args.L if args.z is None else args.z
    cfg = SolverConfig(args.N, args.t, Dirichlet((0.0, 0.5 * args.L)), scheme=args.scheme)
    rep = sharpness_experiment(coeff, psi, args.k, z, args.t, cfg)
    _emit_json(rep.as_dict(), out)
    return EXIT_OK


def _heat_hoelder_exponents():
    heat = co.Coefficient.heat()
    ts = np.logspace(-4, -1, 7)
    from .modulus import ModulusFunction
    return [{"beta": b, "fitted": es.fit_time_exponent(heat, ModulusFunction.hoelder(1.0, b, 2.0), ts),
             "predicted": -(1.0 - b) / 2.0} for b in (0.3, 0.5, 0.8)]


EXAMPLE_TABLES = {
    "heat_constant": es.heat_table,
    "heat_hoelder_exponents": _heat_hoelder_exponents,
    "power_law_criteria": es.power_law_table,
}


def _run_table(name):
    return name, EXAMPLE_TABLES[name]()


def cmd_examples(args, out):
    names = list(EXAMPLE_TABLES)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            res = dict(pool.map(_run_table, names))
    else:
        res = dict(map(_run_table, names))
    _emit_json(res, out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="modcont", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="Lipschitz dichotomy for a coefficient")
    s.add_argument("--coeff", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("translator", help="sample a translating solution")
    s.add_argument("--coeff", required=True)
    s.add_argument("--speed", type=float, required=True)
    s.add_argument("--prange", type=_range, required=True)
    s.add_argument("--t", type=float, default=0.0)
    s.add_argument("--n", type=int, default=201)
    s.add_argument("--out")
    s.set_defaults(func=cmd_translator)

    s = sub.add_parser("bound", help="gradient bounds for psi_+")
    s.add_argument("--coeff", required=True)
    s.add_argument("--psi", required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--L", type=float, default=2.0)
    s.add_argument("--side", choices=("upper", "lower", "both"), default="both")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("solve", help="integrate the flow from CSV data (columns x,u)")
    s.add_argument("--coeff", required=True)
    s.add_argument("--init", required=True)
    s.add_argument("--bc", default="periodic")
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--N", type=int)
    s.add_argument("--frames", type=int, default=11)
    s.add_argument("--scheme", choices=("explicit", "implicit"), default="explicit")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("supersolution", help="bracket for the minimal supersolution")
    s.add_argument("--coeff", required=True)
    s.add_argument("--psi", required=True)
    s.add_argument("--L", type=float, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--N", type=int, default=128)
    s.add_argument("--scheme", choices=("explicit", "implicit"), default="explicit")
    s.add_argument("--out")
    s.set_defaults(func=cmd_supersolution)

    s = sub.add_parser("verify-modulus", help="check a modulus on periodic CSV data")
    s.add_argument("--field", required=True)
    s.add_argument("--psi", required=True)
    s.add_argument("--coeff", help="also evolve and check the psi_+ bracket")
    s.add_argument("--T", type=float, default=0.01)
    s.add_argument("--k", type=int, default=16)
    s.add_argument("--frames", type=int, default=11)
    s.set_defaults(func=cmd_verify_modulus)

    s = sub.add_parser("sharpness", help="odd-reflection sharpness experiment")
    s.add_argument("--coeff", required=True)
    s.add_argument("--psi", required=True)
    s.add_argument("--L", type=float, default=2.0)
    s.add_argument("--k", type=int, default=64)
    s.add_argument("--z", type=float)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--N", type=int, default=128)
    s.add_argument("--scheme", choices=("explicit", "implicit"), default="explicit")
    s.set_defaults(func=cmd_sharpness)

    s = sub.add_parser("examples", help="reference tables as JSON")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_examples)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"modcont: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModContError, ArithmeticError, ValueError) as exc:
        print(f"modcont: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def console():
    sys.exit(main())
