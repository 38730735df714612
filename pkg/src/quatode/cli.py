"""Batch command-line front end.

Commands: solve | spectrum | translate | verify | eval.  Stdout carries
data, stderr carries diagnostics; --json switches every command to a
machine-readable document with sorted keys so identical inputs give
byte-identical output.  Exit codes: 0 success, 1 input error, 2 numeric
failure.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import ode, oracle
from .config import DEFAULT
from .errors import (DomainError, NumericError, ParseError, QuatodeError,
                     StructureError)
from .jordan import spectrum
from .operators import LinearityClass
from .parser import format_operator, parse_ode, parse_operator, \
    parse_quaternion
from .quaternion import Quaternion
from .translate import op_to_real, opmatrix_to_real, real_to_op

_NUM = "%.12g"

# constants worth naming in comments; purely cosmetic
_ROOT5 = math.sqrt(5.0)
_NAMED = {
    "sqrt(2)": math.sqrt(2.0), "sqrt(3)": math.sqrt(3.0), "sqrt(5)": _ROOT5,
    "sqrt(2)/2": math.sqrt(2.0) / 2, "sqrt(3)/2": math.sqrt(3.0) / 2,
    "sqrt(5)/2": _ROOT5 / 2, "1/sqrt(3)": 1 / math.sqrt(3.0),
    "1/sqrt(5)": 1 / _ROOT5, "(1+sqrt(5))/2": (1 + _ROOT5) / 2,
    "(1-sqrt(5))/2": (1 - _ROOT5) / 2, "(1+sqrt(5))/4": (1 + _ROOT5) / 4,
    "(1-sqrt(5))/4": (1 - _ROOT5) / 4,
}


def _recognize(value):
    if value == 0.0 or abs(value) in (1.0, 2.0, 0.5):
        return None
    for name, v in _NAMED.items():
        if abs(value - v) < 1e-9:
            return name
        if abs(value + v) < 1e-9:
            return "-" + name
    return None


def _fmt_quat(q):
    parts = []
    for value, unit in zip(q.components(), ("", "i", "j", "k")):
        if abs(value) < 1e-13:
            continue
        body = (_NUM % abs(value)) + unit
        parts.append(("-" if value < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += " %s %s" % (sign, body)
    return out


def _fmt_term(term):
    if isinstance(term, ode.QuatExpTerm):
        return "exp((%s)*x)*(%s)" % (_fmt_quat(term.rate),
                                     _fmt_quat(term.const))
    if isinstance(term, ode.ComplexExpTerm):
        z = _NUM % term.z.real
        if term.z.imag:
            z += "%+si" % (_NUM % term.z.imag)
        pieces = ["(%s)" % _fmt_quat(term.u)]
        if term.k:
            pieces.append("x^%d" % term.k)
        pieces.append("exp((%s)*x)" % z)
        pieces.append("(%s%+si)" % (_NUM % term.d.real, _NUM % term.d.imag))
        return "*".join(pieces)

    pieces = []
    env = []
    if term.k:
        env.append("x" if term.k == 1 else "x^%d" % term.k)
    if term.a:
        env.append("exp(%s*x)" % (_NUM % term.a))
    for quat, trig in ((term.coeff_cos * term.constant, "cos"),
                       (-term.coeff_sin * term.constant, "sin")):
        if quat.norm() < 1e-13:
            continue
        bits = ["(%s)" % _fmt_quat(quat)]
        if term.b:
            bits.append("%s(%s*x)" % (trig, _NUM % term.b))
        pieces.append("*".join(bits + env))
        if term.b == 0.0:
            break  # pure exponential has no sin piece
    return " + ".join(pieces) if pieces else "0"


def _solution_pretty(sol, tol):
    terms = sol.display_terms(tol)
    if not terms:
        return "0"
    return "\n  + ".join(_fmt_term(t) for t in terms)


def _solution_json(sol, tol):
    doc = sol.to_json(tol)
    for term in doc["terms"]:
        notes = []
        for key in ("a", "b"):
            if key in term:
                name = _recognize(term[key])
                if name:
                    notes.append("%s = %s" % (key, name))
        if notes:
            term["comment"] = ", ".join(notes)
    return doc


def _emit(doc):
    print(json.dumps(doc, sort_keys=True))


# ---------------------------------------------------------------------------
# input plumbing

def _tolerances(args):
    tol = DEFAULT
    env_cluster = os.environ.get("QUATODE_TOL_CLUSTER")
    if env_cluster:
        tol = tol.replace(cluster=float(env_cluster))
    env_rank = os.environ.get("QUATODE_TOL_RANK")
    if env_rank:
        tol = tol.replace(rank=float(env_rank))
    for item in args.tol or []:
        if "=" not in item:
            raise DomainError("--tol expects name=value, got %r" % item)
        name, _, value = item.partition("=")
        if not hasattr(tol, name):
            raise DomainError("unknown tolerance %r" % name)
        tol = tol.replace(**{name: float(value)})
    return tol


def _load_problem(args):
    if args.problem and args.ode:
        raise DomainError("give either a problem file or --ode, not both")
    if args.problem:
        try:
            with open(args.problem) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise DomainError("cannot read %s: %s" % (args.problem, exc))
        except json.JSONDecodeError as exc:
            raise ParseError("malformed JSON in %s: %s"
                             % (args.problem, exc.msg), exc.pos)
        problem = ode.OdeProblem.from_json(doc)
    elif args.ode:
        skeleton = parse_ode(args.ode)
        initial = [parse_quaternion(s) for s in (args.initial or [])]
        problem = ode.OdeProblem(order=skeleton.order,
                                 coefficients=skeleton.coefficients,
                                 x0=args.x0, initial=initial)
    else:
        raise DomainError("no problem given; pass a JSON file or --ode")
    return problem


def _add_problem_args(sub):
    sub.add_argument("problem", nargs="?", help="problem JSON file")
    sub.add_argument("--ode", help="equation text, e.g. "
                                   "'D^2 - L_i*R_j*D - L_j*R_i'")
    sub.add_argument("--initial", action="append",
                     help="initial quaternion (repeat per derivative order)")
    sub.add_argument("--x0", type=float, default=0.0,
                     help="expansion point (default 0)")
    sub.add_argument("--tol", action="append", metavar="NAME=VALUE",
                     help="override a tolerance")
    sub.add_argument("--json", action="store_true",
                     help="machine-readable output")


def _parse_grid(text, x0):
    if text is None:
        return np.linspace(x0, x0 + 1.0, 11)
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise DomainError("--grid expects a:b:n, got %r" % text)
    if n < 2 or b <= a:
        raise DomainError("--grid needs b > a and n >= 2")
    return np.linspace(a, b, n)


# ---------------------------------------------------------------------------
# commands

def _cmd_solve(args):
    tol = _tolerances(args)
    problem = _load_problem(args)
    sol = ode.solve(problem, tol)
    if args.eval is not None:
        q = sol.evaluate(args.eval)
        if args.json:
            _emit({"x": args.eval, "value": q.to_json()})
        else:
            print("phi(%s) = %s" % (_NUM % args.eval, _fmt_quat(q)))
        return 0
    if args.json:
        _emit(_solution_json(sol, tol))
    else:
        print("phi(x) =\n    " + _solution_pretty(sol, tol).replace(
            "\n", "\n  "))
    return 0


def _cmd_spectrum(args):
    tol = _tolerances(args)
    problem = _load_problem(args)
    m = opmatrix_to_real(ode.build_companion(problem))
    spec = spectrum(m, tol)
    doc = spec.to_json()
    for entry in doc["real"]:
        name = _recognize(entry["value"])
        if name:
            entry["comment"] = name
    for entry in doc["complex"]:
        notes = [p for p in
                 ("re = %s" % _recognize(entry["re"])
                  if _recognize(entry["re"]) else None,
                  "im = %s" % _recognize(entry["im"])
                  if _recognize(entry["im"]) else None) if p]
        if notes:
            entry["comment"] = ", ".join(notes)
    if args.json:
        _emit(doc)
    else:
        for entry in doc["real"]:
            line = "real %s  (x%d)" % (_NUM % entry["value"], entry["mult"])
            if "comment" in entry:
                line += "   # " + entry["comment"]
            print(line)
        for entry in doc["complex"]:
            line = "pair %s +- %si  (x%d)" % (_NUM % entry["re"],
                                              _NUM % entry["im"],
                                              entry["mult"])
            if "comment" in entry:
                line += "   # " + entry["comment"]
            print(line)
    return 0


def _cmd_translate(args):
    if args.from_matrix:
        try:
            rows = json.loads(args.from_matrix)
        except json.JSONDecodeError as exc:
            raise ParseError("malformed matrix JSON: %s" % exc.msg, exc.pos)
        op = real_to_op(np.array(rows, dtype=float))
        if args.json:
            _emit({"operator": format_operator(op)})
        else:
            print(format_operator(op))
        return 0
    if not args.expr:
        raise DomainError("give an operator expression or --from-matrix")
    op = parse_operator(args.expr)
    m = op_to_real(op)
    if args.json:
        _emit({"matrix": [[float(v) for v in row] for row in m]})
    else:
        for row in m:
            print("  ".join("%6s" % (_NUM % v) for v in row))
    return 0


def _cmd_verify(args):
    tol = _tolerances(args)
    problem = _load_problem(args)
    sol = ode.solve(problem, tol)
    xs = _parse_grid(args.grid, problem.x0)
    if xs[0] < problem.x0:
        raise DomainError("grid must start at or after x0")
    m = opmatrix_to_real(ode.build_companion(problem))
    from .quaternion import stack_columns
    y0 = stack_columns(problem.initial)
    cfg = oracle.IntegratorConfig(step=args.step)
    states = oracle.trajectory(m, y0, problem.x0, xs, cfg)
    devs = [float((sol.evaluate(x) - Quaternion(*states[i][0:4])).norm())
            for i, x in enumerate(xs)]
    worst = max(devs)
    if args.json:
        _emit({"grid": [float(x) for x in xs], "deviation": devs,
               "max_deviation": worst, "bound": args.max_dev,
               "ok": worst < args.max_dev})
    else:
        print("max |closed form - RK4| over %d points: %s"
              % (len(xs), _NUM % worst))
    if worst >= args.max_dev:
        print("deviation exceeds the bound %s" % (_NUM % args.max_dev),
              file=sys.stderr)
        return 2
    return 0


def _cmd_eval(args):
    tol = _tolerances(args)
    problem = _load_problem(args)
    sol = ode.solve(problem, tol)
    if args.grid:
        xs = _parse_grid(args.grid, problem.x0)
    else:
        xs = [args.at if args.at is not None else problem.x0]
    rows = [{"x": float(x),
             "value": sol.evaluate(x, args.derivative).to_json()}
            for x in xs]
    if args.json:
        _emit({"derivative": args.derivative, "values": rows})
    else:
        for row in rows:
            print("phi%s(%s) = %s"
                  % ("'" * args.derivative, _NUM % row["x"],
                     _fmt_quat(Quaternion.from_json(row["value"]))))
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="quatode",
        description="solve quaternionic ODEs with two-sided constant "
                    "coefficients in closed form")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="print the closed-form solution")
    _add_problem_args(p)
    p.add_argument("--eval", type=float, metavar="X",
                   help="print phi(X) instead of the solution")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("spectrum", help="eigenvalues of the realified "
                                        "companion matrix")
    _add_problem_args(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("translate", help="operator expression <-> 4x4 "
                                         "real matrix")
    p.add_argument("expr", nargs="?", help="operator expression")
    p.add_argument("--from-matrix", metavar="JSON",
                   help="4x4 matrix as a JSON array of rows")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("verify", help="compare the closed form against a "
                                      "fixed-step RK4 integration")
    _add_problem_args(p)
    p.add_argument("--grid", metavar="A:B:N", help="sample grid "
                                                   "(default x0:x0+1:11)")
    p.add_argument("--step", type=float, default=1e-4,
                   help="RK4 step size (default 1e-4)")
    p.add_argument("--max-dev", type=float, default=1e-6,
                   help="failure bound on the deviation (default 1e-6)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("eval", help="evaluate the solution")
    _add_problem_args(p)
    p.add_argument("--at", type=float, metavar="X", help="sample point")
    p.add_argument("--grid", metavar="A:B:N", help="sample grid")
    p.add_argument("--derivative", type=int, default=0,
                   help="derivative order (default 0)")
    p.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (NumericError, StructureError) as exc:
        print("numeric error: %s" % exc, file=sys.stderr)
        return 2
    except QuatodeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
