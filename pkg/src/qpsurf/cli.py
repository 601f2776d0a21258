"""``qps``: brackets of quasi-surfaces from the command line.

Exit codes: 0 ok, 1 a check failed, 2 usage error (including unknown names),
3 parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .algebra import AlgebraElement, ParseError, format_coeff
from .brackets import ClassBrackets, based_d, bracket2, mu_gate, mu_refined, mu_total
from .checks import SUITES, CheckOptions, run_suite
from .foxcalc import delta_apply, fox_apply, fox_brace, gate_derivative, gate_fox_derivative
from .surface import based_word, loop_to_class
from .tracealg import InducedBrace, evaluate, format_trace_polynomial, parse_trace_polynomial
from .workspace import (
    UnknownName,
    Workspace,
    combination_records,
    element_records,
    format_combination,
    load_workspace,
)

log = logging.getLogger("qpsurf")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3
DEFAULT_WORKSPACE = "workspace.qs"


class UsageError(Exception):
    pass


def _workspace(args) -> Workspace:
    path = args.workspace or os.environ.get("QPS_WORKSPACE") or DEFAULT_WORKSPACE
    if not Path(path).exists():
        raise UsageError(f"workspace file {path!r} not found (use -w FILE)")
    return load_workspace(path)


def _emit_combination(args, ws, x):
    if args.json:
        print(json.dumps({"terms": combination_records(ws.alphabet, x)}))
    else:
        print(format_combination(ws.alphabet, x))


def _emit_element(args, ws, x: AlgebraElement):
    if args.json:
        print(json.dumps({"terms": element_records(ws.alphabet, x)}))
    else:
        print(ws.alphabet.format_element(x))


def _element(ws, text: str) -> AlgebraElement:
    if text in ws.based:
        return AlgebraElement.word(based_word(ws.surface, ws.based[text]))
    return ws.alphabet.parse_element(text)


# ---------------------------------------------------------------------------
# commands


def cmd_bracket(args):
    ws = _workspace(args)
    _emit_combination(args, ws, bracket2(ws.surface, ws.loop(args.a), ws.loop(args.b)))


def cmd_mu(args):
    ws = _workspace(args)
    if len(args.loops) != args.m:
        raise UsageError(f"-m {args.m} needs exactly {args.m} loop names, got {len(args.loops)}")
    loops = [ws.loop(n) for n in args.loops]
    if args.gate is not None:
        if not 1 <= args.gate <= ws.surface.gates:
            raise UsageError(f"gate {args.gate} out of range 1..{ws.surface.gates}")
        out = mu_gate(ws.surface, args.gate, loops)
    else:
        out = mu_total(ws.surface, loops)
    _emit_combination(args, ws, out)


def cmd_class(args):
    ws = _workspace(args)
    c = loop_to_class(ws.surface, ws.loop(args.loop))
    if args.json:
        print(json.dumps({"class": ws.alphabet.format_class(c)}))
    else:
        print(f"<{ws.alphabet.format_class(c)}>")


def cmd_jacobi(args):
    ws = _workspace(args)
    X = ws.surface
    x, y, z = (loop_to_class(X, ws.loop(n)) for n in (args.x, args.y, args.z))
    cb = ClassBrackets(X)
    left = cb.jacobiator(x, y, z)
    right = cb.mu(x, y, z) - cb.mu(z, y, x)
    if args.json:
        print(json.dumps({"jacobiator": combination_records(ws.alphabet, left),
                          "mu3_difference": combination_records(ws.alphabet, right),
                          "holds": left == right}))
    else:
        print("jacobiator:")
        print(format_combination(ws.alphabet, left))
        print("mu3(x,y,z) - mu3(z,y,x):")
        print(format_combination(ws.alphabet, right))
        print("holds" if left == right else "FAILS")
    return EXIT_OK if left == right else EXIT_FAIL


def cmd_based_d(args):
    ws = _workspace(args)
    _emit_element(args, ws, based_d(ws.surface, ws.based_loop(args.a), ws.loop(args.b)))


def cmd_refined(args):
    ws = _workspace(args)
    rest = [ws.loop(n) for n in args.rest]
    _emit_element(args, ws, mu_refined(ws.surface, args.gate, ws.based_loop(args.a), rest))


def cmd_fox(args):
    ws = _workspace(args)
    if args.fox_cmd == "gate":
        _emit_element(args, ws, gate_fox_derivative(ws.surface, args.gate, ws.based_loop(args.loop)))
        return
    if args.fox_cmd == "brace":
        d = ws.derivative(args.d) if args.d else gate_derivative(ws.surface, args.gate)
        classes = [ws.alphabet.parse_class(t) if t not in ws.loops else loop_to_class(ws.surface, ws.loop(t))
                   for t in args.args]
        _emit_combination(args, ws, fox_brace([d] * len(classes), classes))
        return
    d = ws.derivative(args.d)
    x = _element(ws, args.element)
    if args.fox_cmd == "apply":
        _emit_element(args, ws, fox_apply(d, x))
    else:
        _emit_element(args, ws, delta_apply(d, x))


def cmd_trace(args):
    ws = _workspace(args)
    alpha = ws.alphabet
    if args.trace_cmd == "eval":
        value = evaluate(parse_trace_polynomial(alpha, args.poly), ws.rep(args.rep))
        print(json.dumps({"value": format_coeff(value)}) if args.json else format_coeff(value))
        return
    cb = ClassBrackets(ws.surface)
    polys = [parse_trace_polynomial(alpha, p) for p in args.polys]
    if len(polys) == 2:
        out = InducedBrace(2, cb.bracket2_class)(*polys)
    elif len(polys) == 3:
        out = InducedBrace(3, cb.mu_class)(*polys)
    else:
        raise UsageError("trace bracket takes 2 polynomials (2-bracket) or 3 (total 3-bracket)")
    text = format_trace_polynomial(alpha, out)
    print(json.dumps({"polynomial": text}) if args.json else text)


def cmd_check(args):
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    seed = args.seed
    if seed is None:
        # fall back to the workspace seed line; a workspace is optional here
        path = Path(args.workspace or os.environ.get("QPS_WORKSPACE") or DEFAULT_WORKSPACE)
        ws_seed = load_workspace(path).seed if path.exists() else None
        seed = 0 if ws_seed is None else ws_seed
    opts = CheckOptions(max_turns=args.max_turns, max_ylen=args.max_ylen,
                        gates=args.gates, ygens=args.ygens,
                        dims=tuple(args.n) if args.n else (1, 2, 3), points=args.points)
    log.info("check %s: %d instances, seed %d", args.suite, args.random, seed)
    reports = [run_suite(s, args.random, seed, opts, parallel=args.parallel) for s in suites]
    if args.json:
        print(json.dumps({"reports": [r.as_dict() for r in reports]}, indent=None))
    else:
        for r in reports:
            print(r.render())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    def globals_(parser, default):
        # accepted before or after the subcommand; only the top level sets defaults
        parser.add_argument("-w", "--workspace", default=default(None),
                            help=f"workspace .qs file (default {DEFAULT_WORKSPACE} or $QPS_WORKSPACE)")
        parser.add_argument("--json", action="store_true", default=default(False),
                            help="machine-readable output")

    common = argparse.ArgumentParser(add_help=False)
    globals_(common, lambda v: argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="qps", description=__doc__.splitlines()[0])
    globals_(p, lambda v: v)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bracket", parents=[common], help="2-bracket [<a>, <b>] of two loops")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("mu", parents=[common], help="total (or single-gate) m-bracket")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("--gate", type=int)
    s.add_argument("loops", nargs="+")
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("class", parents=[common], help="free homotopy class of a loop")
    s.add_argument("loop")
    s.set_defaults(func=cmd_class)

    s = sub.add_parser("jacobi", parents=[common], help="both sides of the quasi-Jacobi identity")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("z")
    s.set_defaults(func=cmd_jacobi)

    s = sub.add_parser("based-d", parents=[common], help="derivation lifting [-, <b>] on a based loop")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_based_d)

    s = sub.add_parser("refined", parents=[common], help="based refinement of a gate bracket")
    s.add_argument("--gate", type=int, required=True)
    s.add_argument("a")
    s.add_argument("rest", nargs="*")
    s.set_defaults(func=cmd_refined)

    s = sub.add_parser("fox", parents=[common], help="Fox derivatives")
    fsub = s.add_subparsers(dest="fox_cmd", required=True)
    for name in ("apply", "delta"):
        f = fsub.add_parser(name, parents=[common])
        f.add_argument("d", help="fox derivative name")
        f.add_argument("element", help="algebra element, e.g. 'y1 y1 y2' or '2 y1 - g2', or a based loop name")
        f.set_defaults(func=cmd_fox)
    f = fsub.add_parser("gate", parents=[common], help="gate derivative of a based loop")
    f.add_argument("gate", type=int)
    f.add_argument("loop")
    f.set_defaults(func=cmd_fox)
    f = fsub.add_parser("brace", parents=[common], help="Fox brace with m copies of one derivative")
    g = f.add_mutually_exclusive_group(required=True)
    g.add_argument("-d", help="fox derivative name")
    g.add_argument("--gate", type=int, help="use the derivative of this gate")
    f.add_argument("args", nargs="+", help="classes (words) or loop names")
    f.set_defaults(func=cmd_fox)

    s = sub.add_parser("trace", parents=[common], help="trace polynomials")
    tsub = s.add_subparsers(dest="trace_cmd", required=True)
    t = tsub.add_parser("eval", parents=[common])
    t.add_argument("poly", help="e.g. 'T[y1]^2 - 2 T[g2 y1]'")
    t.add_argument("rep", help="representation name")
    t.set_defaults(func=cmd_trace)
    t = tsub.add_parser("bracket", parents=[common], help="induced 2-bracket (2 args) or 3-bracket (3 args)")
    t.add_argument("polys", nargs="+")
    t.set_defaults(func=cmd_trace)

    s = sub.add_parser("check", parents=[common], help="randomized exact identity suites")
    s.add_argument("suite", choices=[*SUITES, "all"])
    s.add_argument("--random", type=int, default=50, metavar="N", help="instances per suite")
    s.add_argument("--seed", type=int)
    s.add_argument("-n", type=int, action="append", help="representation dimension (repeatable; trace suite)")
    s.add_argument("--points", type=int, default=20, help="evaluation points per dimension")
    s.add_argument("--max-turns", type=int, default=5)
    s.add_argument("--max-ylen", type=int, default=3)
    s.add_argument("--gates", type=int)
    s.add_argument("--ygens", type=int)
    s.add_argument("--parallel", action="store_true", help="fan instances out over processes")
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        code = args.func(args)
    except ParseError as exc:
        print(f"qps: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UnknownName, UsageError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"qps: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"qps: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
