"""Command-line front end.

Exit codes: 0 ok, 1 check failure, 2 invalid input, 3 budget exhausted / lower bound only.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .cache import ResultCache
from .engine import coset_sumset
from .errors import BudgetExceeded, InvalidInput
from .extremal import enumerate_extremal
from .residue import as_modulus, jacobi
from .search import Budget, davenport, e_constant
from .suite import SUITES, run_suite
from .weights import parse_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _emit(obj, as_json: bool, text: str):
    print(json.dumps(obj, sort_keys=True) if as_json else text)


def _timing(label, t0):
    print(f"[{label}] {(time.perf_counter() - t0) * 1000:.1f} ms", file=sys.stderr)


def _budget(args) -> Budget:
    return Budget(args.max_nodes, args.max_seconds)


def _cache(args):
    if getattr(args, "no_cache", False):
        return None
    return ResultCache(args.cache)


def cmd_jacobi(args) -> int:
    s = jacobi(args.a, args.n)
    print(f"{s:+d}")
    return EXIT_OK


def cmd_weights(args) -> int:
    A = parse_spec(args.spec, args.n)
    info = {"n": A.n, "weights": A.spec, "elements": list(A.elements), "size": len(A), "is_group": A.is_group}
    _emit(info, args.json, " ".join(map(str, A.elements)))
    return EXIT_OK


def cmd_sumset(args) -> int:
    A = parse_spec(args.spec, args.n)
    result = sorted(coset_sumset([(A.elements, x) for x in args.terms], A.n))
    full = len(result) == A.n
    info = {"n": A.n, "weights": A.spec, "terms": args.terms, "sumset": result, "full": full}
    _emit(info, args.json, ("Z_n " if full else "") + " ".join(map(str, result)))
    return EXIT_OK


def _constant(args, kind: str) -> int:
    A = parse_spec(args.spec, args.n)
    cache = _cache(args)
    t0 = time.perf_counter()
    rec = cache.get(kind, A.n, A.spec) if cache else None
    if rec is None or not rec.exact:
        fn = davenport if kind == "D" else e_constant
        rec = fn(A, _budget(args), args.jobs)
        if cache:
            cache.put(rec)
    _timing(f"{kind}_{A.spec}({A.n})", t0)
    d = rec.to_dict()
    d.pop("elapsed_ms")
    text = f"{kind}_{A.spec}({A.n}) = {rec.value} {rec.status}  witness: {' '.join(map(str, rec.witness))}"
    if not rec.exact:
        text = f"{kind}_{A.spec}({A.n}) >= {rec.value} lower_bound  witness: {' '.join(map(str, rec.witness))}"
    _emit(d, args.json, text)
    return EXIT_OK if rec.exact else EXIT_BUDGET


def cmd_davenport(args) -> int:
    return _constant(args, "D")


def cmd_e_constant(args) -> int:
    return _constant(args, "E")


def cmd_extremal(args) -> int:
    A = parse_spec(args.spec, args.n)
    cache = _cache(args)
    t0 = time.perf_counter()
    rep = cache.get("X", A.n, A.spec) if cache else None
    if rep is None or rep.partial:
        rep = enumerate_extremal(A, _budget(args), args.jobs)
        if cache:
            cache.put(rep)
    _timing(f"extremal_{A.spec}({A.n})", t0)
    if args.json:
        print(rep.to_json())
    else:
        print(f"D_{A.spec}({A.n}) = {rep.davenport_value}; {len(rep.classes)} extremal classes"
              f" (theorem: {rep.theorem or 'none'}){' PARTIAL' if rep.partial else ''}")
        for cls, labels in zip(rep.classes, rep.labels):
            print(f"  {' '.join(map(str, cls)):<24} {', '.join(labels) or '-'}")
        if rep.unmatched:
            print(f"unmatched: {len(rep.unmatched)}")
    if rep.partial:
        return EXIT_BUDGET
    return EXIT_FAIL if rep.unmatched else EXIT_OK


def _parse_perturb(items) -> dict:
    out = {}
    for item in items or ():
        cid, sep, delta = item.partition("=")
        try:
            out[cid] = int(delta) if sep else 1
        except ValueError:
            raise InvalidInput(f"bad --perturb value {item!r}; expected ID=DELTA") from None
    return out


def cmd_verify(args) -> int:
    try:
        perturbations = _parse_perturb(args.perturb)
        t0 = time.perf_counter()
        result = run_suite(args.suite, args.jobs, _cache(args), _budget(args), perturbations)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    for r in result.results:
        if args.json:
            print(json.dumps({"id": r.id, "expected": r.expected, "actual": r.actual,
                              "pass": r.passed, "error": r.error}, sort_keys=True))
        else:
            status = "PASS" if r.passed else "FAIL"
            extra = f"  ({r.error})" if r.error else ""
            print(f"{status} {r.id}: expected {r.expected}, got {r.actual}{extra}")
        print(f"  {r.id} {r.elapsed_ms:.1f} ms", file=sys.stderr)
    failed = sum(not r.passed for r in result.results)
    print(f"{args.suite}: {len(result.results) - failed}/{len(result.results)} passed")
    _timing(f"verify {args.suite}", t0)
    return EXIT_OK if result.passed else EXIT_FAIL


def _add_search_flags(p):
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    p.add_argument("--cache", default=None, help="cache file (default: $DAVENPORT_CACHE or ~/.cache)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zerosum", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("jacobi", parents=[common], help="Jacobi symbol (a/n)")
    p.add_argument("a", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("weights", parents=[common], help="list a weight set")
    p.add_argument("n", type=int)
    p.add_argument("spec", help="U, Usq, Q, S, L:<p>, explicit:<a,b,...>")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("sumset", parents=[common], help="A*x1 + ... + A*xk in Z_n")
    p.add_argument("n", type=int)
    p.add_argument("spec")
    p.add_argument("terms", type=int, nargs="+")
    p.set_defaults(func=cmd_sumset)

    for name, func, help_ in (("davenport", cmd_davenport, "weighted Davenport constant D_A(n)"),
                              ("e-constant", cmd_e_constant, "E_A(n): forced zero-sum of length n"),
                              ("extremal", cmd_extremal, "enumerate and classify A-extremal sequences")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("n", type=int)
        p.add_argument("spec")
        _add_search_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="run an embedded verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--perturb", action="append", metavar="ID=DELTA",
                   help="shift one expected value (negative control); repeatable")
    _add_search_flags(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None:
        try:
            as_modulus(args.n)
        except InvalidInput as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
