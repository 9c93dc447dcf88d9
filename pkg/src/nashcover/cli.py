"""``nashcover`` command-line front end.

Exit codes: 0 ok, 1 verification failed, 2 invalid input, 3 iteration guard hit,
4 search space too large, 5 infeasible solution, 6 self-check failure.
"""

from __future__ import annotations

import argparse
import sys

from . import bench, io
from .errors import (
    EnumerationTooLargeError,
    GenerationError,
    InternalConsistencyError,
    InvalidInputError,
    IterationGuardError,
    NashCoverError,
    UnsatisfiableFamilyError,
)
from .exact import brute_force_opt, brute_force_unsmoothed_opt
from .families import DEFAULT_MEMBER_LIMIT
from .generators import generate, spec_from_dict
from .reductions import (
    GoodsAllocationInput,
    MaxCoverageInput,
    PublicDecisionInput,
    VertexCoverInput,
    from_goods_allocation,
    from_max_k_coverage,
    from_public_decisions,
    from_vertex_cover,
)
from .selfcheck import selfcheck
from .solver import TRACE_LEVELS, SolverConfig, solve
from .verify import verify

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_GUARD = 3
EXIT_TOO_LARGE = 4
EXIT_INFEASIBLE = 5
EXIT_SELFCHECK = 6


def _emit(doc, out) -> None:
    text = io.dumps(doc)
    if out:
        io.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load_instance(path):
    return io.instance_from_dict(io.read_json(path), str(path))


def _load_solution(path):
    return io.solution_from_dict(io.read_json(path), str(path))


def cmd_gen(args) -> int:
    data = io.read_json(args.spec) if args.spec else {}
    if not isinstance(data, dict):
        raise InvalidInputError(f"{args.spec}: generator spec must be an object")
    data = dict(data)
    for key in ("seed", "n", "T", "kind"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    try:
        instance = generate(spec_from_dict(data))
    except GenerationError as exc:
        raise InvalidInputError(str(exc)) from None
    _emit(io.instance_to_dict(instance), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    init = _load_solution(args.init) if args.init else None
    config = SolverConfig(
        epsilon=args.epsilon,
        beta=args.beta,
        init=init,
        max_iterations=args.max_iterations,
        trace_level=args.trace,
    )
    try:
        sol, trace = solve(instance, config)
    except IterationGuardError as exc:
        if args.trace_out and exc.trace is not None:
            io.write_atomic(args.trace_out, io.dumps(io.trace_to_dict(exc.trace)))
        raise
    doc = io.solution_to_dict(instance, sol, updates=trace.updates, terminal=trace.terminal)
    _emit(doc, args.out)
    if args.trace_out:
        io.write_atomic(args.trace_out, io.dumps(io.trace_to_dict(trace)))
    return EXIT_OK


def cmd_exact(args) -> int:
    instance = _load_instance(args.instance)
    if args.unsmoothed:
        res = brute_force_unsmoothed_opt(instance, args.limit)
        doc = io.solution_to_dict(instance, res.solution, nsw_c=res.nsw_c, explored=res.explored)
    else:
        res = brute_force_opt(instance, args.limit)
        doc = io.solution_to_dict(instance, res.solution, explored=res.explored)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = _load_instance(args.instance)
    solution = _load_solution(args.solution)
    optimal = _load_solution(args.exact) if args.exact else None
    if optimal is not None and not verify(instance, optimal).feasible:
        raise InvalidInputError(f"{args.exact}: reference solution is infeasible")
    report = verify(instance, solution, optimal, epsilon=args.epsilon)
    _emit(report.to_dict(), args.out)
    if not report.feasible:
        for t in report.failing_rounds:
            print(f"round {t}: {list(solution[t])} is not a member of the round's family", file=sys.stderr)
        return EXIT_INFEASIBLE
    for msg in report.failures:
        print(msg, file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _reduce_max_coverage(d):
    return from_max_k_coverage(
        MaxCoverageInput(d["universe_size"], tuple(d["sets"]), d["k"], d["uniform_size"])
    )


def _reduce_public(d):
    return from_public_decisions(PublicDecisionInput(d["n"], tuple(d["issues"])))


def _reduce_goods(d):
    return from_goods_allocation(GoodsAllocationInput(d["n"], d["m"], tuple(d["valued"])))


def _reduce_vertex_cover(d):
    return from_vertex_cover(VertexCoverInput(tuple(d["vertices"]), tuple(d["edges"]), d["k"]))


REDUCTIONS = {
    "max-coverage": _reduce_max_coverage,
    "public-decisions": _reduce_public,
    "goods": _reduce_goods,
    "vertex-cover": _reduce_vertex_cover,
}


def cmd_reduce(args) -> int:
    data = io.read_json(args.input)
    try:
        instance = REDUCTIONS[args.kind](data)
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"{args.input}: malformed {args.kind} input ({exc})") from None
    _emit(io.instance_to_dict(instance), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.suite:
        suite = io.read_json(args.suite)
    else:
        suite = bench.default_suite(args.count, args.seed if args.seed is not None else 0)
    if args.no_exact:
        suite = dict(suite, exact=False)
    if args.limit is not None:
        suite = dict(suite, limit=args.limit)
    report = bench.run_suite(suite)
    if args.csv:
        io.write_atomic(args.csv, bench.rows_to_csv(report["rows"]))
    _emit(report, args.out)
    s = report["summary"]
    print(
        f"{s['instances']} instances, {s['errors']} errors, min ratio {s['min_ratio']}, "
        f"median ratio {s['median_ratio']}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    results = selfcheck()
    doc = {"passed": all(r.passed for r in results), "checks": [vars(r) for r in results]}
    _emit(doc, args.out)
    return EXIT_OK if doc["passed"] else EXIT_SELFCHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nashcover", description="Fair coverage via local search on Nash social welfare.")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--out", help="write JSON here (atomically) instead of stdout")

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("spec", nargs="?", help="generator spec JSON")
    g.add_argument("--seed", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--T", type=int)
    g.add_argument("--kind")
    out(g)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run the local search")
    s.add_argument("instance")
    s.add_argument("--epsilon", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--init", help="starting solution JSON")
    s.add_argument("--max-iterations", type=int)
    s.add_argument("--trace", choices=TRACE_LEVELS, default="summary")
    s.add_argument("--trace-out", help="write the iteration trace here")
    s.add_argument("--seed", type=int, help="accepted for symmetry; the solver is deterministic")
    out(s)
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("exact", help="brute-force optimum")
    e.add_argument("instance")
    e.add_argument("--limit", type=int, default=DEFAULT_MEMBER_LIMIT)
    e.add_argument("--unsmoothed", action="store_true", help="maximize the product of raw coverage counts")
    out(e)
    e.set_defaults(func=cmd_exact)

    v = sub.add_parser("verify", help="check a solution, optionally against an optimum")
    v.add_argument("instance")
    v.add_argument("solution")
    v.add_argument("--exact", help="optimal solution JSON")
    v.add_argument("--epsilon", type=float)
    out(v)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="build an instance from another problem")
    r.add_argument("kind", choices=sorted(REDUCTIONS))
    r.add_argument("input")
    out(r)
    r.set_defaults(func=cmd_reduce)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("suite", nargs="?", help="suite JSON; defaults to the built-in suite")
    b.add_argument("--count", type=int, default=200)
    b.add_argument("--seed", type=int)
    b.add_argument("--limit", type=int)
    b.add_argument("--no-exact", action="store_true")
    b.add_argument("--csv", help="also write rows as CSV")
    out(b)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("selfcheck", help="numeric checks of the supporting inequalities")
    out(c)
    c.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IterationGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InternalConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except EnumerationTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (InvalidInputError, UnsatisfiableFamilyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NashCoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
