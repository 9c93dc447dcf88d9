"""Benchmark harness: generate, solve, optionally brute-force, and tabulate ratios."""

from __future__ import annotations

import csv
import io as _io
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor

from .errors import InvalidInputError
from .exact import brute_force_opt
from .families import DEFAULT_MEMBER_LIMIT
from .generators import KINDS, GenSpec, Rng, generate, spec_from_dict, spec_to_dict
from .core import coverage_values, nsw
from .solver import SolverConfig, iteration_bound, solve
from .verify import ratio_floor

THREADS_ENV = "NASHCOVER_THREADS"
COLUMNS = ("id", "kind", "n", "T", "nsw_alg", "nsw_opt", "ratio", "ratio_floor", "iterations", "bound", "wallclock_ms", "error")


def _kind_params(kind: str, rng: Rng) -> dict:
    # sizes chosen so every family has at most 6 members and brute force stays cheap
    if kind == "explicit":
        n = rng.integer(2, 8)
        return {"n": n, "sets_per_round": rng.integer(2, 6)}
    if kind == "knapsack":
        return {"n": rng.integer(2, 6), "capacity_mode": "tight"}
    if kind == "cardinality":
        return {"n": rng.integer(2, 5), "k_range": [1, 1]}
    if kind == "partition":
        n = rng.integer(2, 8)
        return {"n": n, "part_count": rng.integer(1, 3), "limit_range": [1, 1], "part_coverage": 0.4}
    return {"n": rng.integer(2, 8), "slots": rng.integer(1, 2), "pref_density": 0.3}


def default_suite(count: int = 200, seed: int = 0, max_members: int = 6) -> dict:
    """``count`` instances cycling through every family kind, with ``n <= 8`` and ``T <= 5``."""
    rng = Rng(seed)
    instances = []
    for i in range(count):
        kind = KINDS[i % len(KINDS)]
        params = _kind_params(kind, rng)
        spec = GenSpec(seed=rng.raw(), T=rng.integer(1, 5), kind=kind, max_members=max_members, **{
            k: tuple(v) if isinstance(v, list) else v for k, v in params.items()
        })
        instances.append({"id": f"{kind}-{i:04d}", "spec": spec_to_dict(spec)})
    return {"format_version": 1, "exact": True, "limit": DEFAULT_MEMBER_LIMIT, "instances": instances}


def _check_suite(suite) -> None:
    if not isinstance(suite, dict) or not isinstance(suite.get("instances", []), list):
        raise InvalidInputError("suite must be an object with an 'instances' list")
    for k, case in enumerate(suite.get("instances", [])):
        if not isinstance(case, dict) or "spec" not in case:
            raise InvalidInputError(f"instances[{k}]: missing 'spec'")


def run_case(case: dict, exact: bool = True, limit: int = DEFAULT_MEMBER_LIMIT) -> dict:
    """One pipeline; any failure lands in the row's ``error`` field."""
    row = dict.fromkeys(COLUMNS)
    row["id"] = case.get("id")
    start = time.perf_counter()
    try:
        spec = spec_from_dict(case["spec"])
        row["kind"], row["n"], row["T"] = spec.kind, spec.n, spec.T
        instance = generate(spec)
        sol, trace = solve(instance, SolverConfig(trace_level="none"))
        row["nsw_alg"] = nsw(coverage_values(instance, sol))
        row["iterations"] = trace.updates
        row["bound"] = iteration_bound(spec.n, spec.T)
        row["ratio_floor"] = ratio_floor(spec.n, spec.T)
        if exact:
            row["nsw_opt"] = brute_force_opt(instance, limit).nsw
            row["ratio"] = row["nsw_alg"] / row["nsw_opt"]
    except Exception as exc:  # recorded, not fatal
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["wallclock_ms"] = (time.perf_counter() - start) * 1000.0
    return row


def _run_star(args):
    return run_case(*args)


def worker_count(jobs: int) -> int:
    raw = os.environ.get(THREADS_ENV)
    cap = os.cpu_count() or 1
    if raw:
        try:
            cap = max(1, int(raw))
        except ValueError:
            raise InvalidInputError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, min(cap, jobs))


def run_suite(suite: dict) -> dict:
    """Rows come back in suite order regardless of how many workers ran them."""
    _check_suite(suite)
    cases = suite.get("instances", [])
    exact = bool(suite.get("exact", True))
    limit = int(suite.get("limit", DEFAULT_MEMBER_LIMIT))
    jobs = [(c, exact, limit) for c in cases]
    workers = worker_count(len(jobs))
    if workers == 1:
        rows = [_run_star(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return {"format_version": 1, "rows": rows, "summary": summarize(rows)}


def summarize(rows: list[dict]) -> dict:
    ratios = [r["ratio"] for r in rows if r.get("ratio") is not None]
    ok = [r for r in rows if r.get("error") is None]
    return {
        "instances": len(rows),
        "errors": len(rows) - len(ok),
        "min_ratio": min(ratios) if ratios else None,
        "median_ratio": statistics.median(ratios) if ratios else None,
        "ratio_violations": sum(1 for r in ok if r["ratio"] is not None and r["ratio"] < r["ratio_floor"]),
        "bound_violations": sum(1 for r in ok if r["iterations"] > r["bound"]),
        "max_iterations": max((r["iterations"] for r in ok), default=None),
        "total_wallclock_ms": sum(r["wallclock_ms"] for r in rows),
    }


def rows_to_csv(rows: list[dict]) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow(["" if r[c] is None else (repr(r[c]) if isinstance(r[c], float) else r[c]) for c in COLUMNS])
    return buf.getvalue()
