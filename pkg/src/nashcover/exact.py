"""Brute-force verification oracles.

Everything here enumerates; nothing scales. The product space
``I_1 x ... x I_T`` is walked in odometer order (last round fastest) over
lexicographically sorted member lists, so the first optimum found is the
lexicographically smallest tuple of canonical subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CoverageProfile, Instance, Solution, nsw
from .errors import EnumerationTooLargeError
from .families import (
    DEFAULT_MEMBER_LIMIT,
    EXACT,
    ConstraintFamily,
    OracleResult,
    _subset_weight,
    _weights,
    enumerate_members,
    incidence,
)

_CHUNK = 1 << 16
# products of coverage values stay exact in int64 below this many bits
_INT_BITS = 62


@dataclass(frozen=True)
class ExactResult:
    solution: Solution
    nsw: float
    profile: CoverageProfile
    explored: int


@dataclass(frozen=True)
class UnsmoothedResult:
    solution: Solution
    nsw_c: float
    profile: CoverageProfile
    explored: int


def _member_space(instance: Instance, limit: int):
    members = [enumerate_members(f, instance.n, limit) for f in instance.families]
    size = math.prod(len(m) for m in members)
    if size > limit:
        raise EnumerationTooLargeError(f"search space has {size} points, limit is {limit}")
    mats = [incidence(f, instance.n, limit) for f in instance.families]
    return members, mats, size


def _argmax_product(instance: Instance, limit: int, shift: int):
    """Index of the first product-space point maximizing prod(v_i - shift).

    Returns ``(members, best_index, best_coverage_row, size)``.
    """
    members, mats, size = _member_space(instance, limit)
    shape = tuple(len(m) for m in members)
    n, T = instance.n, instance.T
    exact_ints = n * math.log2(T + 1) <= _INT_BITS
    log_table = None
    if not exact_ints:
        # log 0 = -inf marks an uncovered agent in the unsmoothed objective
        with np.errstate(divide="ignore"):
            log_table = np.log(np.arange(T + 2, dtype=float))

    best_key, best_idx, best_row = None, 0, None
    for start in range(0, size, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, size))
        idx = np.unravel_index(flat, shape)
        cov = np.ones((flat.size, n), dtype=np.int64)
        for t in range(T):
            cov += mats[t][idx[t]]
        vals = cov - shift
        if exact_ints:
            key = np.prod(vals, axis=1)
        else:
            # beyond int64 range ties are only resolved to float precision
            key = log_table[vals].sum(axis=1)
        j = int(np.argmax(key))
        if best_key is None or key[j] > best_key:
            best_key, best_idx, best_row = key[j], start + j, cov[j].copy()
    return members, np.unravel_index(best_idx, shape), best_row, size


def brute_force_opt(instance: Instance, limit: int = DEFAULT_MEMBER_LIMIT) -> ExactResult:
    """A Nash-optimal solution by exhaustive search, lexicographic tie-break."""
    members, idx, row, size = _argmax_product(instance, limit, shift=0)
    sol = Solution([members[t][int(i)] for t, i in enumerate(idx)])
    profile = CoverageProfile(row)
    return ExactResult(solution=sol, nsw=nsw(profile), profile=profile, explored=size)


def brute_force_unsmoothed_opt(instance: Instance, limit: int = DEFAULT_MEMBER_LIMIT) -> UnsmoothedResult:
    """Maximize the unsmoothed welfare ``(prod c_i)^(1/n)`` with ``c_i = v_i - 1``.

    Reports 0 when every solution leaves some agent uncovered; the returned
    solution is then the lexicographically first point.
    """
    members, idx, row, size = _argmax_product(instance, limit, shift=1)
    sol = Solution([members[t][int(i)] for t, i in enumerate(idx)])
    profile = CoverageProfile(row)
    return UnsmoothedResult(solution=sol, nsw_c=nsw_unsmoothed(profile), profile=profile, explored=size)


def brute_force_max_weight(
    family: ConstraintFamily, w, n: int | None = None, limit: int = DEFAULT_MEMBER_LIMIT, tol: float = 1e-12
) -> OracleResult:
    """Exact weight maximizer over all members.

    Members within ``tol`` (relative) of the best weight count as tied; the
    lexicographically smallest of them is returned.
    """
    w = _weights(w)
    n = len(w) if n is None else n
    members = enumerate_members(family, n, limit)
    scores = incidence(family, n, limit).astype(float) @ w
    best = scores.max()
    j = int(np.nonzero(scores >= best - tol * max(1.0, abs(best)))[0][0])
    subset = members[j]
    return OracleResult(subset, _subset_weight(w, subset), EXACT)


def nsw_unsmoothed(profile) -> float:
    """Unsmoothed welfare of a smoothed profile: geometric mean of ``v_i - 1``."""
    v = profile.values if isinstance(profile, CoverageProfile) else np.asarray(profile)
    c = v - 1
    if (c <= 0).any():
        return 0.0
    return math.exp(math.fsum(np.log(c).tolist()) / c.size)


__all__ = [
    "ExactResult",
    "UnsmoothedResult",
    "brute_force_opt",
    "brute_force_unsmoothed_opt",
    "brute_force_max_weight",
    "nsw_unsmoothed",
]
