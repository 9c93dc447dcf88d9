"""Constraint families and their approximate weight-maximization oracles.

Each family kind is a frozen dataclass exposing ``contains``, ``some_member``,
``approx_max_weight`` and ``members``. The module-level functions of the same
names dispatch to them and are the public entry points.

Oracle tie-breaking: exact kinds scan agents by decreasing weight and, among
equal weights, increasing index. Agents with zero weight are never added.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import ClassVar, Iterable, Sequence

import numpy as np

from .core import Subset, WeightVector, canon
from .errors import EnumerationTooLargeError, InvalidInputError, UnsatisfiableFamilyError

EXACT = "exact"
FPTAS = "fptas"

DEFAULT_MEMBER_LIMIT = 1_000_000


@dataclass(frozen=True)
class OracleResult:
    subset: Subset
    weight: float
    exactness: str


def _subset_weight(w: np.ndarray, subset: Sequence[int]) -> float:
    return math.fsum(w[i] for i in subset)


def _check_indices(agents: Iterable[int], n: int, what: str) -> None:
    for a in agents:
        if not 0 <= a < n:
            raise InvalidInputError(f"{what}: agent {a} outside [0, {n})")


def _greedy_order(w: np.ndarray, candidates: Iterable[int]) -> list[int]:
    return sorted((i for i in candidates if w[i] > 0), key=lambda i: (-w[i], i))


class ConstraintFamily:
    """Base class for the set family ``I_t`` of one round."""

    kind: ClassVar[str] = ""

    def validate(self, n: int) -> None:
        raise NotImplementedError

    def contains(self, X: Subset) -> bool:
        raise NotImplementedError

    def some_member(self) -> Subset:
        # every non-explicit kind is downward closed, so the empty set is a member
        return ()

    def approx_max_weight(self, w: np.ndarray, beta: float) -> OracleResult:
        raise NotImplementedError

    def members(self, n: int, limit: int = DEFAULT_MEMBER_LIMIT) -> list[Subset]:
        """All members over agents ``0..n-1`` in lexicographic order.

        Non-explicit kinds are downward closed, so a depth-first walk that
        prunes non-members visits exactly the members, in lexicographic order.
        """
        out: list[Subset] = []

        def walk(prefix: Subset, start: int) -> None:
            if len(out) >= limit:
                raise EnumerationTooLargeError(f"family has more than {limit} members")
            out.append(prefix)
            for a in range(start, n):
                cand = prefix + (a,)
                if self.contains(cand):
                    walk(cand, a + 1)

        walk((), 0)
        return out

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitFamily(ConstraintFamily):
    """A listed collection of subsets; duplicates collapse, first occurrence wins."""

    sets: tuple
    kind: ClassVar[str] = "explicit"

    def __post_init__(self):
        seen = {}
        for s in self.sets:
            seen.setdefault(canon(s), None)
        object.__setattr__(self, "sets", tuple(seen))
        object.__setattr__(self, "_lookup", frozenset(seen))

    def validate(self, n):
        if not self.sets:
            raise UnsatisfiableFamilyError("explicit family has no members")
        for s in self.sets:
            _check_indices(s, n, "explicit family")

    def contains(self, X):
        return canon(X) in self._lookup

    def some_member(self):
        if not self.sets:
            raise UnsatisfiableFamilyError("explicit family has no members")
        return self.sets[0]

    def approx_max_weight(self, w, beta):
        if not self.sets:
            raise UnsatisfiableFamilyError("explicit family has no members")
        best, best_w = None, -math.inf
        for s in self.sets:
            sw = _subset_weight(w, s)
            if sw > best_w or (sw == best_w and s < best):
                best, best_w = s, sw
        return OracleResult(best, best_w, EXACT)

    def members(self, n, limit=DEFAULT_MEMBER_LIMIT):
        if len(self.sets) > limit:
            raise EnumerationTooLargeError(f"family has more than {limit} members")
        return sorted(self.sets)

    def to_dict(self):
        return {"kind": self.kind, "sets": [list(s) for s in self.sets]}


@dataclass(frozen=True)
class CardinalityFamily(ConstraintFamily):
    """Uniform matroid: every subset with at most ``k`` agents."""

    k: int
    kind: ClassVar[str] = "cardinality"

    def validate(self, n):
        if not 0 <= self.k <= n:
            raise InvalidInputError(f"cardinality k={self.k} outside [0, {n}]")

    def contains(self, X):
        return len(canon(X)) <= self.k

    def approx_max_weight(self, w, beta):
        chosen = canon(_greedy_order(w, range(len(w)))[: self.k])
        return OracleResult(chosen, _subset_weight(w, chosen), EXACT)

    def to_dict(self):
        return {"kind": self.kind, "k": self.k}


@dataclass(frozen=True)
class PartitionFamily(ConstraintFamily):
    """Partition matroid: at most ``limits[j]`` agents from ``parts[j]``, nothing outside the parts."""

    parts: tuple
    limits: tuple
    kind: ClassVar[str] = "partition"

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(canon(p) for p in self.parts))
        object.__setattr__(self, "limits", tuple(int(x) for x in self.limits))
        owner = {}
        for j, p in enumerate(self.parts):
            for a in p:
                if a in owner:
                    raise InvalidInputError(f"agent {a} appears in parts {owner[a]} and {j}")
                owner[a] = j
        object.__setattr__(self, "_owner", owner)

    def validate(self, n):
        if len(self.parts) != len(self.limits):
            raise InvalidInputError("partition needs one limit per part")
        if any(x < 0 for x in self.limits):
            raise InvalidInputError("partition limits must be non-negative")
        for p in self.parts:
            _check_indices(p, n, "partition family")

    def contains(self, X):
        used = [0] * len(self.parts)
        for a in canon(X):
            j = self._owner.get(a)
            if j is None:
                return False
            used[j] += 1
            if used[j] > self.limits[j]:
                return False
        return True

    def approx_max_weight(self, w, beta):
        chosen = []
        for p, lim in zip(self.parts, self.limits):
            chosen.extend(_greedy_order(w, (a for a in p if a < len(w)))[:lim])
        chosen = canon(chosen)
        return OracleResult(chosen, _subset_weight(w, chosen), EXACT)

    def to_dict(self):
        return {"kind": self.kind, "parts": [list(p) for p in self.parts], "limits": list(self.limits)}


def _augment(agent: int, prefs, match_slot: list, seen: list) -> bool:
    for s in prefs[agent]:
        if seen[s]:
            continue
        seen[s] = True
        if match_slot[s] is None or _augment(match_slot[s], prefs, match_slot, seen):
            match_slot[s] = agent
            return True
    return False


def max_bipartite_matching(agents: Iterable[int], prefs, slots: int) -> dict[int, int]:
    """Maximum matching of ``agents`` to slots by augmenting paths; returns agent -> slot."""
    match_slot: list = [None] * slots
    for a in agents:
        _augment(a, prefs, match_slot, [False] * slots)
    return {a: s for s, a in enumerate(match_slot) if a is not None}


@dataclass(frozen=True)
class MatchingFamily(ConstraintFamily):
    """Agents that can be simultaneously assigned distinct acceptable slots."""

    slots: int
    prefs: tuple
    kind: ClassVar[str] = "matching"

    def __post_init__(self):
        object.__setattr__(self, "prefs", tuple(canon(p) for p in self.prefs))

    def validate(self, n):
        if self.slots < 1:
            raise InvalidInputError("matching needs at least one slot")
        if len(self.prefs) != n:
            raise InvalidInputError(f"matching prefs has {len(self.prefs)} rows, expected {n}")
        for p in self.prefs:
            for s in p:
                if not 0 <= s < self.slots:
                    raise InvalidInputError(f"slot {s} outside [0, {self.slots})")

    def contains(self, X):
        X = canon(X)
        if any(not 0 <= a < len(self.prefs) for a in X):
            return False
        if len(X) > self.slots:
            return False
        return len(max_bipartite_matching(X, self.prefs, self.slots)) == len(X)

    def approx_max_weight(self, w, beta):
        # matchable sets form a transversal matroid, so greedy with augmentation is exact
        match_slot: list = [None] * self.slots
        chosen = []
        for a in _greedy_order(w, range(min(len(w), len(self.prefs)))):
            if len(chosen) == self.slots:
                break
            trial = list(match_slot)
            if _augment(a, self.prefs, trial, [False] * self.slots):
                match_slot = trial
                chosen.append(a)
        chosen = canon(chosen)
        return OracleResult(chosen, _subset_weight(w, chosen), EXACT)

    def to_dict(self):
        return {"kind": self.kind, "slots": self.slots, "prefs": [list(p) for p in self.prefs]}


@dataclass(frozen=True)
class KnapsackFamily(ConstraintFamily):
    """Subsets whose total demand fits within ``capacity``."""

    demands: tuple
    capacity: int
    kind: ClassVar[str] = "knapsack"

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple(int(d) for d in self.demands))
        object.__setattr__(self, "capacity", int(self.capacity))

    def validate(self, n):
        if len(self.demands) != n:
            raise InvalidInputError(f"knapsack has {len(self.demands)} demands, expected {n}")
        if any(d < 0 for d in self.demands) or self.capacity < 0:
            raise InvalidInputError("knapsack demands and capacity must be non-negative")

    def contains(self, X):
        X = canon(X)
        if any(not 0 <= a < len(self.demands) for a in X):
            return False
        return sum(self.demands[a] for a in X) <= self.capacity

    def approx_max_weight(self, w, beta):
        chosen = knapsack_fptas(w, self.demands, self.capacity, beta)
        return OracleResult(chosen, _subset_weight(w, chosen), FPTAS)

    def to_dict(self):
        return {"kind": self.kind, "demands": list(self.demands), "capacity": self.capacity}


def knapsack_fptas(w: np.ndarray, demands: Sequence[int], capacity: int, beta: float) -> Subset:
    """Profit-scaling knapsack FPTAS returning a ``(1 - beta)``-optimal feasible subset.

    Items with zero weight or a demand above capacity are dropped. Profits are
    scaled by ``mu = beta * LB / m`` where ``LB`` is a greedy lower bound on the
    optimum (so ``OPT <= 2 LB``) and ``m`` the number of live items; the rounding
    loss is then at most ``m * mu <= beta * OPT``. The DP tracks, for every
    scaled profit, the least demand reaching it; the table has ``O(m / beta)``
    cells per item. Leftover capacity is filled greedily afterwards.
    """
    w = np.asarray(w, dtype=float)
    items = [i for i in range(len(w)) if w[i] > 0 and demands[i] <= capacity]
    if not items:
        return ()
    m = len(items)
    # greedy by density (zero-demand items first), then the best single item
    by_density = sorted(items, key=lambda i: (-(w[i] / demands[i]) if demands[i] else -math.inf, i))
    load, greedy_value = 0, 0.0
    for i in by_density:
        if load + demands[i] <= capacity:
            load += demands[i]
            greedy_value += w[i]
    lower = max(greedy_value, max(w[i] for i in items))
    mu = beta * lower / m
    profit = np.array([math.floor(w[i] / mu) for i in items], dtype=np.int64)
    top = int(min(profit.sum(), math.ceil(2 * lower / mu) + m))

    big = np.iinfo(np.int64).max // 4
    dp = np.full(top + 1, big, dtype=np.int64)
    dp[0] = 0
    took = np.zeros((m, top + 1), dtype=bool)
    for k, i in enumerate(items):
        p, d = int(profit[k]), demands[i]
        if p == 0 or p > top:
            continue
        cand = dp[: top + 1 - p] + d
        better = cand < dp[p:]
        took[k, p:] = better
        dp[p:] = np.where(better, cand, dp[p:])
    reachable = np.nonzero(dp <= capacity)[0]
    best = int(reachable[-1])

    chosen = []
    q = best
    for k in range(m - 1, -1, -1):
        if q > 0 and took[k, q]:
            chosen.append(items[k])
            q -= int(profit[k])
    load = sum(demands[i] for i in chosen)
    picked = set(chosen)
    for i in _greedy_order(w, items):
        if i not in picked and load + demands[i] <= capacity:
            picked.add(i)
            load += demands[i]
    return canon(picked)


KINDS = {
    cls.kind: cls
    for cls in (ExplicitFamily, KnapsackFamily, CardinalityFamily, PartitionFamily, MatchingFamily)
}


def family_from_dict(data: dict) -> ConstraintFamily:
    """Build a family from its JSON payload (``{"kind": ..., ...}``)."""
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidInputError("family payload must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "explicit":
            return ExplicitFamily(tuple(tuple(s) for s in data["sets"]))
        if kind == "knapsack":
            return KnapsackFamily(tuple(data["demands"]), data["capacity"])
        if kind == "cardinality":
            return CardinalityFamily(int(data["k"]))
        if kind == "partition":
            return PartitionFamily(tuple(tuple(p) for p in data["parts"]), tuple(data["limits"]))
        if kind == "matching":
            return MatchingFamily(int(data["slots"]), tuple(tuple(p) for p in data["prefs"]))
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"bad {kind} family payload: {exc}") from None
    raise InvalidInputError(f"unknown family kind {kind!r}")


def _weights(w) -> np.ndarray:
    arr = w.weights if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError("weights must be a vector")
    if (arr < 0).any() or not np.isfinite(arr).all():
        raise InvalidInputError("weights must be finite and non-negative")
    return arr


def contains(family: ConstraintFamily, X: Iterable[int]) -> bool:
    return family.contains(canon(X))


def some_member(family: ConstraintFamily) -> Subset:
    """Deterministic starting member: first listed set, or the empty set."""
    return family.some_member()


def approx_max_weight(family: ConstraintFamily, w, beta: float) -> OracleResult:
    """A member whose weight is at least ``(1 - beta)`` times the family maximum."""
    if not 0 < beta < 1:
        raise InvalidInputError(f"beta must lie in (0, 1), got {beta}")
    return family.approx_max_weight(_weights(w), beta)


def enumerate_members(family: ConstraintFamily, n: int, limit: int = DEFAULT_MEMBER_LIMIT) -> list[Subset]:
    return list(_cached_members(family, n, limit))


@lru_cache(maxsize=4096)
def _cached_members(family, n, limit):
    return tuple(family.members(n, limit))


@lru_cache(maxsize=4096)
def incidence(family: ConstraintFamily, n: int, limit: int = DEFAULT_MEMBER_LIMIT) -> np.ndarray:
    """0/1 member-by-agent matrix, rows in :func:`enumerate_members` order."""
    members = _cached_members(family, n, limit)
    out = np.zeros((len(members), n), dtype=np.int8)
    for r, s in enumerate(members):
        out[r, list(s)] = 1
    out.setflags(write=False)
    return out
