"""Domain types and welfare metrics for fair coverage.

Agents are indexed ``0..n-1``. A subset of agents is always represented as a
sorted, duplicate-free tuple of ints (see :func:`canon`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InvalidInputError

Subset = tuple[int, ...]


def canon(agents: Iterable[int]) -> Subset:
    """Canonical form of an agent subset: sorted tuple without duplicates."""
    out = []
    for a in agents:
        if isinstance(a, (bool, np.bool_)) or not isinstance(a, (int, np.integer)):
            raise InvalidInputError(f"agent index must be an integer, got {a!r}")
        out.append(int(a))
    return tuple(sorted(set(out)))


@dataclass(frozen=True)
class Instance:
    """A fair coverage instance: ``n`` agents, ``T`` rounds, one family per round."""

    n: int
    T: int
    families: tuple

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        validate_instance(self)


def validate_instance(instance: Instance) -> None:
    """Raise :class:`InvalidInputError` unless the instance invariants hold."""
    n, T = instance.n, instance.T
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInputError(f"n must be a positive integer, got {n!r}")
    if not isinstance(T, (int, np.integer)) or T < 1:
        raise InvalidInputError(f"T must be a positive integer, got {T!r}")
    if len(instance.families) != T:
        raise InvalidInputError(f"expected {T} families, got {len(instance.families)}")
    for t, fam in enumerate(instance.families):
        try:
            fam.validate(n)
        except InvalidInputError as exc:
            raise InvalidInputError(f"round {t}: {exc}") from None


@dataclass(frozen=True)
class Solution:
    """One agent subset per round. Subsets are canonicalized on construction."""

    sets: tuple

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(canon(s) for s in self.sets))

    def __len__(self):
        return len(self.sets)

    def __getitem__(self, t):
        return self.sets[t]

    def __iter__(self):
        return iter(self.sets)


@dataclass(frozen=True, eq=False)
class CoverageProfile:
    """Per-agent smoothed coverage values ``v_i``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.int64)
        if v.ndim != 1 or v.size == 0:
            raise InvalidInputError("coverage profile must be a non-empty vector")
        if (v < 1).any():
            raise InvalidInputError("coverage values must be >= 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return int(self.values[i])

    def __eq__(self, other):
        if not isinstance(other, CoverageProfile):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def tolist(self) -> list[int]:
        return self.values.tolist()


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Per-agent weights for one round, in nats."""

    round: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class SuboptimalReport:
    alpha: int
    members: Subset
    bound: float


@dataclass(frozen=True)
class RatioCertificate:
    """Per-solution bookkeeping of the counting argument behind the 18-approximation.

    ``classes[d]`` lists agents whose value lies in
    ``[v*/(2^(d+1)(2.25+eps)), v*/(2^d (2.25+eps)))``; ``rest`` holds all others.
    ``lower_bound`` is the guaranteed ratio implied by the class sizes alone and
    ``ratio`` is the realized NSW ratio, so ``ratio >= lower_bound`` always.
    """

    epsilon: float
    ratio: float
    classes: dict
    rest: Subset
    class_bounds_hold: bool
    lower_bound: float
    target: float


def _as_values(profile) -> np.ndarray:
    if isinstance(profile, CoverageProfile):
        return profile.values
    return CoverageProfile(profile).values


def coverage_values(instance: Instance, solution: Solution) -> CoverageProfile:
    """Smoothed coverage ``v_i = 1 + #{t : i in F_t}``; feasibility is not required."""
    if len(solution) != instance.T:
        raise InvalidInputError(f"solution has {len(solution)} sets, instance has T={instance.T}")
    counts = np.ones(instance.n, dtype=np.int64)
    for t, s in enumerate(solution):
        if s and (s[0] < 0 or s[-1] >= instance.n):
            raise InvalidInputError(f"round {t}: agent index out of range [0, {instance.n})")
        counts[list(s)] += 1
    return CoverageProfile(counts)


def log_welfare(profile) -> float:
    """Log social welfare: sum of natural logs of the coverage values."""
    return math.fsum(np.log(_as_values(profile)).tolist())


def nsw(profile) -> float:
    """Nash social welfare, the geometric mean of the coverage values."""
    v = _as_values(profile)
    return math.exp(log_welfare(v) / v.size)


def replace(solution: Solution, t: int, X: Iterable[int]) -> Solution:
    """The solution with round ``t``'s subset swapped for ``X``."""
    if not 0 <= t < len(solution):
        raise InvalidInputError(f"round index {t} out of range [0, {len(solution)})")
    sets = list(solution.sets)
    sets[t] = canon(X)
    return Solution(sets)


def suboptimal_agents(profile, optimal, alpha: int, epsilon: float) -> SuboptimalReport:
    """Agents whose coverage is below ``v*_i / (alpha (2.25 + epsilon))``, strictly."""
    v, vstar = _as_values(profile), _as_values(optimal)
    if v.size != vstar.size:
        raise InvalidInputError("profile lengths differ")
    if alpha < 1:
        raise InvalidInputError("alpha must be >= 1")
    if not 0 < epsilon < 1:
        raise InvalidInputError("epsilon must lie in (0, 1)")
    factor = alpha * (2.25 + epsilon)
    members = tuple(int(i) for i in np.nonzero(v < vstar / factor)[0])
    return SuboptimalReport(alpha=alpha, members=members, bound=v.size / alpha)


def ratio_certificate(profile, optimal, epsilon: float) -> RatioCertificate:
    """Bucket agents by their multiplicative shortfall against ``optimal``.

    Agents with ``v_i >= v*_i / (4 (2.25 + eps))`` go to ``rest``; every other
    agent lands in the unique class ``d >= 2`` bracketing its shortfall.
    """
    v = _as_values(profile)
    vstar = _as_values(optimal)
    if v.size != vstar.size:
        raise InvalidInputError("profile lengths differ")
    n = v.size
    scaled = vstar.astype(float) / (2.25 + epsilon)
    classes: dict[int, list[int]] = {}
    rest = []
    for i in range(n):
        if v[i] >= scaled[i] / 4:
            rest.append(i)
            continue
        d = 2
        while v[i] < scaled[i] / 2 ** (d + 1):
            d += 1
        classes.setdefault(d, []).append(i)
    classes = {d: tuple(m) for d, m in sorted(classes.items())}
    log_lb = -math.log(9 + 4 * epsilon) - sum(
        (d - 1) * math.log(2) * len(m) / n for d, m in classes.items()
    )
    return RatioCertificate(
        epsilon=epsilon,
        ratio=math.exp((log_welfare(v) - log_welfare(vstar)) / n),
        classes=classes,
        rest=tuple(rest),
        class_bounds_hold=all(len(m) <= n / 2**d for d, m in classes.items()),
        lower_bound=math.exp(log_lb),
        target=1 / (18 + 8 * epsilon),
    )


@dataclass(frozen=True)
class FeasibilityVerdict:
    rounds: tuple
    feasible: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "feasible", all(self.rounds))

    @property
    def failing_rounds(self) -> list[int]:
        return [t for t, ok in enumerate(self.rounds) if not ok]


def validate_solution(instance: Instance, solution: Solution) -> FeasibilityVerdict:
    """Per-round membership check of ``solution`` against the instance families."""
    if len(solution) != instance.T:
        raise InvalidInputError(f"solution has {len(solution)} sets, instance has T={instance.T}")
    rounds = []
    for s, fam in zip(solution, instance.families):
        in_range = not s or (s[0] >= 0 and s[-1] < instance.n)
        rounds.append(bool(in_range and fam.contains(s)))
    return FeasibilityVerdict(tuple(rounds))

