"""Seeded random instance generators.

Randomness comes from numpy's PCG64 bit generator (PCG XSL-RR 128/64, seeded
through ``numpy.random.SeedSequence(seed)``). Only raw 64-bit outputs are
consumed, mapped to bounded integers by rejection sampling and to floats as
``(x >> 11) * 2**-53``, so instances depend on the bit generator alone and not
on numpy's distribution code.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .core import Instance
from .errors import EnumerationTooLargeError, GenerationError
from .families import (
    CardinalityFamily,
    ExplicitFamily,
    KnapsackFamily,
    MatchingFamily,
    PartitionFamily,
    enumerate_members,
)

KINDS = ("explicit", "knapsack", "cardinality", "partition", "matching")
RNG_NAME = "pcg64"

_U64 = 1 << 64


class Rng:
    """Portable draws on top of a PCG64 bit generator."""

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed)

    def raw(self) -> int:
        return int(self._bits.random_raw())

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``, inclusive."""
        if hi < lo:
            raise GenerationError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        cutoff = _U64 - (_U64 % span)
        while True:
            x = self.raw()
            if x < cutoff:
                return lo + x % span

    def uniform(self) -> float:
        return (self.raw() >> 11) * 2.0**-53

    def sample(self, population: int, k: int) -> list[int]:
        """``k`` distinct values from ``range(population)`` by partial Fisher-Yates."""
        pool = list(range(population))
        for i in range(k):
            j = self.integer(i, population - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


@dataclass(frozen=True)
class GenSpec:
    """Generator parameters. Ranges are inclusive ``(lo, hi)`` pairs; ``None`` means a kind default."""

    seed: int
    n: int
    T: int
    kind: str = "explicit"
    # explicit
    sets_per_round: int = 3
    size_range: Optional[tuple] = None
    # knapsack
    demand_range: tuple = (1, 10)
    capacity_mode: str = "load_shedding"
    # cardinality
    k_range: Optional[tuple] = None
    # partition
    part_count: int = 2
    limit_range: tuple = (1, 2)
    part_coverage: float = 1.0
    # matching
    slots: int = 2
    pref_density: float = 0.5
    # redraw a round's family until it has at most this many members
    max_members: Optional[int] = None
    max_attempts: int = 1000

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise GenerationError(f"unknown kind {self.kind!r}")
        if self.n < 1 or self.T < 1:
            raise GenerationError("n and T must be positive")
        lo, hi = self.size_range or (1, self.n)
        if not 0 <= lo <= hi <= self.n:
            raise GenerationError(f"set size range {(lo, hi)} impossible for n={self.n}")
        if self.sets_per_round < 1:
            raise GenerationError("need at least one set per round")
        dlo, dhi = self.demand_range
        if not 0 <= dlo <= dhi:
            raise GenerationError(f"bad demand range {self.demand_range}")
        if self.capacity_mode not in ("load_shedding", "tight"):
            raise GenerationError(f"unknown capacity mode {self.capacity_mode!r}")
        klo, khi = self.k_range or (1, self.n)
        if not 0 <= klo <= khi <= self.n:
            raise GenerationError(f"k range {(klo, khi)} impossible for n={self.n}")
        if self.part_count < 1:
            raise GenerationError("need at least one part")
        llo, lhi = self.limit_range
        if not 0 <= llo <= lhi:
            raise GenerationError(f"bad limit range {self.limit_range}")
        if not 0 <= self.part_coverage <= 1 or not 0 <= self.pref_density <= 1:
            raise GenerationError("probabilities must lie in [0, 1]")
        if self.slots < 1:
            raise GenerationError("need at least one slot")
        if self.max_members is not None and self.max_members < 1:
            raise GenerationError("max_members must be positive")


def _explicit(spec: GenSpec, rng: Rng):
    lo, hi = spec.size_range or (1, spec.n)
    sets = []
    for _ in range(spec.sets_per_round):
        size = rng.integer(lo, hi)
        sets.append(tuple(rng.sample(spec.n, size)))
    return ExplicitFamily(tuple(sets))


def _knapsack(spec: GenSpec, rng: Rng):
    dlo, dhi = spec.demand_range
    demands = [rng.integer(dlo, dhi) for _ in range(spec.n)]
    # load shedding: every agent fits alone, but not necessarily all together
    if spec.capacity_mode == "load_shedding":
        capacity = rng.integer(max(demands), sum(demands))
    else:
        capacity = rng.integer(min(demands), max(demands))
    return KnapsackFamily(tuple(demands), capacity)


def _cardinality(spec: GenSpec, rng: Rng):
    lo, hi = spec.k_range or (1, spec.n)
    return CardinalityFamily(rng.integer(lo, hi))


def _partition(spec: GenSpec, rng: Rng):
    parts = [[] for _ in range(spec.part_count)]
    for a in range(spec.n):
        if rng.uniform() < spec.part_coverage:
            parts[rng.integer(0, spec.part_count - 1)].append(a)
    limits = [rng.integer(*spec.limit_range) for _ in parts]
    return PartitionFamily(tuple(tuple(p) for p in parts), tuple(limits))


def _matching(spec: GenSpec, rng: Rng):
    prefs = []
    for _ in range(spec.n):
        prefs.append(tuple(s for s in range(spec.slots) if rng.uniform() < spec.pref_density))
    return MatchingFamily(spec.slots, tuple(prefs))


_DRAW = {
    "explicit": _explicit,
    "knapsack": _knapsack,
    "cardinality": _cardinality,
    "partition": _partition,
    "matching": _matching,
}


def generate(spec: GenSpec) -> Instance:
    """Draw an instance; identical specs give identical instances."""
    spec.validate()
    rng = Rng(spec.seed)
    draw = _DRAW[spec.kind]
    families = []
    for t in range(spec.T):
        for _ in range(spec.max_attempts):
            fam = draw(spec, rng)
            if spec.max_members is None or _small_enough(fam, spec.n, spec.max_members):
                break
        else:
            raise GenerationError(
                f"round {t}: no {spec.kind} family with <= {spec.max_members} members "
                f"after {spec.max_attempts} draws"
            )
        families.append(fam)
    return Instance(spec.n, spec.T, families)


def _small_enough(fam, n: int, cap: int) -> bool:
    try:
        enumerate_members(fam, n, cap)
    except EnumerationTooLargeError:
        return False
    return True


def spec_from_dict(data: dict) -> GenSpec:
    known = set(GenSpec.__dataclass_fields__)
    unknown = set(data) - known - {"format_version"}
    if unknown:
        raise GenerationError(f"unknown generator fields: {sorted(unknown)}")
    kwargs = {k: (tuple(v) if isinstance(v, list) else v) for k, v in data.items() if k in known}
    try:
        return GenSpec(**kwargs)
    except TypeError as exc:
        raise GenerationError(str(exc)) from None


def spec_to_dict(spec: GenSpec) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(spec).items()}
