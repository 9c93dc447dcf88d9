"""Constructions mapping other problems onto fair coverage, plus their verifiers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence, Union

from .core import Instance, Solution, canon, coverage_values, nsw, validate_solution
from .errors import InvalidInputError, UnsatisfiableFamilyError
from .exact import brute_force_opt, brute_force_unsmoothed_opt
from .families import DEFAULT_MEMBER_LIMIT, ExplicitFamily

# upper bound on the optimum for NO instances, attained at uncovered fraction 1/e
NO_CASE_CAP = 1.83


@dataclass(frozen=True)
class MaxCoverageInput:
    universe_size: int
    sets: tuple
    k: int
    uniform_size: int

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(canon(s) for s in self.sets))
        tau, n = self.uniform_size, self.universe_size
        if n < 1 or tau < 1:
            raise InvalidInputError("universe size and set size must be positive")
        if not self.sets:
            raise InvalidInputError("set family is empty")
        for s in self.sets:
            if len(s) != tau:
                raise InvalidInputError(f"set {list(s)} does not have size {tau}")
            if s[0] < 0 or s[-1] >= n:
                raise InvalidInputError(f"set {list(s)} leaves the universe [0, {n})")
        if self.k * tau != n:
            raise InvalidInputError(f"k={self.k} must equal universe_size/uniform_size = {n}/{tau}")


@dataclass(frozen=True)
class PublicDecisionInput:
    """``issues[t][a][i]`` is agent ``i``'s 0/1 utility for alternative ``a`` of issue ``t``."""

    n: int
    issues: tuple

    def __post_init__(self):
        issues = tuple(tuple(tuple(int(u) for u in alt) for alt in issue) for issue in self.issues)
        object.__setattr__(self, "issues", issues)
        for t, issue in enumerate(issues):
            for alt in issue:
                if len(alt) != self.n:
                    raise InvalidInputError(f"issue {t}: utility vector length {len(alt)} != n={self.n}")
                if any(u not in (0, 1) for u in alt):
                    raise InvalidInputError(f"issue {t}: utilities must be binary")


@dataclass(frozen=True)
class GoodsAllocationInput:
    """``valued[i]`` is the set of goods agent ``i`` values."""

    n: int
    m: int
    valued: tuple

    def __post_init__(self):
        object.__setattr__(self, "valued", tuple(canon(v) for v in self.valued))
        if len(self.valued) != self.n:
            raise InvalidInputError(f"need one valued set per agent, got {len(self.valued)} for n={self.n}")
        for i, v in enumerate(self.valued):
            if v and (v[0] < 0 or v[-1] >= self.m):
                raise InvalidInputError(f"agent {i} values a good outside [0, {self.m})")


@dataclass(frozen=True)
class VertexCoverInput:
    """Undirected simple graph; edges are stored as sorted pairs, deduplicated, in sorted order."""

    vertices: tuple
    edges: tuple
    k: int

    def __post_init__(self):
        verts = tuple(sorted(set(int(v) for v in self.vertices)))
        vset = set(verts)
        edges = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            if u not in vset or v not in vset:
                raise InvalidInputError(f"edge ({u}, {v}) uses an unknown vertex")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(sorted(edges)))


def from_max_k_coverage(inp: MaxCoverageInput) -> Instance:
    """``n`` agents, ``T = k`` rounds, every round choosing a set from the family."""
    fam = ExplicitFamily(inp.sets)
    return Instance(inp.universe_size, inp.k, (fam,) * inp.k)


def from_public_decisions(inp: PublicDecisionInput) -> Instance:
    families = []
    for t, issue in enumerate(inp.issues):
        if not issue:
            raise UnsatisfiableFamilyError(f"issue {t} has no alternatives")
        families.append(ExplicitFamily(tuple(tuple(i for i, u in enumerate(alt) if u) for alt in issue)))
    return Instance(inp.n, len(families), families)


def from_goods_allocation(inp: GoodsAllocationInput) -> Instance:
    """One round per good; round ``g`` hands the good to a single agent who values it."""
    families = []
    for g in range(inp.m):
        fans = [(i,) for i in range(inp.n) if g in inp.valued[i]]
        if not fans:
            raise UnsatisfiableFamilyError(f"good {g} is valued by no agent")
        families.append(ExplicitFamily(tuple(fans)))
    return Instance(inp.n, inp.m, families)


def incidence_sets(inp: VertexCoverInput) -> list[tuple]:
    """Edge-agent sets ``E_v`` in vertex order."""
    return [canon(j for j, e in enumerate(inp.edges) if v in e) for v in inp.vertices]


def from_vertex_cover(inp: VertexCoverInput) -> Instance:
    """One agent per edge, ``T = k`` rounds each picking some vertex's incident edges."""
    if inp.k < 1:
        raise InvalidInputError("vertex cover threshold k must be >= 1")
    if not inp.edges:
        raise InvalidInputError("graph has no edges; the coverage instance would have no agents")
    fam = ExplicitFamily(tuple(incidence_sets(inp)))
    return Instance(len(inp.edges), inp.k, (fam,) * inp.k)


def no_case_bound(uncovered_fraction: float) -> float:
    """AM-GM cap ``((2 - x) / (1 - x))^(1 - x)`` on NSW when a fraction ``x`` stays uncovered."""
    x = uncovered_fraction
    if not 0 <= x < 1:
        raise InvalidInputError("uncovered fraction must lie in [0, 1)")
    return ((2 - x) / (1 - x)) ** (1 - x)


@dataclass(frozen=True)
class GapVerdict:
    passed: bool
    mode: str
    nsw: float
    uncovered: int
    bound: float | None = None
    reason: str = ""


def verify_gap(
    instance: Instance, which: Union[Solution, str], limit: int = DEFAULT_MEMBER_LIMIT, tol: float = 1e-9
) -> GapVerdict:
    """Check the YES/NO gap of a max-coverage reduction.

    ``which`` is either a perfect-cover certificate (a :class:`Solution`) or the
    string ``"no_bound"``, which brute-forces the optimum and checks it against
    the AM-GM cap for its uncovered count (and against 1.83 once at least
    ``n/e`` agents are uncovered).
    """
    n = instance.n
    if isinstance(which, Solution):
        verdict = validate_solution(instance, which)
        if not verdict.feasible:
            raise InvalidInputError(f"certificate infeasible at rounds {verdict.failing_rounds}")
        prof = coverage_values(instance, which)
        value = nsw(prof)
        uncovered = int((prof.values == 1).sum())
        exactly_once = bool((prof.values == 2).all())
        return GapVerdict(
            passed=exactly_once and abs(value - 2) <= tol,
            mode="yes_certificate",
            nsw=value,
            uncovered=uncovered,
            bound=2.0,
            reason="" if exactly_once else "certificate does not cover every agent exactly once",
        )
    if which != "no_bound":
        raise InvalidInputError(f"unknown gap check {which!r}")
    opt = brute_force_opt(instance, limit)
    uncovered = int((opt.profile.values == 1).sum())
    if uncovered == n:
        return GapVerdict(True, "no_bound", opt.nsw, uncovered, 1.0)
    bound = no_case_bound(uncovered / n)
    ok = opt.nsw <= bound + tol
    reason = "" if ok else "optimum exceeds the AM-GM cap"
    if uncovered >= n / math.e:
        if opt.nsw > NO_CASE_CAP + tol:
            ok, reason = False, f"optimum exceeds {NO_CASE_CAP}"
    return GapVerdict(ok, "no_bound", opt.nsw, uncovered, bound, reason)


def min_vertex_cover_size(vertices: Sequence[int], edges: Sequence[tuple]) -> int:
    """Smallest vertex cover by exhaustive search over vertex subsets of growing size."""
    for size in range(len(vertices) + 1):
        for cover in itertools.combinations(vertices, size):
            chosen = set(cover)
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    return len(vertices)


@dataclass(frozen=True)
class DichotomyVerdict:
    passed: bool
    has_cover: bool
    nsw_c: float


def verify_unsmoothed_dichotomy(inp: VertexCoverInput, limit: int = DEFAULT_MEMBER_LIMIT) -> DichotomyVerdict:
    """A cover of size <= k exists iff the unsmoothed optimum is >= 1; otherwise it is exactly 0."""
    instance = from_vertex_cover(inp)
    has_cover = min_vertex_cover_size(inp.vertices, inp.edges) <= inp.k
    value = brute_force_unsmoothed_opt(instance, limit).nsw_c
    passed = value >= 1 if has_cover else value == 0
    return DichotomyVerdict(passed, has_cover, value)
