"""Local search on the log social welfare with oracle-generated candidates.

Each iteration weights every agent, for every round, by the marginal change in
``log v_i`` that toggling its membership in that round would cause, asks the
round's oracle for a heavy member, and swaps in the single best candidate if it
raises the log welfare by at least ``eps * n / (8T)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    CoverageProfile,
    Instance,
    Solution,
    WeightVector,
    canon,
    coverage_values,
    validate_solution,
)
from .errors import InternalConsistencyError, InvalidInputError, IterationGuardError
from .families import approx_max_weight, some_member

# slack on the acceptance test; guards against representation error only
THRESHOLD_SLACK = 1e-12

TRACE_LEVELS = ("none", "summary", "full")


def default_epsilon(n: int, T: int) -> float:
    return 1.0 / (16 * n * T)


def default_beta(n: int, T: int) -> float:
    return 1.0 / (64 * n * T * T)


def iteration_bound(n: int, T: int, epsilon: float | None = None) -> int:
    """Most updates possible: ``n ln(T+1)`` of headroom over steps of ``eps n / (8T)``."""
    if n < 1 or T < 1:
        raise InvalidInputError("n and T must be positive")
    if epsilon is None:
        return math.ceil(128 * n * T * T * math.log(T + 1))
    return math.ceil(8 * T * math.log(T + 1) / epsilon)


@dataclass(frozen=True)
class SolverConfig:
    epsilon: Optional[float] = None
    beta: Optional[float] = None
    init: Optional[Solution] = None
    max_iterations: Optional[int] = None
    trace_level: str = "summary"

    def resolve(self, n: int, T: int) -> dict:
        eps = default_epsilon(n, T) if self.epsilon is None else float(self.epsilon)
        beta = default_beta(n, T) if self.beta is None else float(self.beta)
        if not 0 < eps < 1 or not 0 < beta < 1:
            raise InvalidInputError("epsilon and beta must lie in (0, 1)")
        if self.trace_level not in TRACE_LEVELS:
            raise InvalidInputError(f"trace_level must be one of {TRACE_LEVELS}")
        guard = self.max_iterations
        if guard is None:
            guard = iteration_bound(n, T, None if self.epsilon is None else eps) + 1
        return {
            "epsilon": eps,
            "beta": beta,
            "threshold": eps * n / (8 * T),
            "max_iterations": int(guard),
            "epsilon_overridden": self.epsilon is not None,
            "beta_overridden": self.beta is not None,
            "init": "default" if self.init is None else "given",
            "trace_level": self.trace_level,
        }


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    tau: int
    delta_phi: float
    phi_before: float
    phi_after: float
    chosen: tuple
    candidates: Optional[tuple] = None
    weights: Optional[tuple] = None


@dataclass
class SolveTrace:
    config: dict
    initial: Solution
    iterations: list = field(default_factory=list)
    terminal: str = "converged"
    updates: int = 0

    def snapshots(self) -> list[Solution]:
        """Every solution the search held, initial first."""
        sets = list(self.initial.sets)
        out = [Solution(sets)]
        for rec in self.iterations:
            sets[rec.tau] = rec.chosen
            out.append(Solution(sets))
        return out


def compute_weights(profile, F_t, t: int) -> WeightVector:
    """Per-agent weights for round ``t``: ``ln v - ln(v-1)`` inside ``F_t``, ``ln(v+1) - ln v`` outside."""
    v = profile.values if isinstance(profile, CoverageProfile) else np.asarray(profile, dtype=np.int64)
    inside = np.zeros(v.size, dtype=bool)
    inside[list(F_t)] = True
    if (v[inside] < 2).any():
        raise InternalConsistencyError(f"round {t}: a selected agent has coverage value 1")
    vf = v.astype(float)
    w = np.where(inside, np.log(vf) - np.log(np.maximum(vf - 1, 1)), np.log(vf + 1) - np.log(vf))
    return WeightVector(t, w)


def _phi(counts: np.ndarray) -> float:
    return math.fsum(np.log(counts).tolist())


def _swap_counts(counts: np.ndarray, old, new) -> np.ndarray:
    out = counts.copy()
    out[list(old)] -= 1
    out[list(new)] += 1
    return out


def phi_delta(instance: Instance, solution: Solution, t: int, X) -> float:
    """``phi(X, F_-t) - phi(F)``, both sides recomputed from integer coverage counts."""
    counts = coverage_values(instance, solution).values
    return _phi(_swap_counts(counts, solution[t], canon(X))) - _phi(counts)


def initial_solution(instance: Instance, init: Solution | None = None) -> Solution:
    if init is None:
        return Solution([some_member(f) for f in instance.families])
    verdict = validate_solution(instance, init)
    if not verdict.feasible:
        raise InvalidInputError(f"initial solution infeasible at rounds {verdict.failing_rounds}")
    return init


def solve(instance: Instance, config: SolverConfig | None = None) -> tuple[Solution, SolveTrace]:
    """Run the local search to convergence; returns the final solution and its trace."""
    config = config or SolverConfig()
    n, T = instance.n, instance.T
    params = config.resolve(n, T)
    threshold, beta = params["threshold"], params["beta"]
    full = config.trace_level == "full"

    sol = initial_solution(instance, config.init)
    trace = SolveTrace(config=params, initial=sol)
    sets = list(sol.sets)
    counts = coverage_values(instance, sol).values.copy()

    while True:
        phi_now = _phi(counts)
        candidates, deltas, weights = [], [], []
        for t, fam in enumerate(instance.families):
            w = compute_weights(counts, sets[t], t)
            cand = approx_max_weight(fam, w, beta).subset
            candidates.append(cand)
            deltas.append(_phi(_swap_counts(counts, sets[t], cand)) - phi_now)
            if full:
                weights.append(tuple(w.weights.tolist()))
        # largest gain wins, lowest round index on ties
        tau = max(range(T), key=lambda t: (deltas[t], -t))
        if deltas[tau] < threshold - THRESHOLD_SLACK:
            break
        if trace.updates >= params["max_iterations"]:
            trace.terminal = "iteration_guard_hit"
            raise IterationGuardError(
                f"no convergence after {params['max_iterations']} updates", trace=trace
            )
        counts = _swap_counts(counts, sets[tau], candidates[tau])
        sets[tau] = candidates[tau]
        phi_next = _phi(counts)
        if config.trace_level != "none":
            trace.iterations.append(
                IterationRecord(
                    iteration=trace.updates,
                    tau=tau,
                    delta_phi=deltas[tau],
                    phi_before=phi_now,
                    phi_after=phi_next,
                    chosen=candidates[tau],
                    candidates=tuple(candidates) if full else None,
                    weights=tuple(weights) if full else None,
                )
            )
        trace.updates += 1
    return Solution(sets), trace
