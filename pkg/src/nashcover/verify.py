"""Post-hoc checks of a solution against an instance and, optionally, an optimum."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import Instance, Solution, coverage_values, log_welfare, nsw, suboptimal_agents, validate_solution
from .solver import default_epsilon


def ratio_floor(n: int, T: int) -> float:
    """Guaranteed NSW ratio ``1 / (18 + 1/(2nT))`` at the default parameters."""
    return 1.0 / (18 + 1 / (2 * n * T))


@dataclass
class VerifyReport:
    feasible: bool
    failing_rounds: list
    nsw: float
    phi: float
    nsw_opt: Optional[float] = None
    ratio: Optional[float] = None
    ratio_floor: Optional[float] = None
    suboptimal: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.feasible and not self.failures

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "feasible": self.feasible,
            "failing_rounds": list(self.failing_rounds),
            "nsw": self.nsw,
            "phi": self.phi,
            "nsw_opt": self.nsw_opt,
            "ratio": self.ratio,
            "ratio_floor": self.ratio_floor,
            "suboptimal": self.suboptimal,
            "failures": list(self.failures),
        }


def verify(
    instance: Instance,
    solution: Solution,
    optimal: Solution | None = None,
    epsilon: float | None = None,
) -> VerifyReport:
    """Feasibility and metrics; with ``optimal``, also the ratio floor and ``|S_alpha| <= n/alpha``.

    ``alpha`` ranges over ``[4, T+1]``: beyond that every suboptimal set is empty.
    """
    n, T = instance.n, instance.T
    verdict = validate_solution(instance, solution)
    prof = coverage_values(instance, solution)
    report = VerifyReport(
        feasible=verdict.feasible,
        failing_rounds=verdict.failing_rounds,
        nsw=nsw(prof),
        phi=log_welfare(prof),
    )
    if optimal is None:
        return report
    eps = default_epsilon(n, T) if epsilon is None else epsilon
    opt_prof = coverage_values(instance, optimal)
    report.nsw_opt = nsw(opt_prof)
    report.ratio = report.nsw / report.nsw_opt
    report.ratio_floor = 1.0 / (18 + 8 * eps)
    if report.ratio < report.ratio_floor:
        report.failures.append(f"ratio {report.ratio!r} below floor {report.ratio_floor!r}")
    for alpha in range(4, T + 2):
        sub = suboptimal_agents(prof, opt_prof, alpha, eps)
        ok = len(sub.members) <= sub.bound
        report.suboptimal.append({"alpha": alpha, "size": len(sub.members), "bound": sub.bound, "ok": ok})
        if not ok:
            report.failures.append(f"|S_{alpha}| = {len(sub.members)} exceeds n/alpha = {sub.bound!r}")
    return report
