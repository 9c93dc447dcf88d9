"""Numeric checks of the standalone inequalities the approximation and hardness bounds rest on."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .reductions import NO_CASE_CAP, no_case_bound


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_suboptimal_inequality(alpha_max: int = 64, v_max: int = 64, eps_steps: int = 999) -> CheckResult:
    """``(alpha (2.25 + eps) v - 1) / (v + 1) >= (1 + eps/2) alpha`` over an integer grid.

    With ``eps = j/1000`` both sides are scaled by 4000 and compared in exact
    integer arithmetic, so boundary equalities (``alpha = 4, v = 1``) are exact.
    """
    v = np.arange(1, v_max + 1, dtype=np.int64)[:, None]
    j = np.arange(1, eps_steps + 1, dtype=np.int64)[None, :]
    ok, count, worst = True, 0, None
    for alpha in range(4, alpha_max + 1):
        slack = alpha * (9000 + 4 * j) * v - 4000 - (4000 + 2 * j) * alpha * (v + 1)
        count += slack.size
        ok &= bool((slack >= 0).all())
        iv, ij = np.unravel_index(np.argmin(slack), slack.shape)
        if worst is None or slack[iv, ij] < worst[0]:
            worst = (int(slack[iv, ij]), alpha, iv + 1, ij + 1)
    low, a, vv, jj = worst
    return CheckResult(
        "suboptimal_inequality",
        ok,
        f"{count} grid points; tightest at alpha={a}, v={vv}, eps={jj / 1000:g} (scaled slack {low})",
    )


def class_product(ell: int) -> float:
    """``prod_{d=2}^{ell} (1/2^(d-1))^(1/2^d)``, via the exact exponent sum."""
    exponent = sum(Fraction(d - 1, 2**d) for d in range(2, ell + 1))
    return 2.0 ** -float(exponent)


def check_class_product(ell_max: int = 64, tol: float = 1e-6) -> CheckResult:
    exponents = [sum(Fraction(d - 1, 2**d) for d in range(2, ell + 1)) for ell in range(2, ell_max + 1)]
    bounded = all(e <= 1 for e in exponents)
    last = 2.0 ** -float(exponents[-1])
    converges = abs(last - 0.5) < tol
    return CheckResult(
        "class_product",
        bounded and converges,
        f"product >= 1/2 for ell in [2, {ell_max}]: {bounded}; value at ell={ell_max}: {last!r}",
    )


def check_no_case_decreasing(points: int = 10_000, hi: float = 0.999) -> CheckResult:
    x = np.linspace(1 / math.e, hi, points)
    f = ((2 - x) / (1 - x)) ** (1 - x)
    steps = np.diff(f)
    return CheckResult(
        "no_case_decreasing",
        bool((steps < 0).all()),
        f"{points} points on [1/e, {hi}]; largest step {steps.max():.3e}",
    )


def check_no_case_cap() -> CheckResult:
    value = no_case_bound(1 / math.e)
    return CheckResult("no_case_cap", value <= NO_CASE_CAP, f"f(1/e) = {value!r} vs cap {NO_CASE_CAP}")


def selfcheck() -> list[CheckResult]:
    return [
        check_suboptimal_inequality(),
        check_class_product(),
        check_no_case_decreasing(),
        check_no_case_cap(),
    ]
