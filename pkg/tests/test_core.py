import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nashcover import (
    CardinalityFamily,
    CoverageProfile,
    ExplicitFamily,
    Instance,
    InvalidInputError,
    KnapsackFamily,
    Solution,
    UnsatisfiableFamilyError,
    coverage_values,
    log_welfare,
    nsw,
    ratio_certificate,
    replace,
    suboptimal_agents,
    validate_solution,
)
from nashcover.core import canon

from conftest import CUBE_ROOT_12


def test_canon_sorts_and_dedups():
    assert canon([3, 1, 3, 0]) == (0, 1, 3)
    assert canon(np.array([2, 1])) == (1, 2)


@pytest.mark.parametrize("bad", [[True], [1.5], ["0"]])
def test_canon_rejects_non_integers(bad):
    with pytest.raises(InvalidInputError):
        canon(bad)


def test_instance_invariants():
    fam = ExplicitFamily(((0,),))
    with pytest.raises(InvalidInputError):
        Instance(0, 1, (fam,))
    with pytest.raises(InvalidInputError):
        Instance(1, 2, (fam,))
    with pytest.raises(InvalidInputError, match="round 0"):
        Instance(1, 1, (ExplicitFamily(((0, 5),)),))
    with pytest.raises(UnsatisfiableFamilyError):
        Instance(1, 1, (ExplicitFamily(()),))


def test_coverage_values_examples():
    fam = CardinalityFamily(3)
    inst = Instance(3, 2, (fam, fam))
    assert coverage_values(inst, Solution([(), ()])).tolist() == [1, 1, 1]
    fam2 = CardinalityFamily(2)
    inst2 = Instance(2, 2, (fam2, fam2))
    assert coverage_values(inst2, Solution([(0, 1), (0,)])).tolist() == [3, 2]
    assert coverage_values(inst, Solution([(1,), (1,)]))[1] == 3


def test_coverage_values_shape_errors():
    fam = CardinalityFamily(2)
    inst = Instance(2, 2, (fam, fam))
    with pytest.raises(InvalidInputError):
        coverage_values(inst, Solution([(0,)]))
    with pytest.raises(InvalidInputError):
        coverage_values(inst, Solution([(0,), (2,)]))


def test_nsw_and_log_welfare_examples():
    assert nsw([2, 2, 2]) == pytest.approx(2.0, rel=1e-15)
    assert nsw([1, 4]) == pytest.approx(2.0, rel=1e-15)
    assert nsw([2, 3, 2]) == pytest.approx(CUBE_ROOT_12, rel=1e-14)
    assert log_welfare([1, 1, 1]) == 0.0
    assert log_welfare([3, 2, 1]) == pytest.approx(math.log(6), abs=1e-15)


def test_profile_rejects_zero():
    with pytest.raises(InvalidInputError):
        CoverageProfile([0, 1])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 50), min_size=1, max_size=40))
def test_nsw_matches_log_welfare(values):
    phi = log_welfare(values)
    assert math.exp(phi / len(values)) == pytest.approx(nsw(values), rel=1e-12)
    perm = list(reversed(values))
    assert nsw(perm) == pytest.approx(nsw(values), rel=1e-12)


def test_replace_semantics():
    sol = Solution([(), ()])
    out = replace(sol, 0, {1})
    assert out.sets == ((1,), ())
    assert sol.sets == ((), ())
    assert replace(out, 0, out[0]) == out
    assert replace(replace(out, 1, (0,)), 1, ()) == out
    with pytest.raises(InvalidInputError):
        replace(sol, 2, ())


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_coverage_sum_and_replace_delta(data):
    n = data.draw(st.integers(1, 8))
    T = data.draw(st.integers(1, 5))
    fam = CardinalityFamily(n)
    inst = Instance(n, T, (fam,) * T)
    subset = st.sets(st.integers(0, n - 1))
    sol = Solution([tuple(data.draw(subset)) for _ in range(T)])
    prof = coverage_values(inst, sol).values
    assert prof.min() >= 1 and prof.max() <= T + 1
    assert int((prof - 1).sum()) == sum(len(s) for s in sol)
    t = data.draw(st.integers(0, T - 1))
    X = data.draw(subset)
    after = coverage_values(inst, replace(sol, t, X)).values
    diff = after - prof
    sym = set(X) ^ set(sol[t])
    for i in range(n):
        if i in sym:
            assert abs(diff[i]) == 1
        else:
            assert diff[i] == 0


def test_suboptimal_examples():
    rep = suboptimal_agents([1], [10], 4, 0.001)
    assert rep.members == (0,)
    assert rep.bound == 0.25
    assert suboptimal_agents([2], [18], 4, 1 / 96).members == ()
    prof = [1, 2, 3]
    for alpha in range(1, 10):
        assert suboptimal_agents(prof, prof, alpha, 0.5).members == ()


def test_suboptimal_input_checks():
    with pytest.raises(InvalidInputError):
        suboptimal_agents([1, 2], [3], 4, 0.1)
    with pytest.raises(InvalidInputError):
        suboptimal_agents([1], [3], 0, 0.1)
    with pytest.raises(InvalidInputError):
        suboptimal_agents([1], [3], 4, 1.0)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_suboptimal_monotone_in_alpha(data):
    n = data.draw(st.integers(1, 10))
    prof = data.draw(st.lists(st.integers(1, 40), min_size=n, max_size=n))
    opt = data.draw(st.lists(st.integers(1, 40), min_size=n, max_size=n))
    eps = data.draw(st.floats(0.001, 0.999))
    prev = set(range(n))
    for alpha in range(1, 12):
        cur = set(suboptimal_agents(prof, opt, alpha, eps).members)
        assert cur <= prev
        prev = cur


def test_ratio_certificate_equal_profiles():
    cert = ratio_certificate([2, 2, 3], [2, 2, 3], 0.01)
    assert cert.ratio == pytest.approx(1.0)
    assert cert.class_bounds_hold
    assert cert.lower_bound <= cert.ratio
    assert cert.target == pytest.approx(1 / (18 + 0.08))


def test_validate_solution_examples():
    fam = ExplicitFamily(((0,), (1,)))
    inst = Instance(2, 1, (fam,))
    assert validate_solution(inst, Solution([(0,)])).feasible
    verdict = validate_solution(inst, Solution([(0, 1)]))
    assert not verdict.feasible
    assert verdict.failing_rounds == [0]
    knap = Instance(3, 1, (KnapsackFamily((3, 4, 5), 7),))
    assert validate_solution(knap, Solution([(0, 1)])).feasible
    with pytest.raises(InvalidInputError):
        validate_solution(inst, Solution([(0,), (1,)]))
