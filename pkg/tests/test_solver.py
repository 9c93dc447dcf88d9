import math

import numpy as np
import pytest

from nashcover import (
    CardinalityFamily,
    ExplicitFamily,
    Instance,
    InternalConsistencyError,
    InvalidInputError,
    IterationGuardError,
    Solution,
    SolverConfig,
    brute_force_opt,
    compute_weights,
    coverage_values,
    iteration_bound,
    nsw,
    phi_delta,
    solve,
)
from nashcover.generators import GenSpec, generate
from nashcover.solver import THRESHOLD_SLACK

from conftest import CUBE_ROOT_12, LN2


def test_weight_examples():
    w = compute_weights([2, 5, 1], {0}, 0).weights
    assert w[0] == pytest.approx(LN2)
    assert w[1] == pytest.approx(math.log(6 / 5))
    assert w[2] == pytest.approx(LN2)


def test_weights_reject_uncovered_member():
    with pytest.raises(InternalConsistencyError):
        compute_weights([1, 2], {0}, 0)


def test_weights_positive_and_bounded():
    rng = np.random.default_rng(3)
    for _ in range(200):
        v = rng.integers(1, 8, 10)
        F = [i for i in range(10) if v[i] >= 2 and rng.random() < 0.5]
        w = compute_weights(v, F, 0).weights
        assert (w > 0).all() and (w <= LN2 + 1e-15).all()
        assert w.sum() <= 10


def test_phi_delta_examples(small_instance, small_start):
    assert phi_delta(small_instance, small_start, 0, (2,)) == 0.0
    fam = CardinalityFamily(3)
    inst = Instance(3, 2, (fam, fam))
    got = phi_delta(inst, Solution([(2,), (0,)]), 0, (0, 1))
    assert got == pytest.approx(math.log(6) - math.log(4), abs=1e-15)


def test_iteration_bound_examples():
    assert iteration_bound(1, 1, 1 / 16) == 89
    assert iteration_bound(1, 1) == 89
    assert iteration_bound(3, 2) == 1688
    assert iteration_bound(3, 2, 0.1) < iteration_bound(3, 2, 0.01)
    with pytest.raises(InvalidInputError):
        iteration_bound(0, 1)


def test_solve_worked_example(small_instance, small_start):
    sol, trace = solve(small_instance, SolverConfig(init=small_start))
    assert sol.sets == ((0, 1), (1, 2))
    assert nsw(coverage_values(small_instance, sol)) == pytest.approx(CUBE_ROOT_12, rel=1e-14)
    assert trace.updates == 2
    assert [r.tau for r in trace.iterations] == [0, 1]
    assert trace.terminal == "converged"
    assert brute_force_opt(small_instance).solution == sol


def test_solve_single_solution_instance():
    inst = Instance(1, 1, (ExplicitFamily(((0,),)),))
    sol, trace = solve(inst)
    assert sol.sets == ((0,),)
    assert nsw(coverage_values(inst, sol)) == 2.0
    assert trace.updates == 0 and trace.iterations == []


def test_solve_already_optimal_start(small_instance):
    start = Solution([(0, 1), (1, 2)])
    sol, trace = solve(small_instance, SolverConfig(init=start))
    assert sol == start and trace.iterations == []


def test_infeasible_init_rejected(small_instance):
    with pytest.raises(InvalidInputError):
        solve(small_instance, SolverConfig(init=Solution([(0,), (0,)])))


def test_config_validation():
    with pytest.raises(InvalidInputError):
        SolverConfig(epsilon=1.5).resolve(2, 2)
    with pytest.raises(InvalidInputError):
        SolverConfig(beta=0.0).resolve(2, 2)
    with pytest.raises(InvalidInputError):
        SolverConfig(trace_level="loud").resolve(2, 2)
    cfg = SolverConfig(epsilon=0.5).resolve(2, 2)
    assert cfg["epsilon_overridden"] and not cfg["beta_overridden"]
    assert cfg["max_iterations"] == iteration_bound(2, 2, 0.5) + 1


def test_guard_raises_with_trace(small_instance, small_start):
    with pytest.raises(IterationGuardError) as info:
        solve(small_instance, SolverConfig(init=small_start, max_iterations=1))
    assert info.value.trace.terminal == "iteration_guard_hit"
    assert info.value.trace.updates == 1


def test_trace_levels(small_instance, small_start):
    _, none = solve(small_instance, SolverConfig(init=small_start, trace_level="none"))
    assert none.iterations == [] and none.updates == 2
    _, full = solve(small_instance, SolverConfig(init=small_start, trace_level="full"))
    rec = full.iterations[0]
    assert len(rec.candidates) == 2 and len(rec.weights) == 2
    snaps = full.snapshots()
    assert snaps[0] == small_start and snaps[-1].sets == ((0, 1), (1, 2))


@pytest.mark.parametrize("kind", ["explicit", "knapsack", "cardinality", "partition", "matching"])
def test_trace_invariants_on_random_instances(kind):
    for seed in range(25):
        inst = generate(GenSpec(seed=seed, n=6, T=3, kind=kind, capacity_mode="tight"))
        sol1, tr1 = solve(inst)
        sol2, tr2 = solve(inst)
        assert sol1 == sol2 and tr1 == tr2
        thr = tr1.config["threshold"]
        phis = [r.phi_after for r in tr1.iterations]
        assert all(r.delta_phi >= thr - THRESHOLD_SLACK for r in tr1.iterations)
        assert all(b > a for a, b in zip(phis, phis[1:]))
        assert tr1.updates <= iteration_bound(inst.n, inst.T)


def test_counting_bound_over_dyadic_alpha_range():
    from nashcover import brute_force_opt, suboptimal_agents
    from nashcover.solver import default_epsilon

    for seed in range(40):
        inst = generate(GenSpec(seed=seed, n=6, T=5, kind="explicit", sets_per_round=4))
        sol, _ = solve(inst)
        opt = brute_force_opt(inst).profile
        prof = coverage_values(inst, sol)
        top = 2 ** math.ceil(math.log2(inst.T + 1)) + 1
        for alpha in range(4, top + 1):
            rep = suboptimal_agents(prof, opt, alpha, default_epsilon(inst.n, inst.T))
            assert len(rep.members) <= inst.n / alpha
