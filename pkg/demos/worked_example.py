"""
Local search on a three-agent instance
======================================

Two rounds, three agents. Round 0 may pick {0,1} or {2}; round 1 may pick {0}
or {1,2}. We start from the worst pairing and watch the search climb.
"""

from nashcover import ExplicitFamily, Instance, Solution, SolverConfig, brute_force_opt, coverage_values, nsw, solve

inst = Instance(3, 2, (ExplicitFamily(((0, 1), (2,))), ExplicitFamily(((0,), (1, 2)))))
start = Solution([(2,), (0,)])
print("start coverage", coverage_values(inst, start).tolist(), "NSW", nsw(coverage_values(inst, start)))

# full traces keep every round's candidate and weight vector
sol, trace = solve(inst, SolverConfig(init=start, trace_level="full"))
for rec in trace.iterations:
    print(f"step {rec.iteration}: round {rec.tau} -> {list(rec.chosen)}, gain {rec.delta_phi:.4f}")
    for t, w in enumerate(rec.weights):
        print(f"    round {t} weights", [round(x, 4) for x in w])

print("final", [list(s) for s in sol], "NSW", nsw(coverage_values(inst, sol)))

# the instance is tiny, so the optimum is a four-point enumeration
best = brute_force_opt(inst)
print("optimum", [list(s) for s in best.solution], "NSW", best.nsw)
