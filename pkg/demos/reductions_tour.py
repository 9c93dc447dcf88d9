"""
Other problems as coverage
==========================

Allocating goods, voting on public issues and covering graph edges all fit the
one-subset-per-round mould.
"""

from nashcover import brute_force_unsmoothed_opt, coverage_values, nsw, solve
from nashcover.reductions import (
    GoodsAllocationInput,
    PublicDecisionInput,
    VertexCoverInput,
    from_goods_allocation,
    from_public_decisions,
    from_vertex_cover,
    min_vertex_cover_size,
)

# goods: one round per good, each round hands the good to somebody who wants it
goods = GoodsAllocationInput(n=3, m=5, valued=((0, 1, 2), (2, 3), (0, 3, 4)))
inst = from_goods_allocation(goods)
sol, _ = solve(inst)
for g, owner in enumerate(sol):
    print(f"good {g} -> agent {owner[0]}")
print("bundle sizes", (coverage_values(inst, sol).values - 1).tolist())

# public decisions: each issue picks one alternative; its supporters are covered
votes = PublicDecisionInput(n=4, issues=(
    ((1, 1, 0, 0), (0, 0, 1, 1)),
    ((1, 0, 0, 0), (0, 1, 1, 1)),
    ((1, 1, 1, 0), (0, 0, 0, 1)),
))
inst = from_public_decisions(votes)
sol, _ = solve(inst)
print("decisions", [inst.families[t].sets.index(s) for t, s in enumerate(sol)], "NSW", nsw(coverage_values(inst, sol)))

# without the +1 smoothing the objective is all-or-nothing: a triangle needs two vertices
tri = ((0, 1, 2), ((0, 1), (1, 2), (0, 2)))
print("triangle min cover", min_vertex_cover_size(*tri))
for k in (1, 2):
    res = brute_force_unsmoothed_opt(from_vertex_cover(VertexCoverInput(*tri, k)))
    print(f"k={k}: unsmoothed optimum {res.nsw_c}")
