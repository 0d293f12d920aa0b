"""
Cost-aware placement on the triangle network
=============================================

Degree counts, inverse PageRank and an installation cost are averaged
into one cost per state; sensors go where the search first succeeds.
"""

from structobs import compute_costs, group_by_cost, place_sensors
from structobs.fixtures import TRIANGLE_TABLE, triangle_network
from structobs.wdn import derive_wdn_pattern

A = derive_wdn_pattern(triangle_network())
costs = compute_costs(A, c_ind=TRIANGLE_TABLE["c_ind"])
for name in ("c_out", "c_in", "c_pr", "c_ind"):
    print(name, costs.normalized(name).round(3))

###############################################################################
# The groups, cheapest first (1-based). The tank head is free to measure
# but cannot make the network observable on its own.

print([[s + 1 for s in g] for g in group_by_cost(costs.c_n)])

res = place_sensors(A, costs)
print(res.to_dict())
