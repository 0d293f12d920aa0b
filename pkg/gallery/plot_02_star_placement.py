"""
Sensor placement on a five-node star
=====================================

Cost groups are searched cheapest first; inside a group, subsets grow
until one of them is observable.
"""

from structobs import brute_force_minimum, check_observability, compute_costs, place_sensors
from structobs.colorability import output_pattern
from structobs.fixtures import STAR_A, STAR_TABLE, table_costs

print(STAR_A.to_text())

###############################################################################
# With the published cost column the search stops in the second group.

res = place_sensors(STAR_A, table_costs(STAR_TABLE))
print(res.to_dict())

###############################################################################
# Costs computed from the pattern alone give the same groups and answer.

costs = compute_costs(STAR_A, c_ind=STAR_TABLE["c_ind"])
print(costs.to_csv())
print(place_sensors(STAR_A, costs).to_dict()["accepted"])

###############################################################################
# Exhaustive search confirms that three sensors is the minimum. The hub
# (state 5) is never needed.

min_k, sets = brute_force_minimum(STAR_A)
print(min_k, [[s + 1 for s in st] for st in sets])
print(check_observability(STAR_A, output_pattern(5, [4])).observable)
