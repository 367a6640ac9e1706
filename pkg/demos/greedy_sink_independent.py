"""Walk through the sink-independent greedy solver on a worked instance.

Two sources (supplies 5 and 3, per-source fixed costs 10 and 4), three
sinks (demands 4, 2, 2), no linear costs.  The greedy sweep pairs the
priciest remaining source with the largest remaining sink, so its support
never contains a crossing pair, and its cost lands between an exact lower
bound on the optimum and that bound plus the non-maximal fixed costs.
"""

from fctp import (
    evaluate_cost,
    greedy_solve,
    greedy_upper_bound,
    lp_cost,
    no_crossing_check,
    opt_lower_bound,
    pure_instance,
)
from fctp.oracle import exact_fct
from fctp.pfct_s import pi

inst = pure_instance((5, 3), (4, 2, 2), [[10] * 3, [4] * 3])

solution = greedy_solve(inst)
print("greedy support (1-based):")
for (i, j), x in sorted(solution.entries.items()):
    print(f"  source {i + 1} -> sink {j + 1}: {x}")

cost = evaluate_cost(inst, solution)
relaxed = lp_cost(inst, solution)
print(f"actual cost {cost}, relaxation cost {relaxed} (always <= actual)")

print("prefix demand counts pi(t):", [pi(inst, t) for t in (4, 5, 8)])
lower = opt_lower_bound(inst)
upper = greedy_upper_bound(inst)
opt, _ = exact_fct(inst)
print(f"sandwich: {lower} <= opt {opt} <= greedy {cost} <= {upper}")
assert lower <= opt <= cost <= upper
assert cost <= 2 * opt
assert no_crossing_check(inst, solution)
print("ratio bound holds: greedy <= 2 * opt, support crossing-free")
