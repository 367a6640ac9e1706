"""Exact transportation solves, cycle cancellation, and demand relaxation.

First the linear core: minimize a weighted flow exactly, rotate cycles away
so the support is a forest (this is the whole FCT-U 2-approximation), then
the bicriteria pipeline that trades exact demands for a constant-factor
cost bound: every sink receives within (1 +/- eps) of its demand while each
source ships exactly its supply.
"""

from fractions import Fraction

from fctp import evaluate_cost, make_flow, make_instance, solve_fct_u
from fctp.bicriteria import solve_bicriteria
from fctp.oracle import exact_fct
from fctp.transport import cancel_cycles, solve_transportation

inst = make_instance((2, 2), (3, 1), [[1, 1], [1, 1]], [[0, 1], [1, 0]])

flow, value = solve_transportation(inst, inst.linear)
print("min linear cost:", value, "on support", sorted(flow.entries))

square = make_flow({(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): 1})
rotated = cancel_cycles(square, [[0, 1], [1, 0]])
print("cycle cancellation keeps marginals, drops cost:", sorted(rotated.entries))

sol = solve_fct_u(inst)
opt, _ = exact_fct(inst)
print(f"FCT-U solution cost {evaluate_cost(inst, sol)}, optimum {opt}")
assert evaluate_cost(inst, sol) <= 2 * opt

wide = make_instance(
    (20, 20), (21, 19), [[2, 8], [1, 3]], [[0, 1], [0, 0]]
)
for eps in (Fraction(1, 4), Fraction(1, 8)):
    relaxed, report = solve_bicriteria(wide, eps)
    cols = relaxed.col_sums(wide.m)
    print(
        f"eps={eps}: columns {[str(c) for c in cols]} vs demands {wide.demands}, "
        f"cost {report.actual_cost} <= bound {report.cost_bound}"
    )
    for j, received in enumerate(cols):
        b = wide.demands[j]
        assert (1 - eps) * b <= received <= (1 + eps) * b
    assert relaxed.row_sums(wide.n) == [Fraction(a) for a in wide.supplies]
