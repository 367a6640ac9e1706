"""The 2-approximation for uniform fixed costs with general linear costs.

Minimize the linear cost alone over the transportation polytope, then cancel
cycles so the support is a forest: the fixed component is then at most
n + m - 1 while every solution pays at least max(n, m), and the linear
component is exactly optimal.
"""

from __future__ import annotations

from .errors import VariantError
from .model import FlowSolution, Instance, classify_variant
from .transport import cancel_cycles, solve_transportation


def solve_fct_u(inst: Instance) -> FlowSolution:
    """Forest-support flow with minimal linear cost; total cost <= 2 * opt."""
    tag = classify_variant(inst)
    if not tag.uniform:
        raise VariantError("requires FCT-U")
    sol, _ = solve_transportation(inst, inst.linear)
    # Cancellation runs unconditionally so the forest invariant never
    # depends on which inner solver produced the flow.
    return cancel_cycles(sol, inst.linear)
