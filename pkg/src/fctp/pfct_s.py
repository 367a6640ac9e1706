"""The 2-approximation for pure, sink-independent fixed charge transportation.

Sources are processed in nonincreasing fixed-cost order and sinks in
nonincreasing demand order; a two-pointer sweep assigns min(supply, demand)
at each step.  The resulting solution minimizes the linear relaxation
sum(x_ij / b_j * f_i) (its support has no crossing pair), and its actual
cost is sandwiched between an exact lower bound on the optimum and that
bound plus sum of all but the largest fixed cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FctpError, VariantError
from .model import FlowSolution, Instance, classify_variant, evaluate_cost


@dataclass(frozen=True)
class SortedView:
    """Renaming of sources by nonincreasing f and sinks by nonincreasing b.

    ``source_order[p]`` is the original index of the source at sorted
    position p (ties keep original index order), and ``source_rank`` is the
    inverse map; same for sinks.  ``fixed_sorted``/``demand_sorted`` are the
    reordered vectors and ``supply_prefix[p]`` is the supply of the first
    p + 1 sorted sources.
    """

    source_order: tuple[int, ...]
    sink_order: tuple[int, ...]
    source_rank: tuple[int, ...]
    sink_rank: tuple[int, ...]
    fixed_sorted: tuple[Fraction, ...]
    demand_sorted: tuple[int, ...]
    supply_prefix: tuple[int, ...]


def _source_costs(inst: Instance) -> list[Fraction]:
    # Sink-independent instances carry f_i in every cell of row i.
    return [row[0] for row in inst.fixed]


def sorted_view(inst: Instance) -> SortedView:
    f = _source_costs(inst)
    source_order = tuple(
        sorted(range(inst.n), key=lambda i: (-f[i], i))
    )
    sink_order = tuple(
        sorted(range(inst.m), key=lambda j: (-inst.demands[j], j))
    )
    source_rank = [0] * inst.n
    for pos, i in enumerate(source_order):
        source_rank[i] = pos
    sink_rank = [0] * inst.m
    for pos, j in enumerate(sink_order):
        sink_rank[j] = pos
    prefix = []
    running = 0
    for i in source_order:
        running += inst.supplies[i]
        prefix.append(running)
    return SortedView(
        source_order=source_order,
        sink_order=sink_order,
        source_rank=tuple(source_rank),
        sink_rank=tuple(sink_rank),
        fixed_sorted=tuple(f[i] for i in source_order),
        demand_sorted=tuple(inst.demands[j] for j in sink_order),
        supply_prefix=tuple(prefix),
    )


def _require_pfct_s(inst: Instance) -> None:
    tag = classify_variant(inst)
    if not (tag.pure and tag.sink_independent):
        raise VariantError("requires PFCT-S")


def greedy_solve(inst: Instance) -> FlowSolution:
    """Two-pointer sweep over the sorted view; crossing-free forest flow."""
    _require_pfct_s(inst)
    view = sorted_view(inst)
    entries: dict[tuple[int, int], Fraction] = {}
    pos_i, pos_j = 0, 0
    rem_a = [inst.supplies[i] for i in view.source_order]
    rem_b = list(view.demand_sorted)
    while pos_i < inst.n and pos_j < inst.m:
        amount = min(rem_a[pos_i], rem_b[pos_j])
        edge = (view.source_order[pos_i], view.sink_order[pos_j])
        entries[edge] = Fraction(amount)
        rem_a[pos_i] -= amount
        rem_b[pos_j] -= amount
        if rem_a[pos_i] == 0:
            pos_i += 1
        if rem_b[pos_j] == 0:
            pos_j += 1
    return FlowSolution(entries=entries)


def lp_cost(inst: Instance, sol: FlowSolution) -> Fraction:
    """Relaxed cost sum(x_ij / b_j * f_i); never exceeds the actual cost."""
    f = _source_costs(inst)
    total = Fraction(0)
    for (i, j), x in sol.entries.items():
        total += x * f[i] / inst.demands[j]
    return total


def pi(inst: Instance, t) -> int:
    """Smallest j such that the j largest demands total at least t."""
    t = Fraction(t)
    view = sorted_view(inst)
    if t <= 0 or t > sum(inst.demands):
        raise FctpError("t out of range")
    running = 0
    for count, b in enumerate(view.demand_sorted, start=1):
        running += b
        if running >= t:
            return count
    raise FctpError("t out of range")  # unreachable: t <= sum(b)


def opt_lower_bound(inst: Instance) -> Fraction:
    """Every solution costs at least sum_i (f_i - f_{i+1}) * pi(a([i]))."""
    _require_pfct_s(inst)
    view = sorted_view(inst)
    f = list(view.fixed_sorted) + [Fraction(0)]
    total = Fraction(0)
    for pos in range(inst.n):
        total += (f[pos] - f[pos + 1]) * pi(inst, view.supply_prefix[pos])
    return total


def greedy_upper_bound(inst: Instance) -> Fraction:
    """The greedy solution costs at most the lower bound plus sum_{i>=2} f_i."""
    _require_pfct_s(inst)
    view = sorted_view(inst)
    return opt_lower_bound(inst) + sum(view.fixed_sorted[1:], Fraction(0))


def no_crossing_check(inst: Instance, sol: FlowSolution) -> bool:
    """No pair of support edges may cross in the sorted orders.

    A crossing is a pair (i, j'), (i', j) with i before i' in the source
    order and j before j' in the sink order.
    """
    view = sorted_view(inst)
    ranked = [
        (view.source_rank[i], view.sink_rank[j]) for (i, j) in sol.entries
    ]
    for a, (ri, rj) in enumerate(ranked):
        for ri2, rj2 in ranked[a + 1 :]:
            if (ri < ri2 and rj > rj2) or (ri2 < ri and rj2 > rj):
                return False
    return True


def compare_residual_bound(inst1: Instance, inst2: Instance, delta: int) -> bool:
    """Greedy on inst2 versus the exact optimum of inst1, shifted by delta.

    The instances must share sources, supplies and fixed costs; the sink
    profiles may differ.  Requires pi'(t) <= pi(t) + delta at every supply
    breakpoint (error otherwise), and then checks

        greedy_cost(inst2) <= opt(inst1) + delta * f_1 + sum_{i>=2} f_i

    exactly, with opt from the exact oracle.  A test utility; the CLI uses
    it for bound tables.
    """
    from . import oracle

    if delta < 0:
        raise FctpError("delta must be nonnegative")
    _require_pfct_s(inst1)
    _require_pfct_s(inst2)
    if inst1.supplies != inst2.supplies:
        raise FctpError("instances must share supplies")
    if _source_costs(inst1) != _source_costs(inst2):
        raise FctpError("instances must share fixed costs")
    view = sorted_view(inst1)
    for t in view.supply_prefix:
        if pi(inst2, t) > pi(inst1, t) + delta:
            raise FctpError("pi shift exceeds delta")
    greedy_cost = evaluate_cost(inst2, greedy_solve(inst2))
    opt1, _ = oracle.exact_fct(inst1)
    f = view.fixed_sorted
    bound = opt1 + delta * f[0] + sum(f[1:], Fraction(0))
    return greedy_cost <= bound
