"""Exact brute-force solvers used as ground truth by every acceptance test.

exact_fct minimizes over all forest supports: optimal solutions live at
extreme points of the transportation polytope (cycle rotation never raises
the cost), every forest decomposes into trees spanning balanced blocks, and
the flow on a tree is forced by the marginals.  The search is organized as a
rooted-subtree DP over vertex subsets, with a partition DP on top; costs are
integer-scaled internally (exact common-denominator scaling) to keep the hot
loop off Fraction arithmetic.

A second, independent strategy (exact_fct_enumerated) recursively assigns
every integral distribution of each supply; the suite checks the two agree.
Guards are hard errors, never silent truncation.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import lcm

from .errors import FctpError, GuardError, InfeasibleError
from .model import INF, FlowSolution, Instance, check_instance
from .pfct_u import (
    BalancedPartition,
    BalancedSet,
    balanced_set,
    sink_element,
    source_element,
)
from .reductions import DigraphInstance, DstInstance, SetCoverInstance


def _net_table(values: list[int], size: int) -> list[int]:
    net = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        net[mask] = net[mask ^ low] + values[low.bit_length() - 1]
    return net


def exact_fct(inst: Instance, guard: int = 16) -> tuple[Fraction, FlowSolution]:
    """Exact optimum cost and an optimal solution; guard bounds n + m."""
    check_instance(inst)
    n, m = inst.n, inst.m
    total_vertices = n + m
    if total_vertices > guard:
        raise GuardError(f"exact_fct guard exceeded: n + m = {total_vertices} > {guard}")

    scale = 1
    for row in inst.fixed:
        for x in row:
            scale = lcm(scale, x.denominator)
    for row in inst.linear:
        for x in row:
            if x is not INF:
                scale = lcm(scale, x.denominator)
    fix = [[int(x * scale) for x in row] for row in inst.fixed]
    lin = [
        [None if x is INF else int(x * scale) for x in row] for row in inst.linear
    ]

    values = [inst.supplies[v] if v < n else -inst.demands[v - n] for v in range(total_vertices)]
    size = 1 << total_vertices
    net = _net_table(values, size)
    src_mask = (1 << n) - 1

    adj = [0] * total_vertices
    for i in range(n):
        for j in range(m):
            if lin[i][j] is not None:
                adj[i] |= 1 << (n + j)
                adj[n + j] |= 1 << i

    # Connected component of each vertex in the allowed-edge graph; a block
    # spanning two components can never carry a tree.
    comp = [0] * total_vertices
    assigned = [False] * total_vertices
    for v in range(total_vertices):
        if assigned[v]:
            continue
        mask = 1 << v
        frontier = [v]
        while frontier:
            u = frontier.pop()
            rest = adj[u] & ~mask
            while rest:
                bit = rest & -rest
                rest ^= bit
                mask |= bit
                frontier.append(bit.bit_length() - 1)
        probe = mask
        while probe:
            bit = probe & -probe
            probe ^= bit
            w = bit.bit_length() - 1
            comp[w] = mask
            assigned[w] = True

    h = [[None] * size for _ in range(total_vertices)]
    choice = [[None] * size for _ in range(total_vertices)]
    g_val = [None] * size
    g_root = [None] * size

    for mask in range(1, size):
        probe = mask
        while probe:
            v_bit = probe & -probe
            probe ^= v_bit
            v = v_bit.bit_length() - 1
            if mask == v_bit:
                h[v][mask] = 0
                continue
            if mask & ~comp[v]:
                continue
            rest = mask ^ v_bit
            adj_v = adj[v]
            if not adj_v & rest:
                continue
            low = rest & -rest
            h_v = h[v]
            best = None
            best_choice = None
            sub = rest
            while sub:
                if sub & low:
                    remainder = h_v[mask ^ sub]
                    if remainder is not None:
                        nets = net[sub]
                        if nets > 0:
                            candidates = sub & adj_v & src_mask
                            amount = nets
                        elif nets < 0:
                            candidates = sub & adj_v & ~src_mask
                            amount = -nets
                        else:
                            candidates = sub & adj_v
                            amount = 0
                        while candidates:
                            u_bit = candidates & -candidates
                            candidates ^= u_bit
                            u = u_bit.bit_length() - 1
                            h_u = h[u][sub]
                            if h_u is None:
                                continue
                            if u < n:
                                i, j = u, v - n
                            else:
                                i, j = v, u - n
                            total = (
                                remainder + h_u + fix[i][j] + lin[i][j] * amount
                            )
                            if best is None or total < best:
                                best = total
                                best_choice = (sub, u)
                sub = (sub - 1) & rest
            h[v][mask] = best
            choice[v][mask] = best_choice
        if net[mask] == 0:
            probe = mask
            while probe:
                v_bit = probe & -probe
                probe ^= v_bit
                v = v_bit.bit_length() - 1
                cand = h[v][mask]
                if cand is not None and (g_val[mask] is None or cand < g_val[mask]):
                    g_val[mask] = cand
                    g_root[mask] = v

    dp = [None] * size
    dp_choice = [None] * size
    dp[0] = 0
    for mask in range(1, size):
        if net[mask] != 0:
            continue
        low = mask & -mask
        best = None
        best_sub = None
        sub = mask
        while sub:
            if sub & low and net[sub] == 0 and g_val[sub] is not None:
                remainder = dp[mask ^ sub]
                if remainder is not None:
                    total = g_val[sub] + remainder
                    if best is None or total < best:
                        best = total
                        best_sub = sub
            sub = (sub - 1) & mask
        dp[mask] = best
        dp_choice[mask] = best_sub

    full = size - 1
    if dp[full] is None:
        raise InfeasibleError("no feasible transportation")

    entries: dict[tuple[int, int], Fraction] = {}

    def emit(v: int, mask: int) -> None:
        while mask != 1 << v:
            sub, u = choice[v][mask]
            amount = abs(net[sub])
            if amount:
                edge = (u, v - n) if u < n else (v, u - n)
                entries[edge] = Fraction(amount)
            emit(u, sub)
            mask ^= sub

    mask = full
    while mask:
        block = dp_choice[mask]
        emit(g_root[block], block)
        mask ^= block

    return Fraction(dp[full], scale), FlowSolution(entries=entries)


def exact_fct_enumerated(inst: Instance, guard: int = 9) -> Fraction:
    """Independent oracle strategy: enumerate all integral assignments.

    Slower but structurally unrelated to exact_fct; used to cross-check it.
    The guard bounds n * m, and the running time also grows with the supply
    totals (keep them small).
    """
    check_instance(inst)
    n, m = inst.n, inst.m
    if n * m > guard:
        raise GuardError(f"enumeration guard exceeded: n * m = {n * m} > {guard}")
    rem_b = list(inst.demands)
    best: list[Fraction | None] = [None]

    def place_source(i: int, cost: Fraction) -> None:
        if best[0] is not None and cost >= best[0]:
            return
        if i == n:
            best[0] = cost
            return
        supply = inst.supplies[i]

        def fill(j: int, left: int, acc: Fraction) -> None:
            if best[0] is not None and acc >= best[0]:
                return
            if j == m:
                if left == 0:
                    place_source(i + 1, acc)
                return
            c = inst.linear[i][j]
            top = 0 if c is INF else min(left, rem_b[j])
            for x in range(top, -1, -1):
                rem_b[j] -= x
                extra = Fraction(0) if x == 0 else inst.fixed[i][j] + c * x
                fill(j + 1, left - x, acc + extra)
                rem_b[j] += x

        fill(0, supply, cost)

    place_source(0, Fraction(0))
    if best[0] is None:
        raise InfeasibleError("no feasible transportation")
    return best[0]


def exact_balanced_partition(
    inst: Instance, guard: int = 16
) -> tuple[int, BalancedPartition]:
    """Maximum number of balanced parts covering S and T (subset DP)."""
    n, m = inst.n, inst.m
    total_vertices = n + m
    if total_vertices > guard:
        raise GuardError(
            f"partition guard exceeded: n + m = {total_vertices} > {guard}"
        )
    values = [inst.supplies[v] if v < n else -inst.demands[v - n] for v in range(total_vertices)]
    size = 1 << total_vertices
    net = _net_table(values, size)
    if net[size - 1] != 0:
        raise FctpError("instance is not balanced")
    dp = [None] * size
    pick = [None] * size
    dp[0] = 0
    for mask in range(1, size):
        if net[mask] != 0:
            continue
        low = mask & -mask
        best = None
        best_sub = None
        sub = mask
        while sub:
            if sub & low and net[sub] == 0 and dp[mask ^ sub] is not None:
                cand = dp[mask ^ sub] + 1
                if best is None or cand > best:
                    best = cand
                    best_sub = sub
            sub = (sub - 1) & mask
        dp[mask] = best
        pick[mask] = best_sub

    def to_set(mask: int) -> BalancedSet:
        elements = []
        probe = mask
        while probe:
            bit = probe & -probe
            probe ^= bit
            v = bit.bit_length() - 1
            if v < n:
                elements.append(source_element(v, inst.supplies[v]))
            else:
                elements.append(sink_element(v - n, inst.demands[v - n]))
        return balanced_set(elements)

    parts = []
    mask = size - 1
    while mask:
        sub = pick[mask]
        parts.append(to_set(sub))
        mask ^= sub
    return dp[size - 1], BalancedPartition(parts=tuple(parts))


def exact_dst(dst: DstInstance, guard: int = 7) -> Fraction:
    """Minimum cost of a subgraph connecting the root to every terminal.

    Dreyfus-Wagner style DP over terminal subsets on all-pairs shortest
    paths; exact rationals throughout.
    """
    if len(dst.vertices) > guard:
        raise GuardError(
            f"dst guard exceeded: {len(dst.vertices)} vertices > {guard}"
        )
    vertices = list(dst.vertices)
    index = {v: k for k, v in enumerate(vertices)}
    nv = len(vertices)
    dist: list[list[Fraction | None]] = [[None] * nv for _ in range(nv)]
    for v in range(nv):
        dist[v][v] = Fraction(0)
    for u, v, cost in dst.edges:
        ui, vi = index[u], index[v]
        if dist[ui][vi] is None or cost < dist[ui][vi]:
            dist[ui][vi] = cost
    for k in range(nv):
        for i in range(nv):
            if dist[i][k] is None:
                continue
            for j in range(nv):
                if dist[k][j] is None:
                    continue
                through = dist[i][k] + dist[k][j]
                if dist[i][j] is None or through < dist[i][j]:
                    dist[i][j] = through

    terms = [index[t] for t in dst.terminals]
    k = len(terms)
    full = (1 << k) - 1
    dp: list[list[Fraction | None]] = [[None] * (full + 1) for _ in range(nv)]
    for pos, t in enumerate(terms):
        for v in range(nv):
            dp[v][1 << pos] = dist[v][t]
    masks = sorted(range(1, full + 1), key=lambda x: x.bit_count())
    for mask in masks:
        if mask.bit_count() < 2:
            continue
        merged: list[Fraction | None] = [None] * nv
        low = mask & -mask
        for v in range(nv):
            sub = (mask - 1) & mask
            while sub:
                if sub & low:
                    a, b = dp[v][sub], dp[v][mask ^ sub]
                    if a is not None and b is not None:
                        cand = a + b
                        if merged[v] is None or cand < merged[v]:
                            merged[v] = cand
                sub = (sub - 1) & mask
        for v in range(nv):
            best = None
            for u in range(nv):
                if merged[u] is None or dist[v][u] is None:
                    continue
                cand = dist[v][u] + merged[u]
                if best is None or cand < best:
                    best = cand
            dp[v][mask] = best
    answer = dp[index[dst.root]][full]
    if answer is None:
        raise InfeasibleError("infeasible DST")
    return answer


def exact_dst_by_edge_subsets(dst: DstInstance, edge_guard: int = 16) -> Fraction:
    """Second DST strategy: enumerate edge subsets, keep reachability-feasible ones."""
    edges = dst.edges
    if len(edges) > edge_guard:
        raise GuardError(f"too many edges ({len(edges)}) for subset enumeration")
    best: Fraction | None = None
    terminals = set(dst.terminals)
    for mask in range(1 << len(edges)):
        cost = Fraction(0)
        chosen = []
        for pos in range(len(edges)):
            if mask >> pos & 1:
                chosen.append(edges[pos])
                cost += edges[pos][2]
        if best is not None and cost >= best:
            continue
        reach = {dst.root}
        changed = True
        while changed:
            changed = False
            for u, v, _ in chosen:
                if u in reach and v not in reach:
                    reach.add(v)
                    changed = True
        if terminals <= reach:
            best = cost
    if best is None:
        raise InfeasibleError("infeasible DST")
    return best


def exact_min_dominating(sc: SetCoverInstance, guard: int = 12) -> int:
    """Exact minimum dominating-set (set cover) size by subset enumeration."""
    m = len(sc.sets)
    if m > guard:
        raise GuardError(f"dominating guard exceeded: {m} sets > {guard}")
    universe = frozenset(range(sc.n_elements))
    union_all = frozenset().union(*(frozenset(s) for s in sc.sets))
    if union_all != universe:
        raise FctpError("some element has no covering set")
    for count in range(1, m + 1):
        for combo in combinations(range(m), count):
            covered = frozenset().union(*(frozenset(sc.sets[v]) for v in combo))
            if covered == universe:
                return count
    raise FctpError("unreachable: the full family covers the universe")


def exact_pfct_digraph(dg: DigraphInstance, edge_guard: int = 16) -> Fraction:
    """Exact digraph optimum: enumerate used-edge subsets, test by max-flow."""
    edges = dg.edges
    if len(edges) > edge_guard:
        raise GuardError(f"too many edges ({len(edges)}) for subset enumeration")
    total = sum(dg.supplies.values())
    index = {v: k for k, v in enumerate(dg.vertices)}
    nv = len(dg.vertices)
    source_node = nv
    sink_node = nv + 1
    base_arcs = [(source_node, index[v], a) for v, a in sorted(dg.supplies.items(), key=lambda kv: index[kv[0]])]
    base_arcs += [(index[v], sink_node, b) for v, b in sorted(dg.demands.items(), key=lambda kv: index[kv[0]])]
    best: Fraction | None = None
    order = sorted(range(1 << len(edges)), key=lambda mask: sum(edges[p][2] for p in range(len(edges)) if mask >> p & 1))
    for mask in order:
        cost = sum(
            (edges[p][2] for p in range(len(edges)) if mask >> p & 1),
            Fraction(0),
        )
        if best is not None and cost >= best:
            break
        arcs = list(base_arcs)
        for p in range(len(edges)):
            if mask >> p & 1:
                u, v, _ = edges[p]
                arcs.append((index[u], index[v], total))
        if _max_flow(nv + 2, arcs, source_node, sink_node) == total:
            best = cost
    if best is None:
        raise InfeasibleError("no feasible digraph flow")
    return best


def _max_flow(num_nodes: int, arcs, s: int, t: int) -> int:
    """Integral Edmonds-Karp max flow on a small arc list."""
    capacity = [[0] * num_nodes for _ in range(num_nodes)]
    for u, v, cap in arcs:
        capacity[u][v] += cap
    flow = 0
    while True:
        parent = [-1] * num_nodes
        parent[s] = s
        queue = [s]
        while queue and parent[t] < 0:
            u = queue.pop(0)
            for v in range(num_nodes):
                if parent[v] < 0 and capacity[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if parent[t] < 0:
            return flow
        bottleneck = None
        v = t
        while v != s:
            u = parent[v]
            cap = capacity[u][v]
            bottleneck = cap if bottleneck is None else min(bottleneck, cap)
            v = u
        v = t
        while v != s:
            u = parent[v]
            capacity[u][v] -= bottleneck
            capacity[v][u] += bottleneck
            v = u
        flow += bottleneck
