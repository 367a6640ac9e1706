"""Exact minimization of linear objectives over the transportation polytope.

Successive shortest paths with Dijkstra potentials on the bipartite network,
entirely in rational arithmetic, followed by cycle cancellation so the
returned support is always a forest (an extreme point).  Forbidden edges
(weight INF) are excluded from the residual graph rather than given a big-M
weight, keeping every comparison exact.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .errors import InfeasibleError
from .model import INF, FlowSolution, Instance

WeightMatrix = tuple  # n x m rows of Fraction | INF


def as_weight_matrix(rows) -> tuple[tuple, ...]:
    """Coerce a nested iterable into a weight matrix of Fractions / INF."""
    out = []
    for row in rows:
        out.append(tuple(x if x is INF else Fraction(x) for x in row))
    return tuple(out)


def solve_transportation(inst: Instance, weights) -> tuple[FlowSolution, Fraction]:
    """Minimize sum(w_ij * x_ij) over all feasible flows; exact and integral.

    Returns (solution, objective).  The solution is an optimal extreme point:
    integral flows (integrality of the transportation polytope) with acyclic
    support of at most n + m - 1 edges.  Raises InfeasibleError when the
    finite-weight edges cannot carry any feasible flow, and ValueError on
    negative weights (the Dijkstra potentials require w >= 0).
    """
    n, m = inst.n, inst.m
    w = as_weight_matrix(weights)
    if len(w) != n or any(len(row) != m for row in w):
        raise ValueError("weight matrix shape must match the instance")
    for row in w:
        for x in row:
            if x is not INF and x < 0:
                raise ValueError("negative weights are not supported")

    # Node ids: sources 0..n-1, sinks n..n+m-1.
    adj = [[] for _ in range(n)]  # source -> usable sinks
    radj = [[] for _ in range(m)]  # sink -> usable sources
    for i in range(n):
        for j in range(m):
            if w[i][j] is not INF:
                adj[i].append(j)
                radj[j].append(i)

    rem_a = list(inst.supplies)
    rem_b = list(inst.demands)
    flow: dict[tuple[int, int], int] = {}
    pot = [Fraction(0)] * (n + m)
    total_left = sum(rem_a)

    while total_left > 0:
        # Multi-source Dijkstra from every source with remaining supply,
        # over reduced costs (nonnegative by the potential invariant).
        # All reachable nodes are settled so the potential update below
        # only ever sees final distances.
        dist: list[Fraction | None] = [None] * (n + m)
        parent: list[tuple[int, int] | None] = [None] * (n + m)
        heap = []
        counter = 0
        for i in range(n):
            if rem_a[i] > 0:
                dist[i] = Fraction(0)
                heapq.heappush(heap, (Fraction(0), counter, i))
                counter += 1
        while heap:
            d, _, v = heapq.heappop(heap)
            if dist[v] is None or d > dist[v]:
                continue
            if v < n:
                i = v
                for j in adj[i]:
                    rc = w[i][j] + pot[i] - pot[n + j]
                    nd = d + rc
                    u = n + j
                    if dist[u] is None or nd < dist[u]:
                        dist[u] = nd
                        parent[u] = (i, j)
                        heapq.heappush(heap, (nd, counter, u))
                        counter += 1
            else:
                j = v - n
                for i in radj[j]:
                    if flow.get((i, j), 0) > 0:
                        rc = -w[i][j] + pot[v] - pot[i]
                        nd = d + rc
                        if dist[i] is None or nd < dist[i]:
                            dist[i] = nd
                            parent[i] = (i, j)
                            heapq.heappush(heap, (nd, counter, i))
                            counter += 1
        target = -1
        for j in range(m):
            v = n + j
            if rem_b[j] > 0 and dist[v] is not None:
                if target < 0 or dist[v] < dist[target]:
                    target = v
        if target < 0:
            raise InfeasibleError("no feasible transportation")

        # Walk the path back, collecting forward/backward arcs.
        path = []
        v = target
        while parent[v] is not None:
            i, j = parent[v]
            forward = v == n + j
            path.append((i, j, forward))
            v = i if forward else n + j
        start = v
        path.reverse()

        delta = min(rem_a[start], rem_b[target - n])
        for i, j, forward in path:
            if not forward:
                delta = min(delta, flow[(i, j)])
        for i, j, forward in path:
            if forward:
                flow[(i, j)] = flow.get((i, j), 0) + delta
            else:
                flow[(i, j)] -= delta
                if flow[(i, j)] == 0:
                    del flow[(i, j)]
        rem_a[start] -= delta
        rem_b[target - n] -= delta
        total_left -= delta

        # Standard potential update keeps reduced costs nonnegative.
        dt = dist[target]
        for v in range(n + m):
            if dist[v] is not None and dist[v] < dt:
                pot[v] += dist[v] - dt

    sol = FlowSolution(entries={e: Fraction(x) for e, x in sorted(flow.items())})
    sol = cancel_cycles(sol, w)
    value = sum((w[i][j] * x for (i, j), x in sol.entries.items()), Fraction(0))
    return sol, value


def cancel_cycles(sol: FlowSolution, weights) -> FlowSolution:
    """Rotate flow around support cycles until the support is a forest.

    Marginals are preserved exactly and the weighted cost never increases:
    the rotation direction is the cheaper of the two, with ties broken toward
    the direction that zeroes the lexicographically smallest edge.
    """
    w = as_weight_matrix(weights)
    flow = dict(sol.entries)
    while True:
        cycle = _find_cycle(flow)
        if cycle is None:
            break
        # cycle: edge list (i, j, forward) alternating around the cycle;
        # direction A increases "forward" edges and decreases the others.
        inc = [(i, j) for i, j, fwd in cycle if fwd]
        dec = [(i, j) for i, j, fwd in cycle if not fwd]
        delta_a = sum((w[i][j] for i, j in inc), Fraction(0)) - sum(
            (w[i][j] for i, j in dec), Fraction(0)
        )
        if delta_a < 0:
            use_inc, use_dec = inc, dec
        elif delta_a > 0:
            use_inc, use_dec = dec, inc
        else:
            # Equal cost both ways: zero the lexicographically smallest edge.
            bot_a = min(flow[e] for e in dec)
            bot_b = min(flow[e] for e in inc)
            zero_a = min(e for e in dec if flow[e] == bot_a)
            zero_b = min(e for e in inc if flow[e] == bot_b)
            if zero_a < zero_b:
                use_inc, use_dec = inc, dec
            else:
                use_inc, use_dec = dec, inc
        bottleneck = min(flow[e] for e in use_dec)
        for e in use_inc:
            flow[e] = flow.get(e, 0) + bottleneck
        for e in use_dec:
            flow[e] -= bottleneck
            if flow[e] == 0:
                del flow[e]
    return FlowSolution(
        entries={e: Fraction(x) for e, x in sorted(flow.items())},
        relaxation=sol.relaxation,
    )


def _find_cycle(flow):
    """Find one cycle in the bipartite support graph, or None.

    Returns the cycle as [(i, j, forward), ...] where forward means the edge
    is traversed source -> sink.
    """
    nodes: dict = {}
    for (i, j) in flow:
        nodes.setdefault(("s", i), []).append(("t", j))
        nodes.setdefault(("t", j), []).append(("s", i))
    seen = set()
    for root in sorted(nodes):
        if root in seen:
            continue
        # Iterative DFS tracking the tree parent to avoid the trivial cycle.
        stack = [(root, None)]
        parents = {root: None}
        while stack:
            v, parent = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            for u in sorted(nodes[v]):
                if u == parent:
                    # A parallel edge cannot occur (simple bipartite graph).
                    continue
                if u in parents and u in seen:
                    return _extract_cycle(parents, v, u)
                if u not in parents:
                    parents[u] = v
                    stack.append((u, v))
    return None


def _extract_cycle(parents, v, u):
    """Build the edge cycle closing the tree path u ~> v with edge (v, u)."""
    path_v = []
    x = v
    while x is not None:
        path_v.append(x)
        x = parents[x]
    index = {node: k for k, node in enumerate(path_v)}
    walk = [u]
    x = u
    while x not in index:
        x = parents[x]
        walk.append(x)
    meet = index[x]
    # Cycle order: meet ~> v along v's parent chain, edge (v, u), then
    # u ~> back to meet along u's parent chain.
    cycle_nodes = path_v[: meet + 1][::-1] + walk[:-1]
    # cycle_nodes closes back to its first node; orient each hop.
    edges = []
    for k, node in enumerate(cycle_nodes):
        nxt = cycle_nodes[(k + 1) % len(cycle_nodes)]
        if node[0] == "s":
            edges.append((node[1], nxt[1], True))
        else:
            edges.append((nxt[1], node[1], False))
    return edges
