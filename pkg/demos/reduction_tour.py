"""Instance generators from three classic reductions, checked end to end.

Directed Steiner tree becomes a digraph flow problem (root supplies one unit
per terminal) and vertex splitting turns that into an ordinary bipartite
instance with forbidden edges; the optimum survives both hops.  Set cover
becomes a sink-independent instance whose optimum equals the minimum
dominating-set size.  Bounded-frequency 3-dimensional matching becomes a
pure uniform instance with randomized demands whose small balanced sets are
forced to mirror triples.
"""

from fctp.oracle import (
    exact_balanced_partition,
    exact_dst,
    exact_fct,
    exact_min_dominating,
    exact_pfct_digraph,
)
from fctp.reductions import (
    dst_to_pfct_digraph,
    make_dst,
    make_setcover,
    make_threedm,
    setcover_to_fct_s,
    split_digraph_to_bipartite,
    threedm_to_pfct_u,
    verify_h_independence,
)

dst = make_dst(
    ["r", "u", "t1", "t2"],
    [("r", "u", 1), ("u", "t1", 1), ("u", "t2", 1)],
    "r",
    ["t1", "t2"],
)
dg = dst_to_pfct_digraph(dst)
inst = split_digraph_to_bipartite(dg)
print(
    "directed Steiner tree chain:",
    exact_dst(dst),
    "==",
    exact_pfct_digraph(dg),
    "==",
    exact_fct(inst)[0],
)

cover = make_setcover(3, [(0, 1), (1, 2), (2,)])
fct_s = setcover_to_fct_s(cover)
print(
    "set cover chain: min dominating",
    exact_min_dominating(cover),
    "== instance optimum",
    exact_fct(fct_s, guard=16)[0],
)

matching = make_threedm(2, [(0, 0, 0), (1, 1, 1), (0, 1, 1)])
inst, record = threedm_to_pfct_u(matching, seed=5)
print(
    f"3DM instance: {inst.n} sources, {inst.m} sinks, "
    f"demand draws passed independence after {record['draws']} attempt(s)"
)
assert verify_h_independence(record["element_demands"], 6)
count, _ = exact_balanced_partition(inst)
print(
    "optimum cost", inst.n + inst.m - count,
    "== 2n + m =", 2 * matching.n + len(matching.triples),
)
