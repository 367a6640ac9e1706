import random
from fractions import Fraction

import pytest

from util import brute_force_opt, is_forest

from fctp import oracle
from fctp.errors import FctpError, GuardError, InfeasibleError
from fctp.generators import random_fct, random_pfct_u
from fctp.model import INF, evaluate_cost, make_instance, validate_solution
from fctp.pfct_u import uniform_pure_instance, validate_partition
from fctp.reductions import make_dst, make_setcover


def test_exact_fct_e1(e1):
    opt, flow = oracle.exact_fct(e1)
    assert opt == 28
    assert oracle.exact_fct_enumerated(e1) == 28
    assert validate_solution(e1, flow) is None
    assert evaluate_cost(e1, flow) == 28


def test_exact_fct_trivial_1x1():
    inst = make_instance((3,), (3,), [[5]], [[Fraction(1, 2)]])
    opt, flow = oracle.exact_fct(inst)
    assert opt == 5 + Fraction(3, 2)
    assert flow.entries == {(0, 0): Fraction(3)}


def test_exact_fct_2x2_mixed_costs():
    inst = make_instance((2, 2), (3, 1), [[1, 1], [1, 1]], [[0, 1], [1, 0]])
    opt, _ = oracle.exact_fct(inst)
    assert opt == 4
    assert oracle.exact_fct_enumerated(inst) == 4


def test_exact_fct_respects_forbidden_edges():
    inst = make_instance(
        (2, 2), (2, 2), [[0, 0], [0, 0]], [[0, INF], [INF, 0]]
    )
    opt, flow = oracle.exact_fct(inst)
    assert opt == 0
    assert set(flow.entries) == {(0, 0), (1, 1)}
    blocked = make_instance((1,), (1,), [[0]], [[INF]])
    with pytest.raises(InfeasibleError):
        oracle.exact_fct(blocked)
    with pytest.raises(InfeasibleError):
        oracle.exact_fct_enumerated(blocked)


def test_exact_fct_guard():
    inst = uniform_pure_instance((1,) * 9, (1,) * 9)
    with pytest.raises(GuardError):
        oracle.exact_fct(inst, guard=16)


def test_strategies_agree_on_small_instances():
    rng = random.Random(23)
    for _ in range(30):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        inst = random_fct(rng, n, m, max_supply=3, max_fixed=6, max_linear=3)
        opt, flow = oracle.exact_fct(inst)
        assert opt == oracle.exact_fct_enumerated(inst)
        assert opt == brute_force_opt(inst)
        assert validate_solution(inst, flow) is None
        assert evaluate_cost(inst, flow) == opt
        assert is_forest(flow.entries)


def test_balanced_partition_examples():
    count, part = oracle.exact_balanced_partition(
        uniform_pure_instance((3, 5), (1, 2, 5))
    )
    assert count == 2
    inst = uniform_pure_instance((2,), (2,))
    assert oracle.exact_balanced_partition(inst)[0] == 1
    count, part = oracle.exact_balanced_partition(
        uniform_pure_instance((7,), (1, 2, 4))
    )
    assert count == 1
    assert validate_partition(uniform_pure_instance((7,), (1, 2, 4)), part) is None


def test_balanced_partition_matches_exact_fct_on_pure_uniform():
    rng = random.Random(29)
    for _ in range(25):
        inst = random_pfct_u(rng, rng.randint(2, 9), max_supply=6)
        count, part = oracle.exact_balanced_partition(inst)
        assert validate_partition(inst, part) is None
        opt, _ = oracle.exact_fct(inst)
        assert opt == inst.n + inst.m - count


def test_exact_fct_lower_bounds_every_solver():
    from fctp.fct_u import solve_fct_u
    from fctp.pfct_s import greedy_solve
    from fctp.pfct_u import solve_pfct_u

    rng = random.Random(31)
    for _ in range(10):
        inst = random_pfct_u(rng, rng.randint(2, 8), max_supply=5)
        opt, _ = oracle.exact_fct(inst)
        assert opt <= evaluate_cost(inst, solve_fct_u(inst))
        assert opt <= evaluate_cost(inst, greedy_solve(inst))
        _, flow = solve_pfct_u(inst)
        assert opt <= evaluate_cost(inst, flow)


def test_exact_dst_examples():
    star = make_dst(
        ["r", "t1", "t2"], [("r", "t1", 1), ("r", "t2", 1)], "r", ["t1", "t2"]
    )
    assert oracle.exact_dst(star) == 2
    diamond = make_dst(
        ["r", "u", "t1", "t2"],
        [("r", "u", 1), ("u", "t1", 1), ("u", "t2", 1)],
        "r",
        ["t1", "t2"],
    )
    assert oracle.exact_dst(diamond) == 3
    path = make_dst(
        ["r", "u", "t"], [("r", "u", 1), ("u", "t", 4)], "r", ["t"]
    )
    assert oracle.exact_dst(path) == 5


def test_exact_dst_strategies_agree_on_random_graphs():
    rng = random.Random(37)
    for _ in range(15):
        nv = rng.randint(3, 6)
        vertices = list(range(nv))
        edges = []
        for u in range(nv):
            for v in range(nv):
                if u != v and rng.random() < 0.45:
                    edges.append((u, v, Fraction(rng.randint(0, 6))))
        if not edges:
            continue
        reachable = {0}
        changed = True
        while changed:
            changed = False
            for u, v, _ in edges:
                if u in reachable and v not in reachable:
                    reachable.add(v)
                    changed = True
        candidates = sorted(reachable - {0})
        if not candidates:
            continue
        terminals = rng.sample(candidates, min(len(candidates), rng.randint(1, 3)))
        dst = make_dst(vertices, edges, 0, terminals)
        assert oracle.exact_dst(dst) == oracle.exact_dst_by_edge_subsets(dst)


def test_exact_dst_unreachable_terminal():
    dst = make_dst(["r", "t"], [("t", "r", 1)], "r", ["t"])
    with pytest.raises(InfeasibleError):
        oracle.exact_dst(dst)


def test_exact_dst_guard():
    dst = make_dst(range(8), [(0, 1, 1)], 0, [1])
    with pytest.raises(GuardError):
        oracle.exact_dst(dst)


def test_exact_min_dominating_examples():
    sc = make_setcover(2, [(0, 1), (1,)])
    assert oracle.exact_min_dominating(sc) == 1
    assert oracle.exact_min_dominating(make_setcover(3, [(0, 1, 2)])) == 1
    disjoint = make_setcover(2, [(0,), (1,)])
    assert oracle.exact_min_dominating(disjoint) == 2
    uncovered = make_setcover(2, [(0,)])
    with pytest.raises(FctpError):
        oracle.exact_min_dominating(uncovered)


def test_partition_guard():
    inst = uniform_pure_instance((1,) * 9, (1,) * 9)
    with pytest.raises(GuardError):
        oracle.exact_balanced_partition(inst, guard=16)
