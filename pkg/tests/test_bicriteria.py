import random
from fractions import Fraction

import pytest

from fctp import oracle
from fctp.bicriteria import (
    NormalizedFractional,
    cost_factor,
    round_tree,
    solve_bicriteria,
)
from fctp.errors import FctpError
from fctp.generators import random_fct
from fctp.model import evaluate_cost, make_instance, validate_solution


def group_mass(tree, edges):
    return sum((tree.y.get(e, Fraction(0)) * tree.p(*e) for e in edges), Fraction(0))


def group_price(tree, edges):
    inst = tree.instance
    total = Fraction(0)
    for (i, j) in edges:
        p = tree.p(i, j)
        total += (inst.linear[i][j] * p + inst.fixed[i][j]) * tree.y.get(
            (i, j), Fraction(0)
        )
    return total


def check_rounding_properties(before, after, eps, child_groups):
    """The four per-group guarantees, checked by direct recomputation."""
    for vertex_value, edges in child_groups:
        for e in edges:
            y_old = before.y.get(e, Fraction(0))
            y_new = after.y.get(e, Fraction(0))
            if y_old >= eps:
                assert y_new == y_old
            else:
                assert y_new in (Fraction(0), eps)
        drop = group_mass(after, edges) - group_mass(before, edges)
        assert -eps * vertex_value < drop <= 0
        assert group_price(after, edges) <= group_price(before, edges)


def test_round_tree_identity_when_all_edges_large():
    inst = make_instance((2, 2), (2, 2), [[1, 1], [1, 1]], [[0, 0], [0, 0]])
    tree = NormalizedFractional(
        instance=inst,
        y={(0, 0): Fraction(1), (0, 1): Fraction(1, 2), (1, 1): Fraction(3, 4)},
    )
    out = round_tree(tree, Fraction(1, 4))
    assert out.y == tree.y


def test_round_tree_leaf_vertices_untouched():
    inst = make_instance((3,), (3,), [[1]], [[0]])
    tree = NormalizedFractional(instance=inst, y={(0, 0): Fraction(1)})
    assert round_tree(tree, Fraction(1, 8)).y == tree.y


def test_round_tree_two_equal_small_edges():
    # Two small child edges with equal p and equal unit price: the first is
    # raised to eps, the second zeroed.
    inst = make_instance(
        (8,), (4, 4), [[1, 1]], [[0, 0]]
    )
    eps = Fraction(1, 4)
    tree = NormalizedFractional(
        instance=inst, y={(0, 0): eps / 2, (0, 1): eps / 2}
    )
    out = round_tree(tree, eps)
    assert out.y == {(0, 0): eps}
    check_rounding_properties(
        tree, out, eps, [(8, [(0, 0), (0, 1)])]
    )


def test_round_tree_small_edge_on_2x2_instance():
    # LP solution on a=(20,20), b=(21,19) keeps edge (1,0) at y=1/20, which
    # is below eps' = 1/16; the child-group rule zeroes it.
    inst = make_instance(
        (20, 20), (21, 19), [[0, 8], [0, 0]], [[0, 1], [0, 0]]
    )
    from fctp.transport import solve_transportation

    weights = []
    for i in range(2):
        row = []
        for j in range(2):
            p = min(inst.supplies[i], inst.demands[j])
            row.append(inst.linear[i][j] + inst.fixed[i][j] / p)
        weights.append(row)
    lp_sol, _ = solve_transportation(inst, weights)
    assert lp_sol.entries == {
        (0, 0): Fraction(20),
        (1, 0): Fraction(1),
        (1, 1): Fraction(19),
    }
    y = {
        e: x / min(inst.supplies[e[0]], inst.demands[e[1]])
        for e, x in lp_sol.entries.items()
    }
    tree = NormalizedFractional(instance=inst, y=y)
    eps = Fraction(1, 16)
    assert y[(1, 0)] == Fraction(1, 20) < eps
    out = round_tree(tree, eps)
    assert (1, 0) not in out.y
    assert out.y[(0, 0)] == y[(0, 0)] and out.y[(1, 1)] == y[(1, 1)]
    # Child groups from rooting at source 0: t0's group holds edge (1, 0).
    check_rounding_properties(tree, out, eps, [(21, [(1, 0)])])


def test_round_tree_rejects_cycles():
    inst = make_instance((2, 2), (2, 2), [[1, 1], [1, 1]], [[0, 0], [0, 0]])
    cycle = NormalizedFractional(
        instance=inst,
        y={
            (0, 0): Fraction(1, 2),
            (0, 1): Fraction(1, 2),
            (1, 0): Fraction(1, 2),
            (1, 1): Fraction(1, 2),
        },
    )
    with pytest.raises(FctpError, match="non-tree support"):
        round_tree(cycle, Fraction(1, 8))


def test_epsilon_validation():
    inst = make_instance((1,), (1,), [[1]], [[0]])
    for bad in (0, Fraction(1, 3), Fraction(1, 2), 1):
        with pytest.raises(FctpError, match="epsilon"):
            solve_bicriteria(inst, bad)
    for good in (Fraction(1, 4), Fraction(1, 8)):
        solve_bicriteria(inst, good)


def test_bicriteria_1x1():
    inst = make_instance((5,), (5,), [[3]], [[2]])
    flow, report = solve_bicriteria(inst, Fraction(1, 4))
    assert flow.entries == {(0, 0): Fraction(5)}
    assert report.actual_cost == 3 + 10
    assert flow.relaxation == Fraction(1, 4)


def test_bicriteria_identity_when_no_small_edges():
    # Balanced 2x2 whose LP solution has all y == 1: rounding and scaling
    # are both identities, so the output is the LP solution itself.
    inst = make_instance((2, 3), (2, 3), [[0, 9], [9, 0]], [[0, 1], [1, 0]])
    flow, report = solve_bicriteria(inst, Fraction(1, 4))
    assert flow.entries == {(0, 0): Fraction(2), (1, 1): Fraction(3)}
    assert flow.col_sums(2) == [2, 3]  # exact marginals, scale factor 1
    assert report.actual_cost <= report.cost_bound


def test_bicriteria_properties_on_random_instances():
    rng = random.Random(59)
    for _ in range(30):
        n, m = rng.randint(1, 3), rng.randint(1, 4)
        inst = random_fct(rng, n, m, max_supply=8)
        for eps in (Fraction(1, 4), Fraction(1, 8)):
            flow, report = solve_bicriteria(inst, eps)
            assert validate_solution(inst, flow) is None
            assert flow.row_sums(n) == list(map(Fraction, inst.supplies))
            for j in range(m):
                got = flow.col_sums(m)[j]
                b = inst.demands[j]
                assert (1 - eps) * b <= got <= (1 + eps) * b
            assert evaluate_cost(inst, flow) == report.actual_cost
            assert report.actual_cost <= report.cost_bound
            assert report.cost_bound == cost_factor(eps / 4) * report.lp_value
            opt, _ = oracle.exact_fct(inst)
            assert report.lp_value <= opt
