"""(1 + eps)-approximation for pure instances with few sources.

Guess the set P of expensive edges used by the optimum: for every candidate
P, edges outside P costlier than P's cheapest member are forbidden, the
linear relaxation sum(x_ij / b_j * f_ij) is solved over the rest (P's fixed
costs are sunk), and the candidate's actual cost is evaluated; the cheapest
candidate wins.  Candidates run over all edge sets of size up to
min(2n/eps, nm, n + m - 1): a guess of size exactly 2n/eps covers optima
with at least that many support edges, and the exact optimal support (at
most n + m - 1 edges, forests) covers the rest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import FctpError, GuardError, InfeasibleError, VariantError
from .model import INF, FlowSolution, Instance, classify_variant, evaluate_cost
from .transport import solve_transportation


@dataclass(frozen=True)
class GuessedSet:
    """One candidate set of expensive edges and its cheapest fixed cost.

    An empty guess has threshold INF, meaning "no forbidding": the candidate
    degenerates to the plain linear relaxation.
    """

    edges: tuple[tuple[int, int], ...]
    threshold: object  # Fraction, or INF for the empty guess

    @classmethod
    def from_edges(cls, inst: Instance, edges) -> "GuessedSet":
        edges = tuple(sorted(edges))
        threshold = min((inst.fixed[i][j] for i, j in edges), default=INF)
        return cls(edges=edges, threshold=threshold)


def candidate_sizes(inst: Instance, eps: Fraction) -> range:
    inverse = Fraction(1, 1) / eps
    if inverse.denominator != 1:
        raise FctpError("1/epsilon must be an integer")
    allowed = sum(1 for _ in inst.edges())
    cap = min(2 * inst.n * int(inverse), allowed, inst.n + inst.m - 1)
    return range(0, cap + 1)


def ptas_solve(inst: Instance, eps, guard: int = 10**7) -> FlowSolution:
    """Best-of-all-guesses solution; cost at most (1 + eps) times optimal."""
    tag = classify_variant(inst)
    if not (tag.pure or tag.pure_modulo_forbidden):
        raise VariantError("requires PFCT")
    eps = Fraction(eps)
    if eps <= 0:
        raise FctpError("epsilon must be positive")
    sizes = candidate_sizes(inst, eps)
    edges = sorted(inst.edges())
    total_candidates = sum(comb(len(edges), s) for s in sizes)
    if total_candidates > guard:
        raise GuardError("instance too large for PTAS enumeration")

    best_cost: Fraction | None = None
    best_flow: FlowSolution | None = None
    for size in sizes:
        for combo in itertools.combinations(edges, size):
            guess = GuessedSet.from_edges(inst, combo)
            try:
                sol, _ = solve_transportation(inst, _guess_weights(inst, guess))
            except InfeasibleError:
                continue
            cost = evaluate_cost(inst, sol)
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_flow = sol
    if best_flow is None:
        raise InfeasibleError("no feasible transportation")
    return best_flow


def _guess_weights(inst: Instance, guess: GuessedSet):
    """Relaxation weights under a guess: guessed edges are free (their fixed
    costs are sunk), cheaper edges pay f/b fractionally, pricier ones are
    forbidden."""
    guessed = set(guess.edges)
    weights = []
    for i in range(inst.n):
        row = []
        for j in range(inst.m):
            if inst.linear[i][j] is INF:
                row.append(INF)
            elif (i, j) in guessed:
                row.append(Fraction(0))
            elif inst.fixed[i][j] <= guess.threshold:
                row.append(inst.fixed[i][j] / inst.demands[j])
            else:
                row.append(INF)
        weights.append(tuple(row))
    return tuple(weights)


def restricted_lp_value(inst: Instance, edges) -> Fraction:
    """LP value for one candidate set: sunk fixed costs plus the relaxation.

    Test hook for the bound "correctly guessed P has LP value <= opt".
    """
    guess = GuessedSet.from_edges(inst, edges)
    _, value = solve_transportation(inst, _guess_weights(inst, guess))
    sunk = sum((inst.fixed[i][j] for i, j in guess.edges), Fraction(0))
    return sunk + value
