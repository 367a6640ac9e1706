"""Seeded ratio sweep: every approximation guarantee, measured exactly.

Runs each solver over small random families, divides by the brute-force
optimum, and prints the worst observed ratio next to the proven bound.
Ratios are exact rationals; nothing here is float-rounded.
"""

import random
from fractions import Fraction

from fctp import evaluate_cost, greedy_solve, solve_fct_u, solve_pfct_u
from fctp.generators import random_fct_u, random_pfct_s, random_pfct_u, random_pure
from fctp.oracle import exact_balanced_partition, exact_fct
from fctp.ptas import ptas_solve


def sweep(name, bound, runs):
    worst = Fraction(0)
    for cost, opt in runs:
        if opt > 0:
            worst = max(worst, Fraction(cost) / opt)
    flag = "ok" if worst <= bound else "VIOLATED"
    print(f"{name:<22} worst ratio {str(worst):>8}  bound {bound}  {flag}")


def pfct_s_runs(count=60):
    for seed in range(count):
        rng = random.Random(seed)
        inst = random_pfct_s(rng, rng.randint(1, 4), rng.randint(1, 5))
        yield evaluate_cost(inst, greedy_solve(inst)), exact_fct(inst)[0]


def pfct_u_runs(count=60):
    for seed in range(count):
        rng = random.Random(seed)
        inst = random_pfct_u(rng, rng.randint(2, 12))
        _, flow = solve_pfct_u(inst, mode="exact")
        parts, _ = exact_balanced_partition(inst)
        yield evaluate_cost(inst, flow), inst.n + inst.m - parts


def fct_u_runs(count=60):
    for seed in range(count):
        rng = random.Random(seed)
        inst = random_fct_u(rng, rng.randint(1, 4), rng.randint(1, 3))
        yield evaluate_cost(inst, solve_fct_u(inst)), exact_fct(inst)[0]


def ptas_runs(count=25):
    for seed in range(count):
        rng = random.Random(seed)
        inst = random_pure(rng, rng.randint(1, 3), rng.randint(1, 4))
        sol = ptas_solve(inst, Fraction(1, 2))
        yield evaluate_cost(inst, sol), exact_fct(inst)[0]


sweep("PFCT-S greedy", Fraction(2), pfct_s_runs())
sweep("PFCT-U exact packing", Fraction(6, 5), pfct_u_runs())
sweep("FCT-U linear+forest", Fraction(2), fct_u_runs())
sweep("PFCT PTAS eps=1/2", Fraction(3, 2), ptas_runs())
