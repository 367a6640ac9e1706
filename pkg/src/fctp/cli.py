"""Command-line front end: solve, verify, certify, oracle, generate, bench.

All reports are JSON lines with rationals rendered as ``p/q`` (never
decimals), so runs are byte-for-byte reproducible given flags and seeds.
Wall-clock timing is opt-in (``--timing``) because it would break that
reproducibility.  Exit codes: 0 success, 1 internal invariant failure,
2 user error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import generators, oracle
from .bicriteria import solve_bicriteria
from .errors import CertificateError, FctpError, GuardError, ParseError
from .fct_u import solve_fct_u
from .model import (
    evaluate_cost,
    format_rational,
    parse_instance,
    parse_solution,
    serialize_instance,
    serialize_solution,
    validate_instance,
    validate_solution,
)
from .pfct_s import greedy_solve, greedy_upper_bound, opt_lower_bound
from .pfct_u import solve_pfct_u, verify_factor_revealing_certificate
from .ptas import ptas_solve
from .reductions import (
    dst_to_pfct_digraph,
    make_dst,
    make_setcover,
    make_threedm,
    setcover_to_fct_s,
    split_digraph_to_bipartite,
    threedm_to_pfct_u,
)

VARIANTS = ("pfct-s", "pfct-u", "fct-u", "fct-bicriteria", "pfct-ptas")


@dataclass
class RunReport:
    """One solver run; ratio is present exactly when the oracle cost is."""

    instance: str
    variant: str
    algorithm: str
    cost: Fraction
    parameters: dict
    oracle_cost: Fraction | None = None
    ratio: Fraction | None = None
    wall_time_s: float | None = None

    def to_json(self) -> str:
        record = {
            "instance": self.instance,
            "variant": self.variant,
            "algorithm": self.algorithm,
            "cost": format_rational(self.cost),
            "parameters": self.parameters,
        }
        if self.oracle_cost is not None:
            record["oracle_cost"] = format_rational(self.oracle_cost)
            if self.ratio is not None:
                record["ratio"] = format_rational(self.ratio)
        if self.wall_time_s is not None:
            record["wall_time_s"] = round(self.wall_time_s, 6)
        return json.dumps(record)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise FctpError(f"not a rational: {text!r}") from None


def _dispatch_solver(inst, args):
    """Returns (flow, algorithm name, extra report fields)."""
    variant = args.variant
    if variant == "pfct-s":
        flow = greedy_solve(inst)
        extra = {
            "opt_lower_bound": format_rational(opt_lower_bound(inst)),
            "greedy_upper_bound": format_rational(greedy_upper_bound(inst)),
        }
        return flow, "greedy", extra
    if variant == "pfct-u":
        _, flow = solve_pfct_u(inst, mode=args.mode, swap_size=args.swap)
        return flow, f"balanced-packing-{args.mode}", {}
    if variant == "fct-u":
        return solve_fct_u(inst), "linear-then-forest", {}
    if variant == "fct-bicriteria":
        if args.epsilon is None:
            raise FctpError("--epsilon is required for fct-bicriteria")
        flow, report = solve_bicriteria(inst, _parse_fraction(args.epsilon))
        extra = {
            "lp_value": format_rational(report.lp_value),
            "cost_bound": format_rational(report.cost_bound),
        }
        return flow, "bicriteria-rounding", extra
    if variant == "pfct-ptas":
        if args.epsilon is None:
            raise FctpError("--epsilon is required for pfct-ptas")
        flow = ptas_solve(inst, _parse_fraction(args.epsilon))
        return flow, "guess-expensive-edges", {}
    raise FctpError(f"unknown variant {variant!r}")


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.input))
    report = validate_instance(inst)
    if report is not None:
        print(f"invalid instance: {report}", file=sys.stderr)
        return 2
    started = time.perf_counter()
    flow, algorithm, extra = _dispatch_solver(inst, args)
    elapsed = time.perf_counter() - started
    cost = evaluate_cost(inst, flow)
    parameters = {}
    if args.variant == "pfct-u":
        parameters["mode"] = args.mode
        if args.mode == "ls":
            parameters["swap"] = args.swap
    if args.epsilon is not None:
        parameters["epsilon"] = args.epsilon
    parameters.update(extra)
    run = RunReport(
        instance=args.input,
        variant=args.variant,
        algorithm=algorithm,
        cost=cost,
        parameters=parameters,
    )
    if args.oracle:
        opt, _ = oracle.exact_fct(inst, guard=args.guard)
        run.oracle_cost = opt
        if opt > 0:
            run.ratio = cost / opt
    if args.timing:
        run.wall_time_s = elapsed
    if args.out:
        _write(args.out, serialize_solution(flow))
    print(run.to_json())
    return 0


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution))
    report = validate_instance(inst)
    if report is not None:
        print(json.dumps({"status": "violation", "detail": f"instance: {report}"}))
        return 2
    violation = validate_solution(inst, sol)
    if violation is not None:
        print(json.dumps({"status": "violation", "detail": violation}))
        return 2
    cost = evaluate_cost(inst, sol)
    record = {"status": "ok", "cost": format_rational(cost)}
    if sol.relaxation is not None:
        record["relaxed"] = format_rational(sol.relaxation)
    print(json.dumps(record))
    return 0


def _parse_overrides(pairs):
    overrides = {}
    for item in pairs or []:
        key, _, value = item.partition("=")
        if not value:
            raise FctpError(f"expected KEY=P/Q, got {item!r}")
        overrides[key] = _parse_fraction(value)
    return overrides


def cmd_certify(args) -> int:
    if args.what != "lp65":
        print(f"unknown certificate {args.what!r}", file=sys.stderr)
        return 2
    try:
        cert = verify_factor_revealing_certificate(
            primal=_parse_overrides(args.perturb_primal),
            dual=_parse_overrides(args.perturb_dual),
        )
    except CertificateError as exc:
        print(f"certificate invalid: {exc}", file=sys.stderr)
        return 1
    primal = " ".join(
        f"{key}={format_rational(value)}" for key, value in cert.primal.items()
    )
    dual = " ".join(
        f"{key}={format_rational(value)}" for key, value in cert.dual.items()
    )
    print("factor-revealing LP certificate")
    print(f"primal: {primal}")
    print(f"dual: {dual}")
    print(f"value: {format_rational(cert.value)}")
    return 0


def cmd_oracle(args) -> int:
    inst = parse_instance(_read(args.input))
    report = validate_instance(inst)
    if report is not None:
        print(f"invalid instance: {report}", file=sys.stderr)
        return 2
    cost, flow = oracle.exact_fct(inst, guard=args.guard)
    if args.out:
        _write(args.out, serialize_solution(flow))
    print(json.dumps({"command": "oracle", "cost": format_rational(cost)}))
    return 0


# --- generator input formats (line-oriented; see README) -------------------


def _split_line(lines, lineno, what):
    if lineno > len(lines):
        raise ParseError(lineno, f"missing {what} line")
    return lines[lineno - 1].split()


def _ints(tokens, lineno, what):
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise ParseError(lineno, f"{what} must be integers") from None


def parse_dst_file(text: str):
    lines = [line for line in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != "DST v1":
        raise ParseError(1, "expected header 'DST v1'")
    nv, ne = _ints(_split_line(lines, 2, "dimensions"), 2, "dimensions")
    root = _ints(_split_line(lines, 3, "root"), 3, "root")[0]
    terminals = _ints(_split_line(lines, 4, "terminals"), 4, "terminals")
    edges = []
    for k in range(ne):
        lineno = 5 + k
        parts = _split_line(lines, lineno, "edge")
        if len(parts) != 3:
            raise ParseError(lineno, "expected 'u v cost'")
        u, v = _ints(parts[:2], lineno, "edge endpoints")
        edges.append((u, v, _parse_fraction(parts[2])))
    return make_dst(range(1, nv + 1), edges, root, terminals)


def parse_setcover_file(text: str):
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != "SETCOVER v1":
        raise ParseError(1, "expected header 'SETCOVER v1'")
    m, n = _ints(_split_line(lines, 2, "dimensions"), 2, "dimensions")
    sets = []
    for k in range(m):
        lineno = 3 + k
        row = _ints(_split_line(lines, lineno, "set"), lineno, "set")
        if not row or row[0] != len(row) - 1:
            raise ParseError(lineno, "expected 'k e1 ... ek'")
        sets.append(tuple(e - 1 for e in row[1:]))
    return make_setcover(n, sets)


def parse_threedm_file(text: str):
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != "3DM v1":
        raise ParseError(1, "expected header '3DM v1'")
    n, m = _ints(_split_line(lines, 2, "dimensions"), 2, "dimensions")
    triples = []
    for k in range(m):
        lineno = 3 + k
        x, y, z = _ints(_split_line(lines, lineno, "triple"), lineno, "triple")
        triples.append((x - 1, y - 1, z - 1))
    return make_threedm(n, triples)


def cmd_generate(args) -> int:
    text = _read(args.input)
    record = {"command": "generate", "from": getattr(args, "from")}
    if getattr(args, "from") == "dst":
        dst = parse_dst_file(text)
        inst = split_digraph_to_bipartite(dst_to_pfct_digraph(dst))
    elif getattr(args, "from") == "setcover":
        inst = setcover_to_fct_s(parse_setcover_file(text))
    else:  # 3dm
        tdm = parse_threedm_file(text)
        inst, demand_record = threedm_to_pfct_u(
            tdm, delta=args.delta, seed=args.seed, b_prime=args.bprime
        )
        record.update(
            {
                "seed": demand_record["seed"],
                "delta": demand_record["delta"],
                "b_prime": demand_record["b_prime"],
                "draws": demand_record["draws"],
                "dummy_demand": demand_record["dummy_demand"],
            }
        )
    body = serialize_instance(inst)
    if args.out:
        _write(args.out, body)
        record["out"] = args.out
        record["n"] = inst.n
        record["m"] = inst.m
        print(json.dumps(record))
    else:
        sys.stdout.write(body)
    return 0


def _bench_rows(config: dict):
    for block in config.get("rows", []):
        family = block["family"]
        solver = block.get("solver", family)
        params = dict(block.get("params", {}))
        oracle_flag = bool(block.get("oracle", False))
        seeds = block.get("seeds", [])
        if isinstance(seeds, int):
            base = int(block.get("seed_base", 0))
            seeds = list(range(base, base + seeds))
        for n, m in block.get("sizes", []):
            for seed in seeds:
                yield family, solver, int(n), int(m), int(seed), params, oracle_flag


def cmd_bench(args) -> int:
    config = json.loads(_read(args.config)) if args.config else {}
    rows = sorted(
        _bench_rows(config), key=lambda r: (r[0], r[2], r[3], r[4], r[1])
    )
    out_rows = []
    max_ratio: dict[str, Fraction] = {}
    for family, solver, n, m, seed, params, want_oracle in rows:
        record = {
            "family": family,
            "solver": solver,
            "n": n,
            "m": m,
            "seed": seed,
            "cost": "",
            "oracle_cost": "",
            "ratio": "",
            "error": "",
        }
        try:
            inst = generators.generate(family, n, m, seed, **params.get("generator", {}))
            ns = argparse.Namespace(
                variant=solver,
                mode=params.get("mode", "exact"),
                swap=int(params.get("swap", 2)),
                epsilon=params.get("epsilon"),
            )
            flow, _, _ = _dispatch_solver(inst, ns)
            cost = evaluate_cost(inst, flow)
            record["cost"] = format_rational(cost)
            if want_oracle:
                opt, _ = oracle.exact_fct(inst, guard=int(params.get("guard", 16)))
                record["oracle_cost"] = format_rational(opt)
                if opt > 0:
                    ratio = cost / opt
                    record["ratio"] = format_rational(ratio)
                    key = f"{family}/{solver}"
                    if key not in max_ratio or ratio > max_ratio[key]:
                        max_ratio[key] = ratio
        except (FctpError, GuardError) as exc:
            record["error"] = str(exc)
        out_rows.append(record)

    fields = ["family", "solver", "n", "m", "seed", "cost", "oracle_cost", "ratio", "error"]
    with open(f"{args.out_prefix}.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        writer.writerows(out_rows)
    with open(f"{args.out_prefix}.jsonl", "w", encoding="utf-8") as handle:
        for record in out_rows:
            handle.write(json.dumps(record) + "\n")
    for key in sorted(max_ratio):
        print(
            json.dumps({"summary": "max_ratio", "solver": key, "ratio": format_rational(max_ratio[key])})
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fctp",
        description="Fixed charge transportation: solvers, oracles, generators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run a variant solver on an instance file")
    p_solve.add_argument("--variant", choices=VARIANTS, required=True)
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--out", help="write the solution file here")
    p_solve.add_argument("--mode", choices=("exact", "ls"), default="exact")
    p_solve.add_argument("--swap", type=int, default=2)
    p_solve.add_argument("--epsilon", help="rational like 1/4")
    p_solve.add_argument("--oracle", action="store_true", help="also run the exact oracle")
    p_solve.add_argument("--guard", type=int, default=16)
    p_solve.add_argument("--timing", action="store_true")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="recheck a solution file against an instance")
    p_verify.add_argument("instance")
    p_verify.add_argument("solution")
    p_verify.set_defaults(func=cmd_verify)

    p_cert = sub.add_parser("certify", help="print an exact certificate")
    p_cert.add_argument("what", choices=("lp65",))
    p_cert.add_argument("--perturb-primal", action="append", metavar="KEY=P/Q")
    p_cert.add_argument("--perturb-dual", action="append", metavar="KEY=P/Q")
    p_cert.set_defaults(func=cmd_certify)

    p_oracle = sub.add_parser("oracle", help="exact optimum by brute force")
    p_oracle.add_argument("--input", required=True)
    p_oracle.add_argument("--out", help="write the optimal solution here")
    p_oracle.add_argument("--guard", type=int, default=16)
    p_oracle.set_defaults(func=cmd_oracle)

    p_gen = sub.add_parser("generate", help="build instances from reductions")
    p_gen.add_argument("--from", choices=("dst", "setcover", "3dm"), required=True)
    p_gen.add_argument("--input", required=True)
    p_gen.add_argument("--out")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--delta", type=int)
    p_gen.add_argument("--bprime", type=int, default=6)
    p_gen.set_defaults(func=cmd_generate)

    p_bench = sub.add_parser("bench", help="ratio tables over seeded families")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--out-prefix", required=True)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (FctpError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
