"""The (6/5 + eps)-approximation for pure uniform fixed charge transportation.

With unit fixed costs and no linear costs, the problem is equivalent to
partitioning sources and sinks into as many balanced sets as possible (a set
is balanced when its supply equals its demand inside the set); a partition
with q parts costs m + n - q.  The solver extracts matched supply/demand
pairs, enumerates balanced sets of size at most k for k in {3, 4, 5}, packs
them (exactly, or by bounded-swap local search), and keeps the best k.

The worst-case ratio of this scheme is certified by a small factor-revealing
LP whose exact optimum is 6/5; :func:`verify_factor_revealing_certificate`
checks the primal and dual solutions in exact rational arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import CertificateError, FctpError, GuardError, VariantError
from .model import FlowSolution, Instance, classify_variant, pure_instance

SOURCE = "source"
SINK = "sink"


@dataclass(frozen=True)
class Element:
    """One ground-set member: a source or sink with its supply/demand."""

    side: str
    index: int
    weight: int

    @property
    def key(self) -> tuple[int, int]:
        return (0 if self.side == SOURCE else 1, self.index)


def source_element(index: int, weight: int) -> Element:
    return Element(SOURCE, index, weight)


def sink_element(index: int, weight: int) -> Element:
    return Element(SINK, index, weight)


@dataclass(frozen=True)
class BalancedSet:
    """A nonempty set of elements whose supply equals its demand, exactly."""

    elements: tuple[Element, ...]

    def __post_init__(self):
        if not self.elements:
            raise FctpError("balanced set must be nonempty")
        if sum(e.weight for e in self.sources) != sum(
            e.weight for e in self.sinks
        ):
            raise FctpError("set is not balanced")

    @property
    def sources(self) -> tuple[Element, ...]:
        return tuple(e for e in self.elements if e.side == SOURCE)

    @property
    def sinks(self) -> tuple[Element, ...]:
        return tuple(e for e in self.elements if e.side == SINK)

    @property
    def size(self) -> int:
        return len(self.elements)


def balanced_set(elements) -> BalancedSet:
    return BalancedSet(elements=tuple(sorted(elements, key=lambda e: e.key)))


@dataclass(frozen=True)
class BalancedPartition:
    """Disjoint balanced sets covering all of S and T; cost = m + n - #parts."""

    parts: tuple[BalancedSet, ...]

    @property
    def cost(self) -> int:
        return sum(p.size for p in self.parts) - len(self.parts)


def validate_partition(inst: Instance, partition: BalancedPartition) -> str | None:
    """Check disjointness, coverage, weights, and per-part balance."""
    seen = set()
    for part in partition.parts:
        for e in part.elements:
            if e.key in seen:
                return f"element {e.key} appears twice"
            seen.add(e.key)
            pool = inst.supplies if e.side == SOURCE else inst.demands
            if not (0 <= e.index < len(pool)) or pool[e.index] != e.weight:
                return f"element {e.key} does not match the instance"
    expected = {(0, i) for i in range(inst.n)} | {(1, j) for j in range(inst.m)}
    if seen != expected:
        return "partition does not cover all sources and sinks"
    return None


@dataclass(frozen=True)
class PackingInstance:
    """k-set packing instance over the residual ground set."""

    ground: tuple[Element, ...]
    family: tuple[BalancedSet, ...]
    k: int


@dataclass(frozen=True)
class LpCertificate:
    primal: dict[str, Fraction]
    dual: dict[str, Fraction]
    value: Fraction


def _require_pfct_u(inst: Instance) -> None:
    tag = classify_variant(inst)
    if not (tag.pure and tag.uniform):
        raise VariantError("requires PFCT-U")


def preprocess_matched_pairs(
    inst: Instance,
) -> tuple[list[BalancedSet], Instance]:
    """Extract {source, sink} pairs with a_i == b_j, smallest value first.

    Putting a matched pair in its own part never changes the optimal
    partition size (the two parts can be swapped back), so the residual
    instance is equivalent and has no i, j with a_i == b_j.  Pair elements
    keep the original instance's indices.
    """
    _require_pfct_u(inst)
    used_src: set[int] = set()
    used_snk: set[int] = set()
    candidates = sorted(
        (inst.supplies[i], i, j)
        for i in range(inst.n)
        for j in range(inst.m)
        if inst.supplies[i] == inst.demands[j]
    )
    pairs = []
    for value, i, j in candidates:
        if i in used_src or j in used_snk:
            continue
        used_src.add(i)
        used_snk.add(j)
        pairs.append(
            balanced_set([source_element(i, value), sink_element(j, value)])
        )
    keep_src = [i for i in range(inst.n) if i not in used_src]
    keep_snk = [j for j in range(inst.m) if j not in used_snk]
    residual = Instance(
        supplies=tuple(inst.supplies[i] for i in keep_src),
        demands=tuple(inst.demands[j] for j in keep_snk),
        fixed=tuple(
            tuple(inst.fixed[i][j] for j in keep_snk) for i in keep_src
        ),
        linear=tuple(
            tuple(inst.linear[i][j] for j in keep_snk) for i in keep_src
        ),
    )
    return pairs, residual


def residual_index_maps(
    inst: Instance, pairs: list[BalancedSet]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Map residual indices back to the original instance's indices."""
    used_src = {e.index for p in pairs for e in p.sources}
    used_snk = {e.index for p in pairs for e in p.sinks}
    return (
        tuple(i for i in range(inst.n) if i not in used_src),
        tuple(j for j in range(inst.m) if j not in used_snk),
    )


def enumerate_balanced_sets(
    inst: Instance, k: int, guard: int = 10**7
) -> PackingInstance:
    """All balanced subsets of size 3..k, in canonical (size, lex) order.

    All-source or all-sink subsets cannot be balanced (weights are positive),
    so every family member mixes both sides.  Size-2 sets are assumed to have
    been removed by :func:`preprocess_matched_pairs`.
    """
    if not 3 <= k <= 6:
        raise FctpError("k must be between 3 and 6")
    ground = tuple(
        [source_element(i, a) for i, a in enumerate(inst.supplies)]
        + [sink_element(j, b) for j, b in enumerate(inst.demands)]
    )
    if len(ground) >= k and comb(len(ground), k) > guard:
        raise GuardError("instance too large for enumeration")
    family = []
    for size in range(3, k + 1):
        for combo in itertools.combinations(ground, size):
            balance = sum(
                e.weight if e.side == SOURCE else -e.weight for e in combo
            )
            if balance == 0:
                family.append(BalancedSet(elements=combo))
    return PackingInstance(ground=ground, family=tuple(family), k=k)


def _element_bit(ground: tuple[Element, ...]) -> dict[tuple[int, int], int]:
    return {e.key: 1 << pos for pos, e in enumerate(ground)}


def _family_masks(pk: PackingInstance) -> list[int]:
    bit = _element_bit(pk.ground)
    masks = []
    for bset in pk.family:
        mask = 0
        for e in bset.elements:
            mask |= bit[e.key]
        masks.append(mask)
    return masks


def local_search_packing(pk: PackingInstance, swap_size: int) -> list[BalancedSet]:
    """Bounded-swap local search: grow a packing until no <=p-for-(<p) swap helps.

    Deterministic first-improvement scans in the canonical family order.
    This replaces the (k+1+eps)/3 packing subroutine from the literature;
    with swap_size p the packing cannot be improved by inserting up to p
    mutually disjoint sets at the price of removing the fewer chosen sets
    they hit.  The packing is kept maximal after every step, which makes
    size-1 improvements pure insertions and lets size-2 improvements be
    found by grouping outsiders by their unique conflicting chosen set.
    """
    if swap_size < 1:
        raise FctpError("swap size must be >= 1")
    masks = _family_masks(pk)
    chosen: list[int] = []
    used = 0

    def extend_maximally() -> None:
        nonlocal used
        for idx in range(len(masks)):
            if idx not in chosen and not masks[idx] & used:
                chosen.append(idx)
                used |= masks[idx]
        chosen.sort()

    def swap(removed: list[int], added) -> None:
        nonlocal used
        for idx in removed:
            chosen.remove(idx)
            used ^= masks[idx]
        for idx in added:
            chosen.append(idx)
            used |= masks[idx]
        extend_maximally()

    extend_maximally()
    improved = True
    while improved:
        improved = False
        # Size-2 swaps: under maximality, an improving pair must consist of
        # two disjoint outsiders that each conflict with the same single
        # chosen set.
        if swap_size >= 2 and not improved:
            by_conflict: dict[int, list[int]] = {}
            for idx in range(len(masks)):
                if idx in chosen:
                    continue
                hits = [c for c in chosen if masks[c] & masks[idx]]
                if len(hits) == 1:
                    by_conflict.setdefault(hits[0], []).append(idx)
            for conflict in sorted(by_conflict):
                group = by_conflict[conflict]
                found = None
                for a_pos, a in enumerate(group):
                    for b in group[a_pos + 1 :]:
                        if not masks[a] & masks[b]:
                            found = (a, b)
                            break
                    if found:
                        break
                if found:
                    swap([conflict], found)
                    improved = True
                    break
        # Generic fallback for larger swaps; family sizes stay small when
        # anyone asks for p >= 3.
        if swap_size >= 3 and not improved:
            outside = [idx for idx in range(len(masks)) if idx not in chosen]
            for s in range(3, swap_size + 1):
                for combo in itertools.combinations(outside, s):
                    union = 0
                    disjoint = True
                    for idx in combo:
                        if masks[idx] & union:
                            disjoint = False
                            break
                        union |= masks[idx]
                    if not disjoint:
                        continue
                    conflicts = [c for c in chosen if masks[c] & union]
                    if len(conflicts) < s:
                        swap(conflicts, combo)
                        improved = True
                        break
                if improved:
                    break
    return [pk.family[idx] for idx in chosen]


def exact_packing(pk: PackingInstance) -> list[BalancedSet]:
    """Maximum-cardinality disjoint subfamily, by subset DP or branch and bound."""
    masks = _family_masks(pk)
    if len(pk.ground) <= 20:
        return [pk.family[idx] for idx in _packing_dp(masks, len(pk.ground))]
    if len(pk.family) <= 25:
        return [pk.family[idx] for idx in _packing_bnb(masks)]
    raise GuardError("packing instance too large for exact mode")


def _packing_dp(masks: list[int], ground_size: int) -> list[int]:
    by_low: dict[int, list[int]] = {}
    for idx, mask in enumerate(masks):
        low = mask & -mask
        by_low.setdefault(low, []).append(idx)
    memo: dict[int, tuple[int, int | None]] = {0: (0, None)}

    def best(avail: int) -> int:
        if avail in memo:
            return memo[avail][0]
        low = avail & -avail
        value, action = best(avail ^ low), None
        for idx in by_low.get(low, []):
            if masks[idx] & ~avail:
                continue
            cand = 1 + best(avail ^ masks[idx])
            if cand > value:
                value, action = cand, idx
        memo[avail] = (value, action)
        return value

    avail = (1 << ground_size) - 1
    best(avail)
    chosen = []
    while avail:
        value, action = memo[avail]
        if action is None:
            avail ^= avail & -avail
        else:
            chosen.append(action)
            avail ^= masks[action]
    return sorted(chosen)


def _packing_bnb(masks: list[int]) -> list[int]:
    n = len(masks)
    best_set: list[int] = []

    def recurse(idx: int, used: int, chosen: list[int]):
        nonlocal best_set
        if len(chosen) + (n - idx) <= len(best_set):
            return
        if idx == n:
            if len(chosen) > len(best_set):
                best_set = list(chosen)
            return
        if not masks[idx] & used:
            chosen.append(idx)
            recurse(idx + 1, used | masks[idx], chosen)
            chosen.pop()
        recurse(idx + 1, used, chosen)

    recurse(0, 0, [])
    return sorted(best_set)


def _two_pointer_fill(part: BalancedSet):
    """Route supplies to demands inside one part by a two-pointer sweep.

    Returns [(sub_part, edges)] components: when supply and demand run out
    simultaneously mid-sweep the part splits, which only ever adds parts (and
    so lowers the cost).  Packed sets of size <= 5 from a pair-free residual
    never split; only the remainder part can.
    """
    sources = sorted(part.sources, key=lambda e: e.index)
    sinks = sorted(part.sinks, key=lambda e: e.index)
    components = []
    comp_srcs: list[Element] = []
    comp_snks: list[Element] = []
    edges: list[tuple[int, int, int]] = []
    si, ti = 0, 0
    rem_a, rem_b = sources[0].weight, sinks[0].weight
    comp_srcs.append(sources[0])
    comp_snks.append(sinks[0])
    while True:
        amount = min(rem_a, rem_b)
        edges.append((sources[si].index, sinks[ti].index, amount))
        rem_a -= amount
        rem_b -= amount
        done_src = rem_a == 0
        done_snk = rem_b == 0
        if done_src and done_snk:
            components.append((balanced_set(comp_srcs + comp_snks), edges))
            comp_srcs, comp_snks, edges = [], [], []
            si += 1
            ti += 1
            if si == len(sources):
                break
            rem_a, rem_b = sources[si].weight, sinks[ti].weight
            comp_srcs.append(sources[si])
            comp_snks.append(sinks[ti])
        elif done_src:
            si += 1
            rem_a = sources[si].weight
            comp_srcs.append(sources[si])
        else:
            ti += 1
            rem_b = sinks[ti].weight
            comp_snks.append(sinks[ti])
    return components


def flow_within_balanced_sets(partition: BalancedPartition) -> FlowSolution:
    """Greedy within-part routing; edge count is sum(|part| - 1) per part."""
    entries: dict[tuple[int, int], Fraction] = {}
    for part in partition.parts:
        for _, edges in _two_pointer_fill(part):
            for i, j, amount in edges:
                entries[(i, j)] = Fraction(amount)
    return FlowSolution(entries=entries)


def solve_pfct_u(
    inst: Instance, mode: str = "exact", swap_size: int = 2, max_k: int = 5
) -> tuple[BalancedPartition, FlowSolution]:
    """Best balanced partition over k in {3..max_k}, plus its routed flow.

    mode "exact" packs by brute force (keeps the full 6/5 guarantee at desk
    scale); mode "ls" uses bounded-swap local search with the given swap
    size.  The remainder of the residual after packing forms one extra part
    (split further if the routing disconnects it; both only lower the cost).
    """
    if mode not in ("exact", "ls"):
        raise FctpError(f"unknown mode {mode!r}")
    pairs, residual = preprocess_matched_pairs(inst)
    src_map, snk_map = residual_index_maps(inst, pairs)

    best_parts: list[BalancedSet] | None = None
    if residual.n:
        for k in range(3, max_k + 1):
            pk = enumerate_balanced_sets(residual, k)
            if mode == "exact":
                chosen = exact_packing(pk)
            else:
                chosen = local_search_packing(pk, swap_size)
            taken = {e.key for bset in chosen for e in bset.elements}
            leftover = [e for e in pk.ground if e.key not in taken]
            parts = list(chosen)
            if leftover:
                parts.append(balanced_set(leftover))
            if best_parts is None or len(parts) > len(best_parts):
                best_parts = parts
    residual_parts = best_parts or []

    def remap(bset: BalancedSet) -> BalancedSet:
        return balanced_set(
            Element(
                e.side,
                src_map[e.index] if e.side == SOURCE else snk_map[e.index],
                e.weight,
            )
            for e in bset.elements
        )

    final_parts: list[BalancedSet] = list(pairs)
    entries: dict[tuple[int, int], Fraction] = {}
    for part in map(remap, residual_parts):
        for sub_part, edges in _two_pointer_fill(part):
            final_parts.append(sub_part)
            for i, j, amount in edges:
                entries[(i, j)] = Fraction(amount)
    for pair in pairs:
        for _, edges in _two_pointer_fill(pair):
            for i, j, amount in edges:
                entries[(i, j)] = Fraction(amount)
    partition = BalancedPartition(parts=tuple(final_parts))
    return partition, FlowSolution(entries=entries)


# ---------------------------------------------------------------------------
# Factor-revealing LP certificate.

_PRIMAL = {
    "x3": Fraction(4, 15),
    "x4": Fraction(1, 15),
    "x5": Fraction(1, 15),
    "x6": Fraction(0),
    "z": Fraction(7, 5),
    "r": Fraction(6, 5),
}
_DUAL = {
    "alpha": Fraction(6, 5),
    "beta": Fraction(1, 5),
    "y3": Fraction(4, 15),
    "y4": Fraction(1, 3),
    "y5": Fraction(2, 5),
}
_VALUE = Fraction(6, 5)


def verify_factor_revealing_certificate(
    primal: dict | None = None, dual: dict | None = None
) -> LpCertificate:
    """Exact primal/dual certificate that the factor-revealing LP equals 6/5.

    The LP maximizes r subject to
        (2)  z - (x3 + x4 + x5 + x6)  = 1
        (3)  3 x3 + 4 x4 + 5 x5 + 6 x6 - z <= 0
        (4)  r - (z - 3/4 x3) <= 0
        (5)  r - (z - 3/5 (x3 + x4)) <= 0
        (6)  r - (z - 1/2 (x3 + x4 + x5)) <= 0
        (7)  x3, x4, x5, x6, z >= 0
    The dual argument combines (4), (5), (6) with weights y3, y4, y5 summing
    to one, then rewrites the result as alpha * (2) - beta * (3) <= alpha.
    Custom primal/dual values may be passed in to exercise the failure paths;
    every violated check is reported.
    """
    p = dict(_PRIMAL)
    p.update(primal or {})
    d = dict(_DUAL)
    d.update(dual or {})
    p = {key: Fraction(value) for key, value in p.items()}
    d = {key: Fraction(value) for key, value in d.items()}
    x3, x4, x5, x6, z, r = (p[key] for key in ("x3", "x4", "x5", "x6", "z", "r"))
    alpha, beta, y3, y4, y5 = (
        d[key] for key in ("alpha", "beta", "y3", "y4", "y5")
    )
    problems: list[str] = []

    if z - (x3 + x4 + x5 + x6) != 1:
        problems.append("primal constraint (2): z - (x3+x4+x5+x6) != 1")
    if 3 * x3 + 4 * x4 + 5 * x5 + 6 * x6 - z > 0:
        problems.append("primal constraint (3): (3x3+4x4+5x5+6x6) - z > 0")
    if r - (z - Fraction(3, 4) * x3) > 0:
        problems.append("primal constraint (4): r > z - 3/4 x3")
    if r - (z - Fraction(3, 5) * (x3 + x4)) > 0:
        problems.append("primal constraint (5): r > z - 3/5 (x3+x4)")
    if r - (z - Fraction(1, 2) * (x3 + x4 + x5)) > 0:
        problems.append("primal constraint (6): r > z - 1/2 (x3+x4+x5)")
    if any(value < 0 for value in (x3, x4, x5, x6, z)):
        problems.append("primal constraint (7): nonnegativity violated")

    # Dual chain: r <= y3 (z - 3/4 x3) + y4 (z - 3/5 (x3+x4))
    #               + y5 (z - 1/2 (x3+x4+x5)) needs y >= 0 summing to 1.
    if any(value < 0 for value in (y3, y4, y5, beta)):
        problems.append("dual multipliers must be nonnegative")
    if y3 + y4 + y5 != 1:
        problems.append("dual chain: y3 + y4 + y5 != 1")
    # The combined inequality must equal alpha*(2) - beta*(3), coefficient
    # by coefficient in (z, x3, x4, x5, x6).
    coeff_checks = [
        ("z", y3 + y4 + y5, alpha - beta),
        (
            "x3",
            -(Fraction(3, 4) * y3 + Fraction(3, 5) * y4 + Fraction(1, 2) * y5),
            -alpha + 3 * beta,
        ),
        ("x4", -(Fraction(3, 5) * y4 + Fraction(1, 2) * y5), -alpha + 4 * beta),
        ("x5", -Fraction(1, 2) * y5, -alpha + 5 * beta),
        ("x6", Fraction(0), -alpha + 6 * beta),
    ]
    for name, lhs, rhs in coeff_checks:
        if lhs != rhs:
            problems.append(f"dual chain: {name} coefficient {lhs} != {rhs}")
    if alpha != _VALUE:
        problems.append(f"dual bound is {alpha}, expected {_VALUE}")
    if r != _VALUE:
        problems.append(f"primal objective is {r}, expected {_VALUE}")
    if problems:
        raise CertificateError("; ".join(problems))
    return LpCertificate(primal=p, dual=d, value=_VALUE)


def uniform_pure_instance(supplies, demands) -> Instance:
    """PFCT-U instance scaffold: f == 1, c == 0."""
    supplies = tuple(supplies)
    demands = tuple(demands)
    ones = tuple(tuple(Fraction(1) for _ in demands) for _ in supplies)
    return pure_instance(supplies, demands, ones)
