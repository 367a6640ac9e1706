"""Core data model: instances, flow solutions, variant tags, and text formats.

All cost quantities are exact rationals (``fractions.Fraction``); floating
point never enters a correctness-critical path.  Linear costs may carry the
distinguished marker :data:`INF` for forbidden edges; fixed costs are always
finite.  Instances and solutions are immutable values, so every operation in
this package is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FctpError, ParseError


class _Infinity:
    """Forbidden-edge marker, permitted only in linear costs.

    A singleton that compares greater than every rational and supports no
    arithmetic, so accidental use in a cost sum fails loudly.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()

# A linear cost: a finite nonnegative Fraction or the INF marker.
Cost = Fraction | _Infinity


def is_inf(value) -> bool:
    return value is INF


def rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` into a Fraction (canonical form is automatic)."""
    return Fraction(text)


def format_rational(value) -> str:
    """Render a cost as ``p``, ``p/q``, or ``inf``; inverse of parsing."""
    if value is INF:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Instance:
    """A bipartite fixed charge transportation instance.

    ``supplies`` has length n (sources), ``demands`` length m (sinks);
    ``fixed`` and ``linear`` are n x m cost matrices.  Construction only
    checks matrix shapes; use :func:`validate_instance` for the full
    invariant report.
    """

    supplies: tuple[int, ...]
    demands: tuple[int, ...]
    fixed: tuple[tuple[Fraction, ...], ...]
    linear: tuple[tuple[Cost, ...], ...]

    def __post_init__(self):
        n, m = len(self.supplies), len(self.demands)
        if len(self.fixed) != n or len(self.linear) != n:
            raise ValueError("cost matrices must have one row per source")
        if any(len(row) != m for row in self.fixed) or any(
            len(row) != m for row in self.linear
        ):
            raise ValueError("cost matrices must have one column per sink")

    @property
    def n(self) -> int:
        return len(self.supplies)

    @property
    def m(self) -> int:
        return len(self.demands)

    def edges(self):
        """All (i, j) pairs with a usable (finite linear cost) edge."""
        for i in range(self.n):
            for j in range(self.m):
                if self.linear[i][j] is not INF:
                    yield (i, j)


def make_instance(supplies, demands, fixed, linear) -> Instance:
    """Build an Instance, coercing plain ints to Fractions."""

    def cost(x):
        return INF if x is INF else Fraction(x)

    return Instance(
        supplies=tuple(int(a) for a in supplies),
        demands=tuple(int(b) for b in demands),
        fixed=tuple(tuple(Fraction(x) for x in row) for row in fixed),
        linear=tuple(tuple(cost(x) for x in row) for row in linear),
    )


def pure_instance(supplies, demands, fixed) -> Instance:
    """Instance with all linear costs zero (the PFCT family)."""
    supplies = tuple(supplies)
    demands = tuple(demands)
    zero = tuple(tuple(Fraction(0) for _ in demands) for _ in supplies)
    return make_instance(supplies, demands, fixed, zero)


def validate_instance(inst: Instance) -> str | None:
    """Return None if all instance invariants hold, else the first violation.

    Indices in messages are 1-based to match the file format.
    """
    if inst.n < 1:
        return "n must be >= 1"
    if inst.m < 1:
        return "m must be >= 1"
    for i, a in enumerate(inst.supplies):
        if not isinstance(a, int) or a <= 0:
            return f"a_{i + 1} not positive"
    for j, b in enumerate(inst.demands):
        if not isinstance(b, int) or b <= 0:
            return f"b_{j + 1} not positive"
    for i, row in enumerate(inst.fixed):
        for j, f in enumerate(row):
            if f is INF or not isinstance(f, Fraction):
                return f"f_{i + 1},{j + 1} must be a finite rational"
            if f < 0:
                return f"f_{i + 1},{j + 1} negative"
    for i, row in enumerate(inst.linear):
        for j, c in enumerate(row):
            if c is INF:
                continue
            if not isinstance(c, Fraction):
                return f"c_{i + 1},{j + 1} must be a rational or inf"
            if c < 0:
                return f"c_{i + 1},{j + 1} negative"
    if sum(inst.supplies) != sum(inst.demands):
        return "sum(a) != sum(b)"
    return None


def check_instance(inst: Instance) -> None:
    """Raise FctpError when validate_instance reports a violation."""
    report = validate_instance(inst)
    if report is not None:
        raise FctpError(f"invalid instance: {report}")


@dataclass(frozen=True)
class VariantTag:
    """Which restricted variants an instance belongs to.

    ``pure_modulo_forbidden`` marks instances whose linear costs are all 0 or
    INF; reductions produce these to express missing edges in an otherwise
    pure instance.
    """

    pure: bool
    sink_independent: bool
    uniform: bool
    pure_modulo_forbidden: bool


def classify_variant(inst: Instance) -> VariantTag:
    """Compute variant tags exactly from the cost matrices."""
    pure = all(c == 0 for row in inst.linear for c in row)
    pure_mod = all(c is INF or c == 0 for row in inst.linear for c in row)
    sink_independent = all(
        all(f == row[0] for f in row) for row in inst.fixed
    )
    uniform = all(f == 1 for row in inst.fixed for f in row)
    return VariantTag(
        pure=pure,
        sink_independent=sink_independent,
        uniform=uniform,
        pure_modulo_forbidden=pure_mod,
    )


@dataclass(frozen=True)
class FlowSolution:
    """Sparse nonnegative flow: (source, sink) -> positive Fraction.

    ``relaxation`` is the bicriteria tag: when set to eps, column sums may lie
    anywhere in [(1-eps) b_j, (1+eps) b_j] instead of hitting b_j exactly.
    """

    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    relaxation: Fraction | None = None

    def support(self):
        return sorted(self.entries)

    def row_sums(self, n: int) -> list[Fraction]:
        sums = [Fraction(0)] * n
        for (i, _), x in self.entries.items():
            sums[i] += x
        return sums

    def col_sums(self, m: int) -> list[Fraction]:
        sums = [Fraction(0)] * m
        for (_, j), x in self.entries.items():
            sums[j] += x
        return sums


def make_flow(entries, relaxation=None) -> FlowSolution:
    """Build a FlowSolution, dropping explicit zeros and coercing values."""
    flows = {}
    for (i, j), x in dict(entries).items():
        x = Fraction(x)
        if x < 0:
            raise FctpError(f"negative flow on edge ({i + 1}, {j + 1})")
        if x > 0:
            flows[(int(i), int(j))] = x
    tag = None if relaxation is None else Fraction(relaxation)
    return FlowSolution(entries=flows, relaxation=tag)


def validate_solution(inst: Instance, sol: FlowSolution) -> str | None:
    """Exact marginal check; returns None or the first violation.

    Relaxation-tagged solutions keep exact row sums but only need column sums
    inside the (1 +/- eps) band.
    """
    for (i, j), x in sol.entries.items():
        if not (0 <= i < inst.n and 0 <= j < inst.m):
            return f"edge ({i + 1}, {j + 1}) out of range"
        if x <= 0:
            return f"flow on edge ({i + 1}, {j + 1}) not positive"
    rows = sol.row_sums(inst.n)
    for i in range(inst.n):
        if rows[i] != inst.supplies[i]:
            return f"row sum of source {i + 1} is {rows[i]}, expected {inst.supplies[i]}"
    cols = sol.col_sums(inst.m)
    for j in range(inst.m):
        b = inst.demands[j]
        if sol.relaxation is None:
            if cols[j] != b:
                return f"column sum of sink {j + 1} is {cols[j]}, expected {b}"
        else:
            eps = sol.relaxation
            if not ((1 - eps) * b <= cols[j] <= (1 + eps) * b):
                return (
                    f"column sum of sink {j + 1} is {cols[j]}, "
                    f"outside [(1-{eps})*{b}, (1+{eps})*{b}]"
                )
    return None


def evaluate_cost(inst: Instance, sol: FlowSolution) -> Fraction:
    """Total cost sum(f_ij + c_ij * x_ij) over the support, exact.

    Raises FctpError when the support touches a forbidden (c = inf) edge.
    """
    total = Fraction(0)
    for (i, j), x in sorted(sol.entries.items()):
        c = inst.linear[i][j]
        if c is INF:
            raise FctpError(f"infeasible edge used: ({i + 1}, {j + 1})")
        total += inst.fixed[i][j] + c * x
    return total


# ---------------------------------------------------------------------------
# Text formats (see README for the grammar).


def serialize_instance(inst: Instance) -> str:
    lines = ["FCT v1", f"{inst.n} {inst.m}"]
    lines.append(" ".join(str(a) for a in inst.supplies))
    lines.append(" ".join(str(b) for b in inst.demands))
    for row in inst.fixed:
        lines.append(" ".join(format_rational(f) for f in row))
    for row in inst.linear:
        lines.append(" ".join(format_rational(c) for c in row))
    return "\n".join(lines) + "\n"


def _fields(lines: list[str], lineno: int, expected: int, what: str) -> list[str]:
    if lineno > len(lines):
        raise ParseError(lineno, f"missing {what} line")
    parts = lines[lineno - 1].split()
    if len(parts) != expected:
        raise ParseError(lineno, f"expected {expected} {what} fields, got {len(parts)}")
    return parts


def _parse_positive_int(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {token!r}") from None
    return value


def _parse_cost(token: str, lineno: int, allow_inf: bool) -> Cost:
    if token == "inf":
        if not allow_inf:
            raise ParseError(lineno, "Infinity not allowed in f")
        return INF
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"malformed rational {token!r}") from None
    if value < 0:
        raise ParseError(lineno, f"negative cost {token!r}")
    return value


def parse_instance(text: str) -> Instance:
    """Parse the FCT v1 format; raises ParseError with a 1-based line number."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != "FCT v1":
        raise ParseError(1, "expected header 'FCT v1'")
    n_m = _fields(lines, 2, 2, "dimension")
    n = _parse_positive_int(n_m[0], 2, "n")
    m = _parse_positive_int(n_m[1], 2, "m")
    if n < 1 or m < 1:
        raise ParseError(2, "n and m must be >= 1")
    supplies = tuple(
        _parse_positive_int(tok, 3, "supply") for tok in _fields(lines, 3, n, "supply")
    )
    demands = tuple(
        _parse_positive_int(tok, 4, "demand") for tok in _fields(lines, 4, m, "demand")
    )
    fixed = []
    for i in range(n):
        lineno = 5 + i
        row = _fields(lines, lineno, m, "fixed cost")
        fixed.append(tuple(_parse_cost(tok, lineno, allow_inf=False) for tok in row))
    linear = []
    for i in range(n):
        lineno = 5 + n + i
        row = _fields(lines, lineno, m, "linear cost")
        linear.append(tuple(_parse_cost(tok, lineno, allow_inf=True) for tok in row))
    if len(lines) > 4 + 2 * n:
        raise ParseError(5 + 2 * n, "trailing content after cost matrices")
    return Instance(
        supplies=supplies, demands=demands, fixed=tuple(fixed), linear=tuple(linear)
    )


def serialize_solution(sol: FlowSolution) -> str:
    lines = ["SOL v1"]
    if sol.relaxation is not None:
        lines.append(f"relaxed {format_rational(sol.relaxation)}")
    for (i, j) in sorted(sol.entries):
        lines.append(f"{i + 1} {j + 1} {format_rational(sol.entries[(i, j)])}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> FlowSolution:
    """Parse the SOL v1 format; raises ParseError with a 1-based line number."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != "SOL v1":
        raise ParseError(1, "expected header 'SOL v1'")
    relaxation = None
    start = 1
    if len(lines) > 1 and lines[1].startswith("relaxed"):
        parts = lines[1].split()
        if len(parts) != 2:
            raise ParseError(2, "expected 'relaxed p/q'")
        relaxation = _parse_cost(parts[1], 2, allow_inf=False)
        start = 2
    entries: dict[tuple[int, int], Fraction] = {}
    for offset, line in enumerate(lines[start:]):
        lineno = start + offset + 1
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(lineno, f"expected 'i j flow', got {line!r}")
        i = _parse_positive_int(parts[0], lineno, "source index")
        j = _parse_positive_int(parts[1], lineno, "sink index")
        if i < 1 or j < 1:
            raise ParseError(lineno, "indices are 1-based")
        x = _parse_cost(parts[2], lineno, allow_inf=False)
        if x <= 0:
            raise ParseError(lineno, "flow must be positive")
        if (i - 1, j - 1) in entries:
            raise ParseError(lineno, f"duplicate edge ({i}, {j})")
        entries[(i - 1, j - 1)] = x
    return FlowSolution(entries=entries, relaxation=relaxation)
