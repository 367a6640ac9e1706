"""Exact-rational solvers and generators for fixed charge transportation.

Variants: FCT (fixed plus linear costs), PFCT (pure: no linear costs), and
the -S (sink-independent fixed costs) / -U (uniform fixed costs)
restrictions of each.  See README for the file formats and the CLI.
"""

from .bicriteria import round_tree, solve_bicriteria
from .errors import (
    CertificateError,
    FctpError,
    GuardError,
    InfeasibleError,
    ParseError,
    VariantError,
)
from .fct_u import solve_fct_u
from .model import (
    INF,
    FlowSolution,
    Instance,
    VariantTag,
    classify_variant,
    evaluate_cost,
    is_inf,
    make_flow,
    make_instance,
    parse_instance,
    parse_solution,
    pure_instance,
    serialize_instance,
    serialize_solution,
    validate_instance,
    validate_solution,
)
from .pfct_s import (
    greedy_solve,
    greedy_upper_bound,
    lp_cost,
    no_crossing_check,
    opt_lower_bound,
    pi,
    sorted_view,
)
from .pfct_u import (
    BalancedPartition,
    BalancedSet,
    Element,
    LpCertificate,
    PackingInstance,
    enumerate_balanced_sets,
    exact_packing,
    flow_within_balanced_sets,
    local_search_packing,
    preprocess_matched_pairs,
    solve_pfct_u,
    uniform_pure_instance,
    verify_factor_revealing_certificate,
)
from .ptas import ptas_solve
from .transport import cancel_cycles, solve_transportation

__version__ = "0.1.0"
