"""Randomized equitable colorings of n-uniform hypergraphs.

The package builds equitable r-colorings two ways: uniform draws over
balanced colorings for small vertex counts, and a two-stage interval
coloring with rebalancing for larger ones.  Failures of the second route
are certified by chains of edges linked through deflected vertices.  Exact
brute-force oracles and Monte Carlo estimators cross-check every quantity
the construction relies on.
"""

from .chains import (
    COMPLEX,
    IMPROPER,
    ORDERED,
    ChainInvalid,
    ChainLink,
    ChainRecord,
    DangerousEdge,
    Deflected,
    MonoEdge,
    analytic_bound,
    chain_event_occurs,
    chain_probability_bound,
    dangerous_count_bound,
    enumerate_chain_candidates,
    expected_deflections_bound,
    extract_chain,
    is_conflicting_pair,
    mono_edge_probability_bound,
    validate_chain,
)
from .hypergraph import (
    BudgetExceeded,
    Coloring,
    FormatError,
    Hypergraph,
    ThresholdBound,
    brute_force_equitable,
    class_targets,
    edge_threshold,
    generate_random,
    is_equitable,
    is_proper,
    parse_hypergraph,
)
from .intervals import (
    LARGE,
    SMALL,
    InitialColoring,
    IntervalPartition,
    MonoProbability,
    Subinterval,
    WeightAssignment,
    balanced_mono_prob,
    build_partition,
    choose_p,
    run_interval_coloring,
    sample_balanced_coloring,
    sample_weights,
)
from .montecarlo import (
    ChainEventSpec,
    Comparison,
    EstimateReport,
    MonoEdgeExists,
    exact_c0_event_prob,
    mc_estimate,
)
from .rebalance import (
    RebalancePlan,
    RegimeViolation,
    apply_recolor,
    build_rebalance_plan,
    compute_p_tilde,
    compute_q,
    excess_shortage,
    find_dangerous_edges,
    sample_candidate_sets,
    select_recolor_sets,
)
from .solver import (
    SolveConfig,
    SolveReport,
    greedy_repair,
    solve_equitable,
)

__version__ = "0.1.0"
