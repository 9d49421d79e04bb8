"""Generating-function subgraph counts in random graphs and degree-constrained multigraphs."""

from .graphs import (
    BoundsExceeded,
    GraphStats,
    LabeledGraph,
    LabeledMultigraph,
    automorphism_count,
    cycle_graph,
    complete_graph,
    enumerate_graphs,
    enumerate_multigraphs,
    essential_density,
    graph_stats,
    is_strictly_balanced,
    multigraph_cycle,
    named_pattern,
    parse_graph,
    format_graph,
    path_graph,
    subgraph_count,
)
from .series import DegreeMarkedGF, MarkedTerm, TruncSeries, TruncationError, binom_power
from .patchwork import PatchworkTable, build_table, disjoint_approx_gf, patchwork_gf, pattern_gf
from .census import (
    CensusResult,
    HypothesisError,
    RegimeSpec,
    aas_absence_threshold,
    distinguished_count_asymptotic,
    distinguished_count_exact,
    expected_count,
    poisson_lambda_gnm,
    poisson_pmf,
    sg_exact,
)
from .degrees import (
    ChiSolution,
    DegreeSet,
    InfeasibleParameters,
    cycle_lambdas,
    distinguished_dc_asymptotic,
    distinguished_dc_exact,
    expected_count_dc,
    is_aas_absent,
    mg_count,
    pattern_marked_gf,
    poisson_lambda_dc,
    simple_graph_count_estimate,
    single_edge_gf,
    solve_chi,
)

__version__ = "0.1.0"
