"""Strong structural observability and minimal sensor placement for networked systems."""

from .centrality import PageRankConfig, pagerank, pagerank_cost, state_graph
from .colorability import (
    ColoringState,
    ObservabilityVerdict,
    build_abar,
    check_observability,
    color,
    combine_m,
    is_colorable,
    output_pattern,
)
from .patterns import (
    DirectedGraph,
    PatternError,
    PatternMatrix,
    Symbol,
    adjacency_and_incidence,
    degree_costs,
    graph_of,
    pattern_from_graph,
    pattern_membership,
)
from .placement import (
    CostTable,
    PlacementResult,
    brute_force_minimum,
    compute_costs,
    group_by_cost,
    normalize,
    place_sensors,
    read_costs_csv,
)
from .verify import RealizationSampler, cross_validate, kalman_rank_observable, sample_realization
from .wdn import (
    HydraulicParams,
    NetworkModel,
    OperatingPoint,
    derive_output_pattern,
    derive_wdn_pattern,
    ewc_rhs,
    linearize,
    mass_spring_pattern,
    rlc_pattern,
)

__version__ = "0.1.0"
