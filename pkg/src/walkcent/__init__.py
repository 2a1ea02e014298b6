"""Random-walk hitting-time centrality on weighted graphs.

The package measures how central a vertex (or vertex group) is by the
stationary-averaged hitting time of a random walk: the walk centrality
of a vertex, the Kemeny constant of the whole graph, and the group walk
centrality of a set of absorbing vertices.  Exact dense engines,
sketch-based near-linear approximations, greedy group selection with
approximation guarantees, self-similar model generators with
closed-form Kemeny constants, a Monte Carlo walk simulator and
edge-list IO are all exposed both as a library and through the
``walkcent`` command-line tool.
"""

__version__ = "0.1.0"

from .edgelist import (EdgeListFormat, open_output, parse_edge_list,
                       write_edge_list)
from .errors import (ConvergenceError, ResourceLimitError, TruncationError,
                     ValidationError, WalkcentError)
from .exact import (DENSE_CAP, CentralityReport, GwcValue, HittingStructure,
                    absorption_probabilities, group_detour_time, gwc_exact,
                    hitting_times, marginal_gain_exact, pseudoinverse_dense,
                    resistance_distance, walk_centrality_exact,
                    walk_centrality_spectral)
from .graph import (GroundedSystem, IncidenceDecomposition,
                    StationaryDistribution, WeightedGraph, apply_grounded,
                    apply_laplacian, build_graph, grounded_system,
                    incidence_decomposition, is_connected,
                    largest_connected_component, stationary)
from .greedy import (GreedyTrace, OptimizerConfig, approx_min_gwc,
                     baseline_select, brute_force_min_gwc, deter_min_gwc,
                     pagerank)
from .models import (MAX_VERTICES, ModelSpec, cayley_tree,
                     closed_form_kemeny, closed_form_kemeny_exact,
                     extended_hanoi, generate_model, hanoi, koch,
                     pseudofractal)
from .simulate import (EstimateWithError, default_max_steps, estimate_gwc,
                       simulate_hitting)
from .sketch import (ApproxCentralityResult, ApproxGainResult, GainMeta,
                     SketchMeta, SolveSummary, approx_delta, approx_gwc,
                     approx_hk, delta_row_count, delta_strict_tolerances,
                     hk_row_count, hk_strict_delta, mean_relative_error,
                     rademacher_projection)
from .solver import (SolveReport, SolverOptions, solve_grounded,
                     solve_grounded_many, solve_laplacian,
                     solve_laplacian_many)

__all__ = [
    "__version__",
    # graph
    "WeightedGraph", "StationaryDistribution", "GroundedSystem",
    "IncidenceDecomposition", "build_graph", "stationary", "is_connected",
    "largest_connected_component", "apply_laplacian", "grounded_system",
    "apply_grounded", "incidence_decomposition",
    # errors
    "WalkcentError", "ValidationError", "ConvergenceError",
    "TruncationError", "ResourceLimitError",
    # solver
    "SolverOptions", "SolveReport", "solve_laplacian",
    "solve_laplacian_many", "solve_grounded", "solve_grounded_many",
    # exact
    "DENSE_CAP", "CentralityReport", "HittingStructure", "GwcValue",
    "pseudoinverse_dense", "walk_centrality_exact",
    "walk_centrality_spectral", "hitting_times", "resistance_distance",
    "gwc_exact", "absorption_probabilities", "group_detour_time",
    "marginal_gain_exact",
    # sketch
    "SketchMeta", "GainMeta", "SolveSummary", "ApproxCentralityResult",
    "ApproxGainResult", "rademacher_projection", "hk_row_count",
    "hk_strict_delta", "approx_hk", "approx_gwc", "delta_row_count",
    "delta_strict_tolerances", "approx_delta", "mean_relative_error",
    # greedy
    "GreedyTrace", "OptimizerConfig", "deter_min_gwc", "approx_min_gwc",
    "brute_force_min_gwc", "baseline_select", "pagerank",
    # models
    "MAX_VERTICES", "ModelSpec", "generate_model", "pseudofractal", "koch",
    "cayley_tree", "hanoi", "extended_hanoi", "closed_form_kemeny",
    "closed_form_kemeny_exact",
    # simulate
    "EstimateWithError", "default_max_steps", "simulate_hitting",
    "estimate_gwc",
    # edgelist
    "EdgeListFormat", "parse_edge_list", "write_edge_list", "open_output",
]
