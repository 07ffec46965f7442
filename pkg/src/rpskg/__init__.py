"""Stochastic Kronecker graph generators (SKG, NSKG, relative-prime SKG) and analysis tools."""

__version__ = "0.1.0"

from .analysis import (
    ComponentSummary,
    DegreeHistogram,
    DiscretePmf,
    component_summary,
    connected_probability,
    degree_histogram,
    expected_isolated,
    oscillation_score,
    theoretical_degree_pmf,
    tv_distance,
    variance_isolated,
)
from .generators import (
    EdgeList,
    GenConfig,
    NoiseRecord,
    generate,
    generate_bernoulli,
    generate_chunglu,
    generate_nskg,
    generate_rpskg,
    generate_skg,
)
from .rng import per_edge_randomness
from .seeds import (
    GRAPH500,
    Rect,
    SkgParams,
    StochasticSeed,
    kgd_rectangle_mass,
    sample_3x1_from_2x1,
    sample_3x3_from_2x2,
    sample_mxn,
    skg_params,
    validate_and_normalize,
)
from .slices import (
    SliceId,
    slice_of_vertex,
    slice_probability_binary,
    slice_probability_ternary,
)
from .thresholds import (
    ThresholdConfig,
    ThresholdReport,
    brute_force_graph_stats,
    connectivity_threshold_experiment,
    identifiability_separation_probe,
    isolated_threshold_experiment,
)
