"""Delayed causal network inference from multivariate time series using
ordinal-pattern conditional entropies, with benchmark simulators and an
evaluation harness."""

__version__ = "0.1.0"

from .causal import (
    CausalNetwork,
    Edge,
    NeighborSets,
    bivariate_network,
    epsilon_test,
    infer_network,
    minimal_conditioning_set,
    neighbor_sets,
)
from .entropy import (
    CETensor,
    ConditioningSet,
    DelayGrid,
    ce_tensor,
    co_occurrence_entropy,
    conditional_entropy_given_set,
    lagged_joint_counts,
    threshold,
)
from .evaluate import ConfusionCounts, Metrics, metrics, score, sweep, windowed_analysis
from .ordinal import (
    EmbeddingParams,
    MultivariateSeries,
    PatternMatrix,
    build_moptn,
    decimate,
    embed,
    encode_pattern,
    encode_series,
    transition_network,
)
from .simulate import (
    GroundTruth,
    NmmConfig,
    add_observation_noise,
    reproduction_nmm_config,
    simulate_ar,
    simulate_lorenz_chain,
    simulate_nmm,
)

__all__ = [
    "CausalNetwork",
    "CETensor",
    "ConditioningSet",
    "ConfusionCounts",
    "DelayGrid",
    "Edge",
    "EmbeddingParams",
    "GroundTruth",
    "Metrics",
    "MultivariateSeries",
    "NeighborSets",
    "NmmConfig",
    "PatternMatrix",
    "add_observation_noise",
    "bivariate_network",
    "build_moptn",
    "ce_tensor",
    "co_occurrence_entropy",
    "conditional_entropy_given_set",
    "decimate",
    "embed",
    "encode_pattern",
    "encode_series",
    "epsilon_test",
    "infer_network",
    "lagged_joint_counts",
    "metrics",
    "minimal_conditioning_set",
    "neighbor_sets",
    "reproduction_nmm_config",
    "score",
    "simulate_ar",
    "simulate_lorenz_chain",
    "simulate_nmm",
    "sweep",
    "threshold",
    "transition_network",
    "windowed_analysis",
]
