"""Exact minimum cost-to-time ratio cycles by parametric search."""

from .baselines import brute_force_min_ratio, karp_min_mean, lawler_binary_search
from .context import INF, ConcreteContext, Counters, LinearWeight, Ordering, ParametricContext
from .graph import (
    RatioGraph,
    WeightedDigraph,
    gen_planted_ratio,
    gen_random_graph,
    parse_ratio_graph,
    substitute_lambda,
    validate,
)
from .parametric import RatioSolution, parametric_min_ratio
from .sssp import compare_to_lambda_star, detect_negative_cycle, min_weight_cycle_seq

__all__ = [
    "INF",
    "ConcreteContext",
    "Counters",
    "LinearWeight",
    "Ordering",
    "ParametricContext",
    "RatioGraph",
    "RatioSolution",
    "WeightedDigraph",
    "brute_force_min_ratio",
    "compare_to_lambda_star",
    "detect_negative_cycle",
    "gen_planted_ratio",
    "gen_random_graph",
    "karp_min_mean",
    "lawler_binary_search",
    "min_weight_cycle_seq",
    "parametric_min_ratio",
    "parse_ratio_graph",
    "substitute_lambda",
    "validate",
]
