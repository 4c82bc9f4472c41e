"""Exact piecewise-affine analysis and depth-limit experiments for ReLU networks."""

from ._core import (  # noqa: F401
    ActivationMatrix,
    BoundaryProbeError,
    Network,
    ResourceLimitError,
    activation_product,
    affine_piece,
    enumerate_regions,
    forward,
    generate_sequence,
    induced_matrix_norm,
    lp_distance_estimate,
    pointwise_experiment,
    product_limit,
    representation_check,
    series_limit,
    stabilization_index,
    tail_bound,
    vector_norm,
    verify_tail_lemma,
    zaslavsky_bound,
)

__all__ = [
    "ActivationMatrix",
    "BoundaryProbeError",
    "Network",
    "ResourceLimitError",
    "activation_product",
    "affine_piece",
    "enumerate_regions",
    "forward",
    "generate_sequence",
    "induced_matrix_norm",
    "lp_distance_estimate",
    "pointwise_experiment",
    "product_limit",
    "representation_check",
    "series_limit",
    "stabilization_index",
    "tail_bound",
    "vector_norm",
    "verify_tail_lemma",
    "zaslavsky_bound",
]
