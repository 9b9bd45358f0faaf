"""Attractor bounds for discrete dynamical systems on integer boxes."""

from .domain import IntervalDomain, enumerate_states, enumerate_xprime
from .network import Network, RestrictionSpec, fixed_points, restrict_component
from .stg import TransitionGraph, attractors, attractors_oracle, build_stg, is_trap_domain
from .interaction import (
    SignedDigraph,
    global_graph,
    jacobian,
    local_graph,
    local_graph_unthresholded,
    threshold_sets,
)
from .circuits import (
    CircuitFamily,
    SignedCircuit,
    elementary_circuits,
    functional_positive_circuits,
    has_positive_circuit,
    is_pfvs,
    minimum_pfvs,
    minimum_pfvs_family,
)
from .bounds import AnalysisReport, BoundReport, analyze, corollary_bound, mu, theorem_bound

__all__ = [
    "IntervalDomain",
    "enumerate_states",
    "enumerate_xprime",
    "Network",
    "RestrictionSpec",
    "fixed_points",
    "restrict_component",
    "TransitionGraph",
    "attractors",
    "attractors_oracle",
    "build_stg",
    "is_trap_domain",
    "SignedDigraph",
    "global_graph",
    "jacobian",
    "local_graph",
    "local_graph_unthresholded",
    "threshold_sets",
    "CircuitFamily",
    "SignedCircuit",
    "elementary_circuits",
    "functional_positive_circuits",
    "has_positive_circuit",
    "is_pfvs",
    "minimum_pfvs",
    "minimum_pfvs_family",
    "AnalysisReport",
    "BoundReport",
    "analyze",
    "corollary_bound",
    "mu",
    "theorem_bound",
]

__version__ = "0.1.0"
