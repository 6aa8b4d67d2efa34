"""Homological stability machinery for node-extension families of Kac-Moody diagrams."""

from .finite_type import classify, positive_roots, weyl_data
from .gcm import GCM, components, dynkin_graph, graph_isomorphic, restrict, validate_gcm
from .family import FamilySpec, extend, find_stable_base
from .spherical import chains, enumerate_spherical, extended_subcategory, is_cofinal, verify_observation

__version__ = "0.1.0"

__all__ = [
    "GCM", "FamilySpec", "chains", "classify", "components", "dynkin_graph", "enumerate_spherical",
    "extend", "extended_subcategory", "find_stable_base", "graph_isomorphic", "is_cofinal",
    "positive_roots", "restrict", "validate_gcm", "verify_observation", "weyl_data",
]
