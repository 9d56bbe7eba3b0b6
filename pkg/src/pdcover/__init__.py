"""Primal-dual covering of pliable set families by min-cost edge sets."""

from .applications import (
    CapKecssInstance,
    CutThresholdFamily,
    NearMinCutsInstance,
    near_min_cuts_oracle,
    solve_cap_kecss,
    solve_near_min_cuts,
)
from .baseline import BaselineResult, optimal_cap_kecss, optimal_cover
from .family import ExplicitFamily, FamilyClass, FamilyOracle, check_gamma, classify
from .graph import Edge, Graph, cut_capacity, cut_degree, covers, delta
from .solver import InfeasibleError, SolveResult, phase1, phase2_reverse_delete, solve

__all__ = [
    "BaselineResult", "CapKecssInstance", "CutThresholdFamily", "Edge", "ExplicitFamily",
    "FamilyClass", "FamilyOracle", "Graph", "InfeasibleError", "NearMinCutsInstance",
    "SolveResult", "check_gamma", "classify", "covers", "cut_capacity", "cut_degree", "delta",
    "near_min_cuts_oracle", "optimal_cap_kecss", "optimal_cover", "phase1",
    "phase2_reverse_delete", "solve", "solve_cap_kecss", "solve_near_min_cuts",
]
