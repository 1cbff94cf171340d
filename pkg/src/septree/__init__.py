"""Linked and lean tree-decompositions of graphs and matroids, built on
universes of set separations with submodular order functions."""

from .separations import (
    CardinalityRank,
    RankOracle,
    Report,
    TableRank,
    check_rank_oracle,
    invert,
    is_grounded_sample,
    is_nested,
    is_star,
    join,
    lambda_interval,
    leq,
    meet,
    order,
    star_interior,
    star_size,
)
from .instances import (
    BipartitionUniverse,
    Graph,
    GraphTreeDecomposition,
    GraphUniverse,
    GraphicRank,
    LinearRank,
    Matroid,
    MatroidTreeDecomposition,
    UniformRank,
    complete_graph,
    cycle_graph,
    matroid_decomp_to_stree,
    path_graph,
    stree_to_matroid_decomp,
    stree_to_treedecomp,
    treedecomp_to_stree,
)
from .strees import (
    STree,
    StarFamily,
    addable_candidates,
    family_contains,
    is_fixed_under_shifting_sample,
    shift,
    single_vertex_stree,
    validate_stree,
)
from .refine import (
    LeanViolation,
    LinkedViolation,
    PotentialProfile,
    choose_shift_separation,
    find_lean_violation,
    find_linked_violation,
    glue,
    potential,
    refine_combined,
    refine_to_lean,
    refine_to_linked,
)
from .oracles import (
    brute_force_branchwidth,
    brute_force_matroid_treewidth,
    brute_force_pathwidth,
    brute_force_treewidth,
    lambda_flow,
    menger,
    verify_lean_stree,
    verify_lean_td,
    verify_linked_stree,
    verify_linked_td,
    verify_matroid_lean,
    verify_theta_lean,
)

__all__ = [name for name in dir() if not name.startswith("_")]
