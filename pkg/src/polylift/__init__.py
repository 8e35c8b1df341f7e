"""Exact-arithmetic toolkit for lifting-based polytope descriptions.

Covers four families: matchings, s-t path sets in acyclic digraphs,
cliques of size at most two, and lex-ordered two-column 0/1 matrices.
For each, the package generates the derived inequality system, computes
the lifting into the corresponding extension, and verifies completeness,
validity, facetness and irredundancy claims by exact enumeration.
"""

from .exactnum import (
    NEG_INF,
    POS_INF,
    ExtendedRational,
    RatMatrix,
    Rational,
    affine_dimension,
    rank,
    rat,
    solve_linear,
)
from .graphcore import (
    CloneLabel,
    Digraph,
    Graph,
    bipartite_components,
    clique_digraph,
    matching_double,
    neighbors,
    non_neighbors,
    path_split,
    successors,
)
from .circulation import (
    CapacityBounds,
    Circulation,
    FeasibilityResult,
    find_circulation,
    hoffman_feasible_flow,
    hoffman_feasible_subsets,
)
from .families import (
    VRep,
    enum_edge_vertices,
    enum_matchings,
    enum_path_sets,
    enum_perfect_matchings,
    enum_small_cliques,
)
from .descriptions import (
    InequalitySystem,
    LinearConstraint,
    blossom_system,
    edge_polytope_system,
    qxy_system,
    qxyz_system,
    small_clique_system,
    vande_vate_system,
)
from .orbisack import (
    BlockIneq,
    FeasibleTau,
    build_block,
    critical_row,
    enum_feasible_tau,
    enum_orbisack_vertices,
    lift_xy,
    lift_xyz,
    lift_y,
    lift_z,
    orbisack_system,
    separate_block,
    tau_of,
)
from .lifting import (
    LiftingSpec,
    MarkedInfeasible,
    check_section_enforcing,
    matching_family,
    matching_lift,
    orbisack_family,
    pathset_family,
    pathset_lift,
    qxy_family,
    smallclique_family,
    smallclique_lift,
)
from .verify import (
    CompletenessReport,
    HPolytope,
    check_completeness,
    check_irredundancy,
    check_validity,
    dd_vertices,
    facet_dimension,
)

__version__ = "0.1.0"
