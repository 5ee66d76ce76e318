"""Certified bounds for Seshadri constants of polytopes from lattice-point ranks."""

from jetbound.bounds import (
    BoundResult,
    RootBound,
    Weights,
    max_jet_order,
    multipoint_jet_lower,
    multipoint_seshadri_lower,
    seshadri_lower_bound,
    volume_upper_bound,
)
from jetbound.geometry import (
    LatticeMap,
    LatticePointSet,
    RationalPolytope,
    dilate,
    hull_to_halfspaces,
    lattice_points,
    minkowski_sum,
    normalize_to_nonneg,
    preimage_under_lattice_map,
    translate,
    volume,
)
from jetbound.jets import (
    StaircaseIdeal,
    build_jet_matrix,
    build_multipoint_matrix,
    is_full_jet_rank,
    phi_of_power,
    rank_exact,
    rank_modular,
    staircase_from_generators,
)
from jetbound.methods import (
    Decomposition,
    decomposition_bound,
    degeneration_check,
    lattice_change_bound,
    lifting_function_exists,
    validate_decomposition,
    verify_lifting_witness,
)

__version__ = "0.1.0"
