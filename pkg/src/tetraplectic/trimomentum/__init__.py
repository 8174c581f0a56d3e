from .certificates import (
    TRIVECTOR_NORMALIZATION,
    calibrate_normalization,
    horizontality_check,
    horizontality_negative_control,
    left_generator_fields,
    left_generators,
    level_pair,
    modified_psi,
    momentum_identity_check,
    sample_level_points,
)
from .grassmann import (
    GrassmannPoint,
    SpheroidElement,
    basis_change,
    grassmann_coords,
    mu_diagonal,
    mu_standard,
    nonvanishing_minors,
    spheroid_act,
)
from .nambu import gradient, nambu_flow, nambu_vector_field, quaternary_bracket, xi_standard
from .polytope import Hypersimplex, MomentumReport, hypersimplex_contains, matroid_hull_contains, orbit_scan

__all__ = [
    "TRIVECTOR_NORMALIZATION",
    "GrassmannPoint",
    "Hypersimplex",
    "MomentumReport",
    "SpheroidElement",
    "basis_change",
    "calibrate_normalization",
    "gradient",
    "grassmann_coords",
    "horizontality_check",
    "horizontality_negative_control",
    "hypersimplex_contains",
    "left_generator_fields",
    "left_generators",
    "level_pair",
    "matroid_hull_contains",
    "modified_psi",
    "momentum_identity_check",
    "mu_diagonal",
    "mu_standard",
    "nambu_flow",
    "nambu_vector_field",
    "nonvanishing_minors",
    "orbit_scan",
    "quaternary_bracket",
    "sample_level_points",
    "spheroid_act",
    "xi_standard",
]
