# Siegel-space geometry
from .lagrangian import LagrangianFrame, SiegelPoint, SymplecticElement, WeylVector, symplectic_form
from .siegel import (
    act_on_lagrangian,
    act_on_siegel,
    chart_cross_ratio,
    cross_ratio,
    finsler_distance,
    is_maximal_triple,
    is_maximal_tuple,
    normalize_maximal_4tuple,
    riemannian_distance,
    standardize_pair,
    transverse,
    vectorial_distance,
)
from .tubes import (
    RTube,
    TubeSplitCoords,
    contains_point,
    involution_matrix,
    intersect_tubes,
    is_causal_pair,
    product_split,
    project_lagrangian,
    projected_vectorial_distance,
    sl_distance,
    tubes_orthogonal,
)
