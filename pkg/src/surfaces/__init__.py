# Surface groups and representations
from .words import BOUNDARY_NAMES, PAIR_OF_PANTS, FreeWord, SurfaceSpec, iter_reduced_words
from .representation import (
    Representation,
    ShilovData,
    TranslationLengths,
    corollary_width,
    labourie_cross_ratio,
    period,
    shilov_data,
    translation_lengths,
)
from .builders import (
    build_pair_of_pants_fuchsian,
    diagonal_embed,
    hexagon_ortho_length,
    ortho_target_length,
    product_of_fuchsians,
    representation_from_matrices,
    solve_cuff_for_target_ortho,
)
from .double import DoubleRepresentation, double_representation, doubled_ortho_element, peripheral_tube
