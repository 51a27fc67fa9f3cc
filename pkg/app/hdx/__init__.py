"""Boolean function analysis on weighted pure simplicial complexes.

Faces, measures and links (complex), up/down operators and HD-walks
(operators), Bottom-Up and HD-Level-Set decompositions (decomposition),
local spectral expansion and walk strips (expansion, spectral), and
numerical checks of the structural statements (theorems, anti_tribes).
"""
from .complex import FaceFunction, SimplicialComplex, build_from_top_faces, inner_product, link, localize, restrict
from .decomposition import bottom_up_explicit, bottom_up_recursive, hd_level_set, norm_relations
from .errors import HDXError
from .expansion import gamma_of, measure_gamma
from .models import ExperimentConfig, TheoremVerdict, VerdictStatus
from .operators import WalkSpec, assemble_walk, canonical_walk, down, lower_walk, noise_operator, swap_walk, up
from .pseudorandom import pseudorandomness
from .spectral import approximate_eigenvalues, st_rank

__all__ = [
    "ExperimentConfig",
    "FaceFunction",
    "HDXError",
    "SimplicialComplex",
    "TheoremVerdict",
    "VerdictStatus",
    "WalkSpec",
    "approximate_eigenvalues",
    "assemble_walk",
    "bottom_up_explicit",
    "bottom_up_recursive",
    "build_from_top_faces",
    "canonical_walk",
    "down",
    "gamma_of",
    "hd_level_set",
    "inner_product",
    "link",
    "localize",
    "lower_walk",
    "measure_gamma",
    "noise_operator",
    "norm_relations",
    "pseudorandomness",
    "restrict",
    "st_rank",
    "swap_walk",
    "up",
]
