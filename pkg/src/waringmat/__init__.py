"""Exact three-term decompositions of trace-zero rational matrices."""

from .constructions import (
    ModelSpectrum,
    SimilarityWitness,
    complete_block_to_model,
    diagonalize_with_spectrum,
    factor_nonscalar_square,
    factor_rectangular,
    is_similar_to_model,
    model_matrix,
    perturbing_conjugator,
    prescribe_diagonal,
)
from .matrix import Matrix, PermutationMap, assemble_blocks, conjugate, permutation_conjugate
from .ncpoly import NcPolynomial, evaluate, parse
from .pipeline import search_diagonal_witness, waring_for_polynomial
from .primes import select_prime
from .scalar import Rational, parse_scalar, render_scalar
from .waring import Coefficients, Decomposition, decompose, two_term_obstruction, verify

__all__ = [
    "Coefficients",
    "Decomposition",
    "Matrix",
    "ModelSpectrum",
    "NcPolynomial",
    "PermutationMap",
    "Rational",
    "SimilarityWitness",
    "assemble_blocks",
    "complete_block_to_model",
    "conjugate",
    "decompose",
    "diagonalize_with_spectrum",
    "evaluate",
    "factor_nonscalar_square",
    "factor_rectangular",
    "is_similar_to_model",
    "model_matrix",
    "parse",
    "parse_scalar",
    "permutation_conjugate",
    "perturbing_conjugator",
    "prescribe_diagonal",
    "render_scalar",
    "search_diagonal_witness",
    "select_prime",
    "two_term_obstruction",
    "verify",
    "waring_for_polynomial",
]
