"""Fractional jump pseudorandom generators over prime fields."""

__version__ = "0.1.0"

from .arith import FactoredInteger, crt_coefficients, factor, is_prime, mod_pow
from .compiler import FJProgram, compile_program, deserialize, serialize
from .field import (
    GF,
    Fp,
    FpPoly,
    PrimeField,
    QuotientElement,
    element_order,
    is_irreducible,
    is_projectively_primitive,
    make_primitive,
    parse_poly,
    search_projectively_primitive,
)
from .generator import (
    CompoundGenerator,
    FJState,
    ForcedJumpConfig,
    ICGState,
    SecretPrimeConfig,
    compound_eval,
    evaluate,
    forced_jump_eval,
    icg_next,
    secret_prime_next,
)
from .projective import (
    ProjMatrix,
    ProjPoint,
    apply_map,
    char_poly,
    companion_matrix,
    dehom,
    is_transitive,
    jump_index,
    parse_matrix,
    psi_reference,
)
