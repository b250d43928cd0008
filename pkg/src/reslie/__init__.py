"""Exact computations with restricted Lie algebras over finite fields and
their restricted enveloping algebras."""

__version__ = "0.1.0"

from .errors import (
    AmbientMismatch,
    DivisionByZero,
    NotAbelian,
    NotAnIdeal,
    NotNilpotent,
    NotPNilpotent,
    ParseError,
    ReslieError,
    SizeLimit,
    ValidationError,
)
from .field import FieldElement, FiniteField, field_arith, frobenius
from .linalg import Subspace, rref, semilinear_image, subspace_contains, subspace_intersect, subspace_sum
from .liealg import (
    AlgebraPresentation,
    IsoWitness,
    RestrictedIdeal,
    change_basis,
    derived_p,
    dimension_subalgebra,
    exponent,
    graded,
    is_p_nilpotent,
    lower_central_series,
    nilpotence_class,
    p_closure,
    p_power,
    quotient,
    validate_presentation,
)
from .abelian import (
    abelian_iso,
    as_semilinear,
    cyclic_decomposition,
    fitting_decomposition,
    rank_profile,
)
from .env import (
    InvariantFingerprint,
    PBWAlgebra,
    augmentation_power,
    build_env,
    dimension_subalgebra_oracle,
    e_space,
    fingerprint,
    height_and_weight,
    jl_subspace,
    n_quotient_dims,
    nilpotency_index,
    verify_e_centrality,
)
from .isotest import env_generator_iso_search, lie_iso_search, main_theorem_consistency
