"""Exhaustive conjugacy class counting for unipotent radicals of flag stabilizers."""

from .errors import (
    CapExceeded,
    DimensionMismatch,
    DuplicateAbscissa,
    InternalInconsistency,
    MembershipViolation,
    NoFit,
    NotAssociated,
    NotPrime,
    NotPrimePower,
    VerificationFailed,
)
from .flag import DEFAULT_STATE_CAP, DimensionVector, FlagContext
from .gf import DEFAULT_FIELD_CAP, FiniteField, field_for_order, make_field, primitive_element
from .matfq import MatrixFq, encode, gl_order, kernel_dim, mat_mul, rank, try_inverse
from .orbit import (
    ClassCount,
    LeviFit,
    OrbitPartition,
    OrbitRecord,
    ad_matrix_on_cross,
    adjoint_act,
    centralizer_orders,
    commuting_pairs,
    count_classes,
    find_zero_one_reps,
    fit_levi_form,
    partition_orbits,
    to_nilpotent,
    to_unipotent,
    transfer_reps,
    verify_association,
)
from .polyq import (
    RationalPolynomial,
    certify_integer_coefficients,
    default_schedule,
    interpolate,
    rebase_q_minus_1,
    rebase_to_q,
    stability_check,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ClassCount",
    "DEFAULT_FIELD_CAP",
    "DEFAULT_STATE_CAP",
    "DimensionMismatch",
    "DimensionVector",
    "DuplicateAbscissa",
    "FiniteField",
    "FlagContext",
    "InternalInconsistency",
    "LeviFit",
    "MatrixFq",
    "MembershipViolation",
    "NoFit",
    "NotAssociated",
    "NotPrime",
    "NotPrimePower",
    "OrbitPartition",
    "OrbitRecord",
    "RationalPolynomial",
    "VerificationFailed",
    "ad_matrix_on_cross",
    "adjoint_act",
    "centralizer_orders",
    "certify_integer_coefficients",
    "commuting_pairs",
    "count_classes",
    "default_schedule",
    "encode",
    "field_for_order",
    "find_zero_one_reps",
    "fit_levi_form",
    "gl_order",
    "interpolate",
    "kernel_dim",
    "make_field",
    "mat_mul",
    "partition_orbits",
    "primitive_element",
    "rank",
    "rebase_q_minus_1",
    "rebase_to_q",
    "stability_check",
    "to_nilpotent",
    "to_unipotent",
    "transfer_reps",
    "try_inverse",
    "verify_association",
]
