"""Sparse Clifford algebra, Clifford matrices (SL over the Clifford group)
and an executable Jorgensen-inequality strictness engine."""

from .clifford import (
    CliffordNumber,
    GammaElement,
    ScalarModeError,
    ZeroVector,
    bar,
    blade,
    blade_product,
    gamma_from_factors,
    gen,
    norm,
    norm_sq,
    prime,
    scalar,
    star,
    vector,
    vector_inverse,
)
from .moebius import (
    INFINITY,
    CliffordMatrix,
    Level,
    apply,
    commutator,
    determinant,
    diag,
    identity,
    inverse,
    is_vectorial,
    make_loxodromic,
    make_parabolic,
    matmul,
    matrix,
    orbit_probe,
    trace,
    validate,
)
from .jorgensen import (
    ContractionDetected,
    EqualityPersisted,
    NotCandidate,
    SignViolation,
    exact_equality_pair,
    family_pair,
    iterate,
    jorgensen_value,
    K_of,
    scan_grid,
    strictness_certificate,
)

__all__ = [
    "CliffordNumber", "GammaElement", "ScalarModeError", "ZeroVector",
    "bar", "blade", "blade_product", "gamma_from_factors", "gen", "norm",
    "norm_sq", "prime", "scalar", "star", "vector", "vector_inverse",
    "INFINITY", "CliffordMatrix", "Level", "apply", "commutator", "determinant",
    "diag", "identity", "inverse",
    "is_vectorial", "make_loxodromic", "make_parabolic", "matmul", "matrix",
    "orbit_probe", "trace", "validate",
    "ContractionDetected", "EqualityPersisted", "NotCandidate",
    "SignViolation", "exact_equality_pair", "family_pair", "iterate", "jorgensen_value", "K_of", "scan_grid",
    "strictness_certificate",
]
