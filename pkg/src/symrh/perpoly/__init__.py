"""Period polynomials of symmetric-power L-functions and their auxiliary polynomials."""

from .build import (
    H_VARIANTS,
    DecompositionError,
    DecompositionReport,
    ImaginaryResidueError,
    PeriodPolynomialBundle,
    build_bundle,
    build_H_M,
    build_P,
    build_Q,
    build_R,
    build_h,
    check_R_functional_equation,
    decomposition_exponents,
    normalizer,
    verify_decomposition,
)
from .polynomial import ComplexPolynomial, DegreeUncertainError, RealPolynomial, real_polynomial

__all__ = [
    "H_VARIANTS",
    "ComplexPolynomial",
    "DecompositionError",
    "DecompositionReport",
    "DegreeUncertainError",
    "ImaginaryResidueError",
    "PeriodPolynomialBundle",
    "RealPolynomial",
    "build_H_M",
    "build_P",
    "build_Q",
    "build_R",
    "build_bundle",
    "build_h",
    "check_R_functional_equation",
    "decomposition_exponents",
    "normalizer",
    "real_polynomial",
    "verify_decomposition",
]
