"""Exact newform coefficients: built-in level-1 eigenforms, JSON files, Hecke checks."""

from .hecke import HeckeCheck, HeckeReport, validate_hecke
from .newform import (
    BUILTIN_WEIGHTS,
    FormDataError,
    LevelNotSquarefreeError,
    MalformedFileError,
    NewformData,
    NotNormalizedError,
    OddWeightError,
    builtin_newform,
    delta_series,
    factorize,
    is_squarefree,
    load_newform,
    newform_from_dict,
    newform_to_dict,
    save_newform,
)
from .quadratic import QuadraticElement
from .series import IntegerSeries, eisenstein_series, euler_product, kronecker_multiply

__all__ = [
    "BUILTIN_WEIGHTS",
    "FormDataError",
    "HeckeCheck",
    "HeckeReport",
    "IntegerSeries",
    "LevelNotSquarefreeError",
    "MalformedFileError",
    "NewformData",
    "NotNormalizedError",
    "OddWeightError",
    "QuadraticElement",
    "builtin_newform",
    "delta_series",
    "eisenstein_series",
    "euler_product",
    "factorize",
    "is_squarefree",
    "kronecker_multiply",
    "load_newform",
    "newform_from_dict",
    "newform_to_dict",
    "save_newform",
    "validate_hecke",
]
