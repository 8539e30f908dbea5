"""Satake parameters, symmetric-power Dirichlet coefficients and divisor majorants."""

from .coefficients import (
    DeligneBoundError,
    InsufficientCoefficientsError,
    SatakeParams,
    SymPowerCoefficients,
    coefficient_bound_violations,
    local_factor_coeffs,
    multiplicativity_violations,
    satake,
    sym_coeffs,
)
from .divisors import divisor_power, divisor_power_upto, tail_bound, zeta_interval
from .sieve import primes_upto, smallest_prime_factor

__all__ = [
    "DeligneBoundError",
    "InsufficientCoefficientsError",
    "SatakeParams",
    "SymPowerCoefficients",
    "coefficient_bound_violations",
    "divisor_power",
    "divisor_power_upto",
    "local_factor_coeffs",
    "multiplicativity_violations",
    "primes_upto",
    "satake",
    "smallest_prime_factor",
    "sym_coeffs",
    "tail_bound",
    "zeta_interval",
]
