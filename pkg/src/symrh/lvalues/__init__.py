"""Gamma factors, Mellin kernels and completed critical values of symmetric-power L-functions."""

from .afe import (
    AfeParts,
    EpsilonError,
    PairingError,
    afe_parts,
    afe_value,
    coefficient_plan,
    critical_values,
    default_target,
    determine_epsilon,
    lseries_direct,
    required_cutoff,
)
from .budget import CriticalValue, CriticalValueSet, ErrorBudget
from .gamma import GammaFactorSpec, GammaPoleError, gamma_factor
from .kernel import KernelCache, KernelTargetError, MellinKernel, inverse_mellin_G, plan_kernel
from .lemmas import LEMMA_TARGET_REL, LemmaReport, check_lemma_bounds, default_lemma_points, lemma_bound, lemma_cutoff, lemma_target

__all__ = [
    "AfeParts",
    "CriticalValue",
    "CriticalValueSet",
    "EpsilonError",
    "ErrorBudget",
    "GammaFactorSpec",
    "GammaPoleError",
    "KernelCache",
    "KernelTargetError",
    "LemmaReport",
    "MellinKernel",
    "PairingError",
    "afe_parts",
    "afe_value",
    "check_lemma_bounds",
    "default_lemma_points",
    "LEMMA_TARGET_REL",
    "lemma_target",
    "lemma_cutoff",
    "coefficient_plan",
    "critical_values",
    "default_target",
    "determine_epsilon",
    "gamma_factor",
    "inverse_mellin_G",
    "lemma_bound",
    "lseries_direct",
    "plan_kernel",
    "required_cutoff",
]
