"""Quartic del Pezzo fibrations over P^1: numerology, case constructions and explicit models."""

from .cases import CaseSpec, case_splitting, case_table, closed_form_height
from .discriminant import DiscriminantProfile, discriminant_profile
from .model import FibrationModel, fiber_at, generate_model
from .numerology import (
    NumerologyReport,
    SplittingType,
    chi_OP,
    chi_Omega1P,
    chi_via_koszul,
    expected_dims_high_height,
    h0,
    height_from_splitting,
    numerology,
    rr_quartic_count,
    section_count_table,
    sym2,
    twist,
)

__all__ = [
    "CaseSpec",
    "DiscriminantProfile",
    "FibrationModel",
    "NumerologyReport",
    "SplittingType",
    "case_splitting",
    "case_table",
    "chi_OP",
    "chi_Omega1P",
    "chi_via_koszul",
    "closed_form_height",
    "discriminant_profile",
    "expected_dims_high_height",
    "fiber_at",
    "generate_model",
    "h0",
    "height_from_splitting",
    "numerology",
    "rr_quartic_count",
    "section_count_table",
    "sym2",
    "twist",
]
