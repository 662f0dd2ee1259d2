"""Exact fields, polynomials, binary forms and linear algebra."""

from .binary import BinaryForm, discriminant_binary, squarefree_profile
from .fields import GF, QQ, FieldElement, FieldError, FieldSpec, field_build, field_from_json
from .multipoly import MultiPoly
from .poly import UniPoly, resultant, squarefree_part
from .polymatrix import det_poly_matrix

__all__ = [
    "BinaryForm",
    "FieldElement",
    "FieldError",
    "FieldSpec",
    "GF",
    "MultiPoly",
    "QQ",
    "UniPoly",
    "det_poly_matrix",
    "discriminant_binary",
    "field_build",
    "field_from_json",
    "resultant",
    "squarefree_part",
    "squarefree_profile",
]
