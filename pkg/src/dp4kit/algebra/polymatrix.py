"""Determinants of matrices with polynomial entries.

Over finite fields the determinant is computed by evaluating at enough points
and interpolating; cofactor (Laplace) expansion is the fallback and the oracle.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from . import linalg
from .binary import BinaryForm, interpolate_form
from .embeddings import descend, extension_with_points
from .poly import UniPoly, interpolate


class InsufficientPointsError(ValueError):
    pass


def det_laplace(m: Sequence[Sequence]):
    """Cofactor expansion along the first row with memoized minors.

    Works for any commutative ring elements supporting +, -, *.
    """
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    rows = [list(r) for r in m]

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple[int, ...]):
        if row == n - 1:
            return rows[row][cols[0]]
        acc = None
        for k, c in enumerate(cols):
            entry = rows[row][c]
            if _is_zero(entry):
                continue
            sub = minor(row + 1, cols[:k] + cols[k + 1 :])
            term = entry * sub
            if k % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            return _zero_like(rows[row][cols[0]], minor(row + 1, cols[1:]))
        return acc

    return minor(0, tuple(range(n)))


def _is_zero(x) -> bool:
    if isinstance(x, BinaryForm):
        return x.is_zero()
    return not x


def _zero_like(entry, sub):
    prod = entry * sub
    return prod - prod


def det_poly_matrix(m: Sequence[Sequence[UniPoly]], allow_fallback: bool = True) -> UniPoly:
    """Exact determinant of a square matrix of univariate polynomials."""
    field = m[0][0].field
    var = m[0][0].var
    bound = sum(max((e.degree for e in row), default=0) for row in m)
    bound = max(bound, 0)
    if field.is_finite and field.order < bound + 1:
        if not allow_fallback:
            raise InsufficientPointsError(f"{field} has fewer than {bound + 1} points")
        return det_laplace(m)
    pts = [field.from_index(i) if field.is_finite else field(i) for i in range(bound + 1)]
    vals = [linalg.det([[e(x) for e in row] for row in m]) for x in pts]
    return interpolate(pts, vals, var)


def det_binary_matrix(m: Sequence[Sequence[BinaryForm]], degree: int) -> BinaryForm:
    """Determinant of a matrix of binary forms whose determinant has the given degree.

    Evaluates at ``degree + 1`` points of P^1, moving to an extension when the base
    field has too few, interpolates there and descends the coefficients.
    """
    field = m[0][0].field
    big = extension_with_points(field, degree + 1, projective=True)
    if big.is_finite:
        pts = [(big.one, big.from_index(i)) for i in range(min(degree + 1, big.order))]
        if len(pts) < degree + 1:
            pts.append((big.zero, big.one))
    else:
        pts = [(big.one, big(i)) for i in range(degree + 1)]
    vals = []
    for s, t in pts:
        vals.append(linalg.det([[e(s, t) for e in row] for row in m]))
    form = interpolate_form(pts, vals, degree)
    if big == field:
        return form
    return BinaryForm(field, [descend(c, field) for c in form.coeffs])


def pencil_det(a, b, field) -> BinaryForm:
    """det(s A + t B) for square matrices A, B over ``field``; degree = size."""
    n = len(a)
    m = [[BinaryForm(field, [a[i][j], b[i][j]]) for j in range(n)] for i in range(n)]
    return det_binary_matrix(m, n)

