"""Fiberwise discriminant profile of a fibration model.

In scroll coordinates the fiber pencil over (s : t) has entries that are binary
forms, so det(s0 A + s1 B) is a binary quintic in (s0 : s1) whose coefficients
are forms in (s, t), and its discriminant is a binary form of degree 2h in
(s, t).  We evaluate it at 2h + 1 points of P^1 (over an extension when the base
field is too small), interpolate, confirm on further points, and descend.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra.binary import BinaryForm, discriminant_binary, interpolate_form, squarefree_profile
from ..algebra.embeddings import descend, extension_with_points
from ..algebra.polymatrix import InsufficientPointsError, pencil_det
from ..algebra.poly import UniPoly
from .model import FibrationModel, scroll_fiber

CHECK_POINTS = 2


@dataclass(frozen=True)
class DiscriminantProfile:
    form: BinaryForm  # nominal degree 2h
    height: int

    @property
    def is_zero(self) -> bool:
        return self.form.is_zero()

    @property
    def poly(self) -> UniPoly:
        """Delta(1, t)."""
        return self.form.dehomogenize("t")

    @property
    def infinity_order(self) -> int | None:
        return None if self.is_zero else self.form.multiplicity_at_infinity()

    @property
    def projective_degree(self) -> int | None:
        """Degree in t plus the order of vanishing at t = infinity (None for the zero form)."""
        if self.is_zero:
            return None
        return self.poly.degree + self.infinity_order

    @property
    def profile(self) -> list[tuple[int, int]]:
        return [] if self.is_zero or self.form.degree == 0 else squarefree_profile(self.form)

    @property
    def squarefree(self) -> bool:
        return not self.is_zero and all(m == 1 for _, m in self.profile)

    def is_valid(self, expected_degree: int | None = None) -> bool:
        expected = 2 * self.height if expected_degree is None else expected_degree
        return self.squarefree and self.projective_degree == expected

    def reason(self, expected_degree: int | None = None) -> str:
        expected = 2 * self.height if expected_degree is None else expected_degree
        if self.is_zero:
            return "discriminant vanishes identically"
        if self.projective_degree != expected:
            return f"degree {self.projective_degree}, expected {expected}"
        if not self.squarefree:
            return f"repeated roots, profile {self.profile}"
        return "valid"

    def singular_fiber_count(self) -> int | None:
        """Geometric number of singular fibers (distinct roots over the algebraic closure)."""
        if self.is_zero:
            return None
        return sum(deg for deg, _ in self.profile)

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "form": self.form.to_json(),
            "projectiveDegree": self.projective_degree,
            "affineDegree": None if self.is_zero else self.poly.degree,
            "infinityOrder": self.infinity_order,
            "squarefree": self.squarefree,
            "profile": [list(x) for x in self.profile],
            "singularFibers": self.singular_fiber_count(),
        }


def fiber_discriminant(model: FibrationModel, point, quadrics=None):
    """disc_{(s0:s1)} det(s0 A + s1 B) of the scroll-frame fiber at one base point.

    ``quadrics`` may carry the scroll forms already lifted to the point's field.
    """
    if quadrics is None:
        P = scroll_fiber(model, point)
        A, B = P.matrices()
        F = P.field
    else:
        s, t = point
        A, B = (q.matrix_at(s, t) for q in quadrics)
        F = s.field
    return discriminant_binary(pencil_det(A, B, F))


def discriminant_profile(model: FibrationModel, extra_checks: int = CHECK_POINTS) -> DiscriminantProfile:
    h = model.height
    D = 2 * h
    base = model.field
    need = D + 1 + extra_checks
    big = extension_with_points(base, need, projective=True)
    pts = []
    if big.is_finite:
        for i in range(min(need, big.order)):
            pts.append((big.one, big.from_index(i)))
        if len(pts) < need:
            pts.append((big.zero, big.one))
    else:
        pts = [(big.one, big(i)) for i in range(need)]
    if len(pts) < need:
        raise InsufficientPointsError(f"{big} has too few points for degree {D}")
    lifted = [q.over(big) for q in model.quadrics]
    vals = [fiber_discriminant(model, p, lifted) for p in pts]
    form = interpolate_form(pts[: D + 1], vals[: D + 1], D)
    for p, v in zip(pts[D + 1 :], vals[D + 1 :]):
        if form(*p) != v:
            raise ArithmeticError("discriminant values do not fit a form of degree 2h")
    if big != base:
        form = BinaryForm(base, [descend(c, base) for c in form.coeffs])
    return DiscriminantProfile(form, h)


def singular_base_points(prof: DiscriminantProfile, k: int = 1) -> list[tuple]:
    """Roots of Delta in P^1(F_{q^k}), as (s, t) pairs normalized (1 : t) or (0 : 1)."""
    from ..algebra.binary import _lift
    from ..algebra.embeddings import extension
    from ..algebra.poly import roots

    if prof.is_zero:
        raise ValueError("every fiber is singular")
    base = prof.form.field
    big = extension(base, k) if k > 1 else base
    g = prof.poly.map_coeffs(lambda c: _lift(c, big), big)
    out = [(big.one, r) for r in roots(g)] if g.degree > 0 else []
    if prof.infinity_order:
        out.append((big.zero, big.one))
    return out
