"""Sections of fibration models: exact verification, heights, distinguished sections.

A section of degree d is a tuple of binary forms x_0(s, t), ..., x_N(s, t) of
degree d in the ambient coordinates with no common zero on P^1.  Dehomogenizing
at s = 1 gives the univariate tuple p_i(t) = x_i(1, t) with max deg p_i = d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..algebra import linalg
from ..algebra.binary import BinaryForm, _lift, divide_exact
from ..algebra.fields import FieldElement, FieldSpec
from ..algebra.multipoly import MultiPoly
from ..algebra.poly import gcd
from ..varieties import quadric_points, to_elements
from .model import FibrationModel, ModelError, ScrollQuadric, pair_indices


class UnverifiedSectionError(ValueError):
    pass


@dataclass(frozen=True)
class SectionCandidate:
    forms: tuple  # BinaryForm per ambient coordinate, common degree

    @property
    def field(self) -> FieldSpec:
        return self.forms[0].field

    @property
    def degree(self) -> int:
        return self.forms[0].degree

    @classmethod
    def constant(cls, point: Sequence[FieldElement]) -> "SectionCandidate":
        F = point[0].field
        return cls(tuple(BinaryForm(F, [c]) for c in point))

    @classmethod
    def from_polys(cls, field: FieldSpec, polys: Sequence[Sequence], degree: int | None = None) -> "SectionCandidate":
        """From univariate coefficient lists p_i (low to high in t), homogenized to the max degree."""
        polys = [[field(c) for c in p] for p in polys]
        d = degree if degree is not None else max((_deg(p) for p in polys), default=0)
        forms = []
        for p in polys:
            cs = (p + [field.zero] * (d + 1))[: d + 1]
            forms.append(BinaryForm(field, cs))
        return cls(tuple(forms))

    def polys(self) -> list[list[FieldElement]]:
        return [list(f.coeffs) for f in self.forms]

    def is_content_free(self) -> bool:
        """No common zero on P^1: the p_i have trivial gcd and some p_i has full degree."""
        if all(f.is_zero() for f in self.forms):
            return False
        d = self.degree
        if not any(f.coeffs[d] for f in self.forms):
            return False  # common zero at infinity
        g = None
        for f in self.forms:
            if f.is_zero():
                continue
            u = f.dehomogenize()
            g = u if g is None else gcd(g, u)
        return g.degree == 0

    def canonical(self) -> "SectionCandidate":
        """Scale so the leading coefficient of the first nonzero p_i is 1."""
        first = next(f for f in self.forms if not f.is_zero())
        lead = next(c for c in reversed(first.coeffs) if c)
        inv = lead.inverse()
        return SectionCandidate(tuple(f * inv for f in self.forms))

    def sort_key(self):
        return tuple(c.sort_key() for f in self.forms for c in f.coeffs)

    def at(self, s, t) -> tuple:
        return tuple(f(s, t) for f in self.forms)

    def to_json(self) -> dict:
        return {"degree": self.degree, "polys": [[c.to_str() for c in f.coeffs] for f in self.forms]}


def _deg(p) -> int:
    for i in range(len(p) - 1, -1, -1):
        if p[i]:
            return i
    return 0


# -- substitution


def substitute(poly: MultiPoly, section: SectionCandidate) -> BinaryForm:
    """poly(s, t, x(s, t)) as a binary form, computed exactly."""
    F = section.field
    s = BinaryForm(F, [1, 0])
    t = BinaryForm(F, [0, 1])
    images = [s, t] + list(section.forms)
    acc = None
    cache: dict = {}
    for e, c in poly.terms.items():
        term = BinaryForm(F, [_lift(c, F)])
        for k, ek in enumerate(e):
            if ek:
                key = (k, ek)
                if key not in cache:
                    cache[key] = images[k] ** ek
                term = term * cache[key]
        acc = term if acc is None else acc + term
    if acc is None:
        return BinaryForm(F, [0])
    return acc


def scroll_coordinates(model: FibrationModel, section: SectionCandidate) -> list[BinaryForm] | None:
    """u(s, t) with x = G^{-1} E u, or None if the section leaves the scroll."""
    F = section.field
    G = [[_lift(c, F) for c in row] for row in model.G]
    d = section.degree
    ys = []
    for row in G:
        acc = BinaryForm.zero(F, d)
        for c, f in zip(row, section.forms):
            if c:
                acc = acc + f * c
        ys.append(acc)
    s = BinaryForm(F, [1, 0])
    t = BinaryForm(F, [0, 1])
    us = []
    for p in pair_indices(model.weights):
        if len(p) == 1:
            us.append(ys[p[0]])
            continue
        ya, yb = ys[p[0]], ys[p[1]]
        if d == 0:
            if ya or yb:
                return None
            us.append(None)  # the zero form of degree -1
            continue
        if ya * t != yb * s:
            return None
        u = divide_exact(ya, s)
        if u is None:
            return None
        us.append(u)
    return us


def scroll_value(q: ScrollQuadric, us: Sequence) -> BinaryForm | None:
    """sum M_ij u_i u_j; None marks the zero form."""
    acc = None
    for (i, j), f in q.entries.items():
        if us[i] is None or us[j] is None or f.is_zero():
            continue
        F = us[i].field
        term = f.change_field(F) * us[i] * us[j]
        if i != j:
            term = term * 2
        acc = term if acc is None else acc + term
    return acc


@dataclass(frozen=True)
class SectionCheck:
    ok: bool
    residuals: tuple  # one entry per defining form: True when it vanishes identically

    def to_json(self) -> dict:
        return {"ok": self.ok, "residualsZero": list(self.residuals)}


def verify_section(model: FibrationModel, section: SectionCandidate) -> SectionCheck:
    """Substitute the section into every defining form and test for the zero polynomial."""
    if not section.is_content_free():
        return SectionCheck(False, ())
    res = [substitute(L, section).is_zero() for L in model.linear]
    us = None
    for q, amb in zip(model.quadrics, model.ambient_quadrics):
        if amb is not None:
            res.append(substitute(amb, section).is_zero())
            continue
        if not all(res[: len(model.linear)]):
            res.append(False)
            continue
        if us is None:
            us = scroll_coordinates(model, section)
        if us is None:
            res.append(False)
            continue
        val = scroll_value(q, us)
        res.append(val is None or val.is_zero())
    return SectionCheck(all(res), tuple(res))


def section_height(model: FibrationModel, section: SectionCandidate, verify: bool = True) -> int:
    """deg sigma^* O(alpha, 1) = alpha + d for a content-free representative of degree d."""
    if verify and not verify_section(model, section).ok:
        raise UnverifiedSectionError("not a section of the model")
    return model.alpha + section.degree


# -- distinguished sections of the special constructions


@dataclass
class DistinguishedReport:
    kind: str
    description: str
    sections: list
    checks: list
    degrees: list  # degree over the base field of each section's field of definition

    @property
    def all_verified(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "description": self.description,
            "sections": [
                {"section": s.to_json(), "fieldDegree": k, "verified": c.ok}
                for s, c, k in zip(self.sections, self.checks, self.degrees)
            ],
            "allVerified": self.all_verified,
        }


def _u_to_x(model: FibrationModel, u: Sequence[FieldElement]) -> list[FieldElement]:
    """Constant x for a u supported on weight-0 coordinates."""
    F = u[0].field
    y = [F.zero] * (model.N + 1)
    for j, p in enumerate(pair_indices(model.weights)):
        if u[j]:
            if len(p) != 1:
                raise ModelError("constant sections live on the weight-0 coordinates")
            y[p[0]] = u[j]
    Ginv = [[_lift(c, F) for c in row] for row in model.Ginv]
    return linalg.matvec(Ginv, y)


def distinguished_sections(model: FibrationModel) -> DistinguishedReport:
    spec = model.spec
    if spec is None or not spec.is_special:
        raise ModelError("distinguished sections exist only for the special n = -1 constructions")
    F = model.field
    zero_idx = [j for j, w in enumerate(model.weights) if w == 0]
    key = (spec.case, spec.parity)
    us: list[list[FieldElement]] = []
    degrees: list[int] = []
    if spec.case == 5 and spec.parity == "even":
        kind = "canonical-section"
        u = [F.zero] * 5
        u[zero_idx[0]] = F.one
        us.append(u)
        degrees.append(1)
    elif key == (3, "odd"):
        kind = "conic-times-P1"
        Q = next(q for q in model.quadrics if q.twist == 0)
        M = [[Q.entry(i, j).coeffs[0] for j in zero_idx] for i in zero_idx]
        for pt in to_elements(F, quadric_points(F, [M])):
            u = [F.zero] * 5
            for j, c in zip(zero_idx, pt):
                u[j] = c
            us.append(u)
            degrees.append(1)
    elif key == (4, "even"):
        kind = "line-times-P1"
        for a in [None] + list(F.elements()):
            u = [F.zero] * 5
            if a is None:
                u[zero_idx[1]] = F.one
            else:
                u[zero_idx[0]] = F.one
                u[zero_idx[1]] = a
            us.append(u)
            degrees.append(1)
    elif key == (4, "odd"):
        kind = "line-meets-quadric"
        from ..algebra.embeddings import extension
        from ..algebra.poly import UniPoly, roots

        Q = next(q for q in model.quadrics if q.twist == 0)
        i0, i1 = zero_idx
        a, b, c = Q.entry(i0, i0).coeffs[0], Q.entry(i0, i1).coeffs[0] * 2, Q.entry(i1, i1).coeffs[0]
        # a x^2 + b x y + c y^2 on the line, points (x : y)
        for k in (1, 2):
            E = F if k == 1 else extension(F, 2)
            found = []
            if not _lift(a, E):
                found.append((E.one, E.zero))
            g = UniPoly(E, [_lift(c, E), _lift(b, E), _lift(a, E)])  # a x^2 + b x + c at y = 1
            for r in roots(g):
                found.append((r, E.one))
            if found:
                for x, y in found:
                    u = [E.zero] * 5
                    u[i0], u[i1] = x, y
                    us.append(u)
                    degrees.append(k)
                break
    else:
        raise ModelError(f"{spec} has no distinguished sections of constant type")
    sections = [SectionCandidate.constant(_u_to_x(model, u)).canonical() for u in us]
    checks = [verify_section(model, s) for s in sections]
    return DistinguishedReport(kind, spec.special_note or "", sections, checks, degrees)


# -- models through a prescribed section (case 1 only)


def _random_section(field: FieldSpec, n: int, d: int, rng) -> SectionCandidate:
    while True:
        cand = SectionCandidate(tuple(BinaryForm(field, [field.random(rng) for _ in range(d + 1)]) for _ in range(n)))
        if cand.is_content_free():
            return cand.canonical()


def _quadric_through(field: FieldSpec, twist: int, section: SectionCandidate, rng) -> ScrollQuadric:
    """A random scroll quadric of the given twist (all weights 0) vanishing on the section."""
    n = len(section.forms)
    d = section.degree
    cols = []
    keys = []
    for i in range(n):
        for j in range(i, n):
            prod = section.forms[i] * section.forms[j] * (1 if i == j else 2)
            for k in range(twist + 1):
                mono = BinaryForm(field, [field.one if m == k else field.zero for m in range(twist + 1)])
                cols.append((mono * prod).coeffs)
                keys.append((i, j, k))
    rows = [[c[r] for c in cols] for r in range(twist + 2 * d + 1)]
    basis = linalg.nullspace(rows, len(cols))
    coeffs = [field.zero] * len(cols)
    for v in basis:
        c = field.random(rng)
        coeffs = [a + c * b for a, b in zip(coeffs, v)]
    entries = {}
    for (i, j, k), c in zip(keys, coeffs):
        entries.setdefault((i, j), [field.zero] * (twist + 1))[k] = c
    return ScrollQuadric(field, twist, (0,) * n, {ij: BinaryForm(field, cs) for ij, cs in entries.items()})


def model_with_section(spec, field: FieldSpec, degree: int, seed: int, max_retries: int = 200):
    """A valid case-1 model containing a random section of the given degree.

    Returns (model, section).  The quadrics are drawn from the linear space of
    forms vanishing on the section; the discriminant is validated as in
    generate_model.
    """
    import random

    from .cases import case_splitting
    from .discriminant import discriminant_profile
    from .model import ambient_vars, lift_to_ambient

    if spec.case != 1:
        raise ModelError("prescribed sections are supported for case 1 models")
    rng = random.Random(seed)
    N = spec.ambient_dim
    G = linalg.identity(field, N + 1)
    vars = ambient_vars(N)
    expected = 2 * case_splitting(spec).height
    for attempt in range(max_retries):
        section = _random_section(field, N + 1, degree, rng)
        quads = [_quadric_through(field, a, section, rng) for a in spec.twists]
        ambient = [lift_to_ambient(q, G, vars) for q in quads]
        model = FibrationModel(field, spec.weights, G, [], quads, ambient, spec.alpha, spec, seed, attempt)
        if discriminant_profile(model).is_valid(expected) and verify_section(model, section).ok:
            return model, section
    raise ModelError(f"no valid model through a degree-{degree} section after {max_retries} attempts")


def pullback_degree(section: SectionCandidate, a: int, b: int, linear: Sequence[FieldElement]) -> int:
    """deg sigma^* O(a, b), counting the zeros on P^1 of l(x(s, t)) for a linear form l.

    The linear form must not vanish identically along the section.
    """
    F = section.field
    acc = BinaryForm.zero(F, section.degree)
    for c, f in zip(linear, section.forms):
        acc = acc + f * _lift(c, F)
    if acc.is_zero():
        raise ValueError("the linear form vanishes along the section")
    zeros = acc.dehomogenize().degree + acc.multiplicity_at_infinity()
    return a + b * zeros
