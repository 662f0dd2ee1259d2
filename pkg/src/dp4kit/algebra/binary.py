"""Binary forms f(s, t) = sum_i c_i s^(d-i) t^i.

The coefficient list is indexed by the power of ``t``; so ``f(1, t)`` is the
univariate polynomial with the same coefficient list, and the point
``(s:t) = (0:1)`` is a root exactly when the top coefficient vanishes.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Sequence

from . import linalg
from .fields import QQ, FieldElement, FieldError, FieldSpec, PRIME
from .poly import UniPoly, resultant_formal, roots as uni_roots, squarefree_part


class BinaryForm:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable):
        cs = tuple(field(c) for c in coeffs)
        if not cs:
            raise ValueError("a binary form needs a degree; pass at least one coefficient")
        self.field = field
        self.coeffs = cs

    @classmethod
    def zero(cls, field: FieldSpec, degree: int) -> "BinaryForm":
        return cls(field, [0] * (degree + 1))

    @classmethod
    def from_roots(cls, field: FieldSpec, points: Sequence[tuple], lc=1) -> "BinaryForm":
        """lc * prod (b_i s - a_i t) for points (a_i : b_i); vanishes at each point."""
        out = cls(field, [lc])
        for a, b in points:
            out = out * cls(field, [field(b), -field(a)])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"BinaryForm({self.field}, {list(self.coeffs)!r})"

    # -- arithmetic

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise ValueError("adding forms of different degree")
        return BinaryForm(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return BinaryForm(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            out = [self.field.zero] * (self.degree + other.degree + 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        if b:
                            out[i + j] = out[i + j] + a * b
            return BinaryForm(self.field, out)
        c = self.field(other)
        return BinaryForm(self.field, [c * a for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = BinaryForm(self.field, [1])
        for _ in range(e):
            out = out * self
        return out

    def __call__(self, s, t):
        """Evaluate at (s, t); values may live in an extension (passed as FieldElements)."""
        field = s.field if isinstance(s, FieldElement) else self.field
        s, t = field(s), field(t)
        d = self.degree
        acc = field.zero
        # Horner in t/s is unavailable when s = 0, so sum powers directly.
        sp = [field.one]
        tp = [field.one]
        for _ in range(d):
            sp.append(sp[-1] * s)
            tp.append(tp[-1] * t)
        for i, c in enumerate(self.coeffs):
            if c:
                acc = acc + _lift(c, field) * sp[d - i] * tp[i]
        return acc

    def map_coeffs(self, fn, field: FieldSpec) -> "BinaryForm":
        return BinaryForm(field, [fn(c) for c in self.coeffs])

    def change_field(self, field: FieldSpec) -> "BinaryForm":
        return BinaryForm(field, [_lift(c, field) for c in self.coeffs])

    # -- calculus

    def ds(self) -> "BinaryForm":
        d = self.degree
        if d == 0:
            return BinaryForm(self.field, [0])
        return BinaryForm(self.field, [c * (d - i) for i, c in enumerate(self.coeffs[:-1])])

    def dt(self) -> "BinaryForm":
        if self.degree == 0:
            return BinaryForm(self.field, [0])
        return BinaryForm(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def substitute(self, a, b, c, d) -> "BinaryForm":
        """(s, t) -> (a s + b t, c s + d t)."""
        f = self.field
        u = BinaryForm(f, [a, b])
        v = BinaryForm(f, [c, d])
        deg = self.degree
        out = BinaryForm.zero(f, deg)
        upow = [BinaryForm(f, [1])]
        vpow = [BinaryForm(f, [1])]
        for _ in range(deg):
            upow.append(upow[-1] * u)
            vpow.append(vpow[-1] * v)
        for i, coef in enumerate(self.coeffs):
            if coef:
                out = out + (upow[deg - i] * vpow[i]) * coef
        return out

    # -- univariate views

    def dehomogenize(self, var: str = "t") -> UniPoly:
        """f(1, t)."""
        return UniPoly(self.field, self.coeffs, var)

    def multiplicity_at_infinity(self) -> int:
        """Order of vanishing at (s:t) = (0:1)."""
        if self.is_zero():
            raise ValueError("zero form")
        return self.degree - self.dehomogenize().degree

    def multiplicity_at(self, point: tuple) -> int:
        """Order of vanishing at a point (a:b) of P^1 over the form's field."""
        if self.is_zero():
            raise ValueError("zero form")
        a, b = (self.field(x) for x in point)
        lin = BinaryForm(self.field, [b, -a])
        m = 0
        f = self
        while True:
            q = divide_exact(f, lin)
            if q is None:
                return m
            m += 1
            f = q

    def projective_roots(self) -> list[tuple[FieldElement, FieldElement]]:
        """Distinct roots in P^1 of the base field, normalized (1:r) or (0:1)."""
        if self.is_zero():
            raise ValueError("every point is a root of the zero form")
        g = self.dehomogenize()
        out = [(self.field.one, r) for r in uni_roots(g)] if g.degree > 0 else []
        if self.multiplicity_at_infinity() > 0:
            out.append((self.field.zero, self.field.one))
        return out

    def to_json(self) -> list[str]:
        return [c.to_str() for c in self.coeffs]


def _lift(c: FieldElement, field: FieldSpec) -> FieldElement:
    if c.field == field:
        return c
    from .embeddings import lift

    return lift(c, field)


def divide_exact(f: BinaryForm, g: BinaryForm) -> BinaryForm | None:
    """f / g when g divides f, else None."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero form")
    if f.is_zero():
        return BinaryForm.zero(f.field, max(f.degree - g.degree, 0))
    if g.degree > f.degree:
        return None
    # long division in the t-index, treating both as polynomials of formal degree
    rem = list(f.coeffs)
    gd = g.degree
    # lowest nonzero index of g handles division by pure s-powers correctly
    lo = next(i for i, c in enumerate(g.coeffs) if c)
    inv = g.coeffs[lo].inverse()
    qdeg = f.degree - gd
    quot = [f.field.zero] * (qdeg + 1)
    for i in range(qdeg + 1):
        c = rem[i + lo]
        if c:
            c = c * inv
            quot[i] = c
            for j, gc in enumerate(g.coeffs):
                if gc:
                    rem[i + j] = rem[i + j] - c * gc
    if any(rem):
        return None
    return BinaryForm(f.field, quot)


def binary_resultant(f: BinaryForm, g: BinaryForm) -> FieldElement:
    """Resultant of two binary forms at their formal degrees."""
    return resultant_formal(list(f.coeffs), list(g.coeffs))


def _disc_sign(d: int) -> int:
    return -1 if (d * (d - 1) // 2) % 2 else 1


def discriminant_binary(f: BinaryForm) -> FieldElement:
    """Discriminant normalized so that disc(prod (s - r_i t)) = prod_{i<j} (r_i - r_j)^2.

    Computed as a signed Res(f_s, f_t) / d^(d-2).  When the characteristic divides
    d over a prime field the computation is done over the integers and reduced.
    """
    field = f.field
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return field.one
    p = field.characteristic
    if p and d % p == 0:
        if field.kind != PRIME:
            raise FieldError("discriminant over an extension field of characteristic dividing the degree")
        lifted = BinaryForm(QQ, [int(c) for c in f.coeffs])
        val = discriminant_binary(lifted).value
        if val.denominator != 1:
            raise ArithmeticError("integer discriminant expected")
        return field(int(val))
    res = binary_resultant(f.ds(), f.dt())
    return res * _disc_sign(d) / field(d) ** (d - 2)


def squarefree_profile(f: BinaryForm) -> list[tuple[int, int]]:
    """Multiplicity profile including the point (0:1); highest multiplicity first."""
    if f.is_zero():
        raise ValueError("zero form")
    g = f.dehomogenize()
    prof: dict[int, int] = {}
    if g.degree > 0:
        for deg, mult in squarefree_part(g):
            prof[mult] = prof.get(mult, 0) + deg
    m_inf = f.multiplicity_at_infinity()
    if m_inf:
        prof[m_inf] = prof.get(m_inf, 0) + 1
    return sorted(((deg, m) for m, deg in prof.items()), key=lambda dm: (-dm[1], -dm[0]))


def is_squarefree_form(f: BinaryForm) -> bool:
    return all(m == 1 for _, m in squarefree_profile(f))


def interpolate_form(points: Sequence[tuple], values: Sequence[FieldElement], degree: int) -> BinaryForm:
    """Binary form of the given degree taking the given values at (s, t) points.

    Needs degree + 1 points, pairwise non-proportional; solved as a linear system.
    """
    if len(points) != degree + 1:
        raise ValueError("need exactly degree + 1 points")
    field = values[0].field
    rows = []
    for s, t in points:
        s, t = field(s), field(t)
        rows.append([s ** (degree - i) * t**i for i in range(degree + 1)])
    sol = linalg.solve(rows, list(values))
    if sol is None:
        raise ValueError("inconsistent interpolation data")
    return BinaryForm(field, sol)


def binomial_coefficients_form(field: FieldSpec, degree: int, a) -> BinaryForm:
    """(s + a t)^degree."""
    a = field(a)
    return BinaryForm(field, [a**i * comb(degree, i) for i in range(degree + 1)])
