"""Dense univariate polynomials over a FieldSpec.

Besides ring arithmetic this module carries the few algorithms the rest of the
package leans on: Sylvester resultants, squarefree decomposition (characteristic
aware), distinct-degree splitting summaries, Cantor-Zassenhaus root finding over
finite fields, and Lagrange interpolation.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from . import linalg
from .fields import FieldElement, FieldError, FieldSpec


class UniPoly:
    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: FieldSpec, coeffs: Iterable = (), var: str = "x"):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self.var = var

    # -- constructors

    @classmethod
    def x(cls, field: FieldSpec, var: str = "x") -> "UniPoly":
        return cls(field, [0, 1], var)

    @classmethod
    def constant(cls, field: FieldSpec, c, var: str = "x") -> "UniPoly":
        return cls(field, [c], var)

    @classmethod
    def from_roots(cls, field: FieldSpec, roots, var: str = "x") -> "UniPoly":
        out = cls(field, [1], var)
        for r in roots:
            out = out * cls(field, [-field(r), 1], var)
        return out

    # -- basic accessors

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    @property
    def lc(self) -> FieldElement:
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, FieldElement)):
            return self == UniPoly(self.field, [other], self.var)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
                terms.append(f"{c!r}*{mono}" if mono else repr(c))
        return " + ".join(reversed(terms))

    def _wrap(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if other.field != self.field:
                raise FieldError(f"mismatched fields {self.field} and {other.field}")
            return other
        return UniPoly(self.field, [other], self.var)

    # -- ring operations

    def __add__(self, other):
        o = self._wrap(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(self.field, [self[i] + o[i] for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.field, [-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        if not self.coeffs or not o.coeffs:
            return UniPoly(self.field, [], self.var)
        out = [self.field.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return UniPoly(self.field, out, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = UniPoly(self.field, [1], self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        d = self._wrap(other)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        inv = d.lc.inverse()
        dd = d.degree
        quot = [self.field.zero] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if not c:
                continue
            c = c * inv
            quot[i - dd] = c
            for j, dc in enumerate(d.coeffs):
                rem[i - dd + j] = rem[i - dd + j] - c * dc
        return UniPoly(self.field, quot, self.var), UniPoly(self.field, rem[:dd], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def scale(self, c) -> "UniPoly":
        c = self.field(c)
        return UniPoly(self.field, [c * a for a in self.coeffs], self.var)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(self.lc.inverse())

    def __call__(self, x):
        if isinstance(x, UniPoly):
            acc = UniPoly(x.field, [], x.var)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = self.field(x) if not isinstance(x, FieldElement) else x
        acc = x.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:], self.var)

    def map_coeffs(self, fn, field: FieldSpec) -> "UniPoly":
        return UniPoly(field, [fn(c) for c in self.coeffs], self.var)

    def reversed(self, degree: int | None = None) -> "UniPoly":
        """t^degree * f(1/t)."""
        degree = self.degree if degree is None else degree
        cs = list(self.coeffs) + [self.field.zero] * (degree + 1 - len(self.coeffs))
        return UniPoly(self.field, cs[::-1], self.var)

    def powmod(self, e: int, m: "UniPoly") -> "UniPoly":
        result = UniPoly(self.field, [1], self.var) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    # -- serialization

    def to_json(self) -> dict:
        return {
            "vars": [self.var],
            "terms": [{"exp": [i], "coeff": c.to_str()} for i, c in enumerate(self.coeffs) if c],
        }


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """(g, u, v) with u a + v b = g monic."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = UniPoly(f, [1], a.var), UniPoly(f, [], a.var)
    t0, t1 = UniPoly(f, [], a.var), UniPoly(f, [1], a.var)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = r0.lc.inverse()
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


# -- resultants


def sylvester_matrix(f_hi: Sequence[FieldElement], g_hi: Sequence[FieldElement]) -> linalg.Matrix:
    """Sylvester matrix from coefficient lists given high-to-low, of formal degrees len-1."""
    m, n = len(f_hi) - 1, len(g_hi) - 1
    field = f_hi[0].field
    size = m + n
    rows = []
    for i in range(n):
        rows.append([field.zero] * i + list(f_hi) + [field.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([field.zero] * i + list(g_hi) + [field.zero] * (size - n - 1 - i))
    return rows


def resultant_formal(f_hi: Sequence[FieldElement], g_hi: Sequence[FieldElement]) -> FieldElement:
    m, n = len(f_hi) - 1, len(g_hi) - 1
    field = (f_hi or g_hi)[0].field
    if m == 0 and n == 0:
        return field.one
    if m == 0:
        return f_hi[0] ** n
    if n == 0:
        return g_hi[0] ** m
    return linalg.det(sylvester_matrix(f_hi, g_hi))


def resultant(f: UniPoly, g: UniPoly) -> FieldElement:
    """Sylvester resultant of f and g at their actual degrees."""
    if f.field != g.field:
        raise FieldError(f"mismatched fields {f.field} and {g.field}")
    if f.is_zero() and g.is_zero():
        raise ValueError("resultant of two zero polynomials")
    if f.is_zero() or g.is_zero():
        return f.field.zero
    return resultant_formal(f.coeffs[::-1], g.coeffs[::-1])


# -- squarefree decomposition and splitting summaries


class InseparableError(ValueError):
    pass


def _pth_root(f: UniPoly) -> UniPoly:
    """g with g^p = f, for f whose exponents are multiples of p (finite fields)."""
    p = f.field.characteristic
    q = f.field.order
    root_e = q // p  # c^(q/p) is the p-th root of c in F_q
    cs = [f.coeffs[i] ** root_e for i in range(0, len(f.coeffs), p)]
    return UniPoly(f.field, cs, f.var)


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Monic squarefree factors with multiplicities, f = lc * prod g_i^i."""
    if f.is_zero():
        raise ValueError("squarefree decomposition of zero")
    if f.degree == 0:
        return []
    field = f.field
    p = field.characteristic
    out: dict[int, UniPoly] = {}

    def accumulate(g: UniPoly, mult: int):
        if g.degree > 0:
            prev = out.get(mult)
            out[mult] = g if prev is None else prev * g

    def rec(a: UniPoly, scale_mult: int):
        i = 1
        c = gcd(a, a.derivative())
        w = a // c
        while w.degree > 0:
            y = gcd(w, c)
            accumulate((w // y).monic(), i * scale_mult)
            w, c, i = y, c // y, i + 1
        if c.degree > 0:
            if p == 0:
                raise InseparableError("unexpected residual factor over Q")
            rec(_pth_root(c.monic()), scale_mult * p)

    rec(f.monic(), 1)
    return sorted(((g, m) for m, g in out.items()), key=lambda gm: gm[1])


def squarefree_part(f: UniPoly) -> list[tuple[int, int]]:
    """Multiplicity profile [(factor degree, multiplicity)], highest multiplicity first.

    Each entry stands for a squarefree product of ``degree`` roots, each of the given
    multiplicity.  ``sum(deg * mult) == f.degree``.
    """
    dec = squarefree_decomposition(f)
    prof = [(g.degree, m) for g, m in dec]
    prof.sort(key=lambda dm: (-dm[1], -dm[0]))
    if sum(d * m for d, m in prof) != f.degree:
        raise InseparableError("multiplicity profile does not account for the degree")
    return prof


def multiplicity_partition(profile: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Root multiplicities as a partition, e.g. [(1,2),(1,1)] -> (2, 1)."""
    parts = []
    for deg, mult in profile:
        parts.extend([mult] * deg)
    return tuple(sorted(parts, reverse=True))


def is_squarefree(f: UniPoly) -> bool:
    if f.is_zero():
        return False
    return gcd(f, f.derivative()).degree == 0


def distinct_degree_factorization(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """For squarefree f over F_q: [(product of irreducible factors of degree d, d)]."""
    if not f.field.is_finite:
        raise FieldError("distinct-degree factorization needs a finite field")
    q = f.field.order
    x = UniPoly.x(f.field, f.var)
    rest = f.monic()
    out = []
    h = x % rest if rest.degree > 0 else x
    d = 0
    while rest.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, rest)
        g = gcd(rest, h - x)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest if rest.degree > 0 else h
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def splitting_degree(f: UniPoly) -> int:
    """Degree of the smallest extension of F_q over which squarefree f splits."""
    from math import lcm

    out = 1
    for g, d in distinct_degree_factorization(f):
        out = lcm(out, d)
    return out


def roots(f: UniPoly, rng: random.Random | None = None) -> list[FieldElement]:
    """Distinct roots of f in its (finite) base field, sorted by field index."""
    field = f.field
    if f.is_zero():
        raise ValueError("every element is a root of the zero polynomial")
    if not field.is_finite:
        return _rational_roots(f)
    if f.degree <= 0:
        return []
    rng = rng or random.Random(0x5EED)
    q = field.order
    x = UniPoly.x(field, f.var)
    g = gcd(f, x.powmod(q, f.monic()) - x)
    found: list[FieldElement] = []

    def split(h: UniPoly):
        if h.degree == 0:
            return
        if h.degree == 1:
            found.append(-h[0] / h[1])
            return
        while True:
            a = field.random(rng)
            w = (x + a).powmod((q - 1) // 2, h) - 1
            d = gcd(h, w)
            if 0 < d.degree < h.degree:
                split(d)
                split(h // d)
                return

    split(g)
    return sorted(found, key=lambda e: e.index())


def _rational_roots(f: UniPoly) -> list[FieldElement]:
    """Rational roots via linear factors of the squarefree decomposition only."""
    out = []
    for g, _ in squarefree_decomposition(f):
        if g.degree == 1:
            out.append(-g[0] / g[1])
    return out


def interpolate(points: Sequence[FieldElement], values: Sequence[FieldElement], var: str = "x") -> UniPoly:
    """Unique polynomial of degree < len(points) through the given values (Newton form)."""
    if len(points) != len(values):
        raise ValueError("points/values length mismatch")
    if not points:
        raise ValueError("no interpolation points")
    field = points[0].field
    n = len(points)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            den = points[i] - points[i - j]
            if not den:
                raise ValueError("interpolation points must be distinct")
            coef[i] = (coef[i] - coef[i - 1]) / den
    out = UniPoly(field, [coef[-1]], var)
    for i in range(n - 2, -1, -1):
        out = out * UniPoly(field, [-points[i], 1], var) + coef[i]
    return out
