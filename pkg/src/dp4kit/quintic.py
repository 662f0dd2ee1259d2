"""Invariants of binary quintics and coordinates on P(1,2,3).

Transvectants use the unnormalized Cayley Omega process

    (f, g)_r = sum_k (-1)^k C(r, k) d_s^(r-k) d_t^k f * d_s^k d_t^(r-k) g,

and the generating invariants come from the chain

    i = (f, f)_4,  j = (f, i)_2,  tau = (j, j)_2,
    I4 = (i, i)_2,  I8 = (i, tau)_2,  I12 = (tau, tau)_2.

Under (s, t) -> (a s + b t, c s + d t) the three invariants pick up
det^10, det^20, det^30, so [I4 : I8 : I12] is a point of P(1,2,3).
Characteristic 3 and 5 are refused: the Omega process divides nothing, but the
chain degenerates there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .algebra.binary import BinaryForm
from .algebra.fields import FieldElement, FieldError, FieldSpec


class UnstableQuinticError(ValueError):
    pass


def _dpow(f: BinaryForm, i: int, j: int) -> BinaryForm:
    for _ in range(i):
        f = f.ds()
    for _ in range(j):
        f = f.dt()
    return f


def transvectant(f: BinaryForm, g: BinaryForm, r: int) -> BinaryForm:
    if r < 0 or r > min(f.degree, g.degree):
        raise ValueError(f"transvectant order {r} out of range for degrees {f.degree}, {g.degree}")
    out = BinaryForm.zero(f.field, f.degree + g.degree - 2 * r)
    for k in range(r + 1):
        term = _dpow(f, r - k, k) * _dpow(g, k, r - k)
        c = comb(r, k) * (-1 if k % 2 else 1)
        out = out + term * c
    return out


def _check_field(field: FieldSpec):
    if field.characteristic in (3, 5):
        raise FieldError("quintic invariants need characteristic 0 or > 5")


@dataclass(frozen=True)
class InvariantVector:
    I4: FieldElement
    I8: FieldElement
    I12: FieldElement

    def as_tuple(self) -> tuple:
        return (self.I4, self.I8, self.I12)

    def is_zero(self) -> bool:
        return not (self.I4 or self.I8 or self.I12)

    def to_json(self) -> dict:
        return {"I4": self.I4.to_str(), "I8": self.I8.to_str(), "I12": self.I12.to_str()}


def covariant_chain(f: BinaryForm) -> dict[str, BinaryForm]:
    if f.degree != 5:
        raise ValueError(f"expected a binary quintic, got degree {f.degree}")
    _check_field(f.field)
    i = transvectant(f, f, 4)
    j = transvectant(f, i, 2)
    tau = transvectant(j, j, 2)
    return {"i": i, "j": j, "tau": tau}


def invariants_quintic(f: BinaryForm) -> InvariantVector:
    ch = covariant_chain(f)
    i, tau = ch["i"], ch["tau"]
    I4 = transvectant(i, i, 2).coeffs[0]
    I8 = transvectant(i, tau, 2).coeffs[0]
    I12 = transvectant(tau, tau, 2).coeffs[0]
    return InvariantVector(I4, I8, I12)


@dataclass(frozen=True)
class WeightedModuliPoint:
    """Normal form of [I4 : I8 : I12] under (a, b, c) ~ (l a, l^2 b, l^3 c).

    chart "I4":  (I8 / I4^2, I12 / I4^3)
    chart "I8":  (I12^2 / I8^3,)      when I4 = 0
    chart "I12": ()                   when I4 = I8 = 0
    """

    chart: str
    coords: tuple
    invariants: InvariantVector | None = None

    def __eq__(self, other):
        if not isinstance(other, WeightedModuliPoint):
            return NotImplemented
        return self.chart == other.chart and self.coords == other.coords

    def __hash__(self):
        return hash((self.chart, self.coords))

    def to_json(self) -> dict:
        out = {"chart": self.chart, "coords": [c.to_str() for c in self.coords]}
        if self.invariants is not None:
            out["invariants"] = self.invariants.to_json()
        return out


def weighted_normal_form(v: InvariantVector) -> WeightedModuliPoint:
    a, b, c = v.as_tuple()
    if a:
        return WeightedModuliPoint("I4", (b / a**2, c / a**3), v)
    if b:
        return WeightedModuliPoint("I8", (c**2 / b**3,), v)
    if c:
        return WeightedModuliPoint("I12", (), v)
    raise UnstableQuinticError("all invariants vanish: the quintic is GIT-unstable")


def moduli_point(f: BinaryForm) -> WeightedModuliPoint:
    return weighted_normal_form(invariants_quintic(f))


def xi_of_pencil(P) -> WeightedModuliPoint:
    """Moduli point of the determinantal quintic of a pencil of quadrics."""
    from .pencil import determinantal_quintic

    return moduli_point(determinantal_quintic(P))


def weighted_equal(u: InvariantVector, v: InvariantVector) -> bool:
    """Equality in P(1,2,3) over the algebraic closure, by cross-multiplication."""
    a1, b1, c1 = u.as_tuple()
    a2, b2, c2 = v.as_tuple()
    return (
        a1**2 * b2 == a2**2 * b1
        and a1**3 * c2 == a2**3 * c1
        and b1**3 * c2**2 == b2**3 * c1**2
        and a1 * b1 * c2 == a2 * b2 * c1
    )


# -- Moebius equivalence of split quintics (oracle for separation tests)


def _normalize(pt):
    s, t = pt
    return (s.field.one, t / s) if s else (s.field.zero, t.field.one)


def _moebius(m, pt):
    a, b, c, d = m
    s, t = pt
    return _normalize((a * s + b * t, c * s + d * t))


def pgl2(field: FieldSpec):
    """All elements of PGL2(F_q) as normalized 4-tuples (small q only)."""
    els = list(field.elements())
    seen = set()
    for a, b, c, d in itertools.product(els, repeat=4):
        if not (a * d - b * c):
            continue
        lead = next(x for x in (a, b, c, d) if x)
        inv = lead.inverse()
        key = (a * inv, b * inv, c * inv, d * inv)
        if key not in seen:
            seen.add(key)
            yield key


def equivalent_root_sets(S, T, field: FieldSpec, exhaustive: bool = False) -> bool:
    """Is there g in PGL2(F_q) with g(S) = T?  Points are (s, t) pairs."""
    S = {_normalize(p) for p in S}
    T = {_normalize(p) for p in T}
    if len(S) != len(T):
        return False
    if exhaustive:
        return any({_moebius(m, p) for p in S} == T for m in pgl2(field))
    Sl = sorted(S, key=lambda p: (p[0].index(), p[1].index()))
    src = Sl[:3]
    for tgt in itertools.permutations(sorted(T, key=lambda p: (p[0].index(), p[1].index())), 3):
        m = _three_point_map(src, tgt)
        if m is not None and {_moebius(m, p) for p in S} == T:
            return True
    return False


def _three_point_map(src, tgt):
    """The Moebius map sending three distinct points src to tgt, as (a, b, c, d)."""
    def to_std(pts):
        # matrix sending (1:0), (0:1), (1:1) to the three points
        (s1, t1), (s2, t2), (s3, t3) = pts
        # columns u = (s1, t1), v = (s2, t2) scaled so u + v = (s3, t3)
        det = s1 * t2 - s2 * t1
        if not det:
            return None
        lam = (s3 * t2 - s2 * t3) / det
        mu = (s1 * t3 - s3 * t1) / det
        return (lam * s1, mu * s2, lam * t1, mu * t2)

    m1 = to_std(src)
    m2 = to_std(tgt)
    if m1 is None or m2 is None:
        return None
    a, b, c, d = m1
    det = a * d - b * c
    inv = (d / det, -b / det, -c / det, a / det)
    # substitution (s, t) -> (a s + b t, c s + d t) acts on points as the matrix
    return _matmul(m2, inv)


def _matmul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
