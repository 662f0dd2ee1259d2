"""Field embeddings F_{p^a} -> F_{p^b} (a | b) and extensions with enough points."""

from __future__ import annotations

from functools import lru_cache

from . import linalg
from .fields import EXTENSION, FieldElement, FieldError, FieldSpec, GF
from .poly import UniPoly, roots


class Embedding:
    """Ring embedding of ``small`` into ``big`` sending the generator to a fixed root.

    The root is the modulus root of smallest field index in ``big``, so the
    embedding is reproducible.  Prime fields embed by coercion.
    """

    def __init__(self, small: FieldSpec, big: FieldSpec):
        if not (small.is_finite and big.is_finite) or small.p != big.p or big.k % small.k:
            raise FieldError(f"no embedding {small} -> {big}")
        self.small = small
        self.big = big
        self._powers: list[FieldElement] | None = None
        self._solver = None
        if small.kind == EXTENSION:
            mod = UniPoly(big, small.modulus)
            r = roots(mod)[0]
            self._powers = [r**i for i in range(small.k)]

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field == self.big:
            return x
        if x.field != self.small:
            raise FieldError(f"{x.field} element passed to embedding of {self.small}")
        if self._powers is None:
            return self.big(int(x))
        acc = self.big.zero
        for c, rp in zip(x.value, self._powers):
            if c:
                acc = acc + rp * c
        return acc

    def preimage(self, y: FieldElement) -> FieldElement:
        """Inverse image; raises FieldError when y is not in the image."""
        if y.field == self.small:
            return y
        if self._powers is None:
            if not y.in_prime_field():
                raise FieldError(f"{y!r} does not lie in {self.small}")
            return self.small(y.value[0] if self.big.kind == EXTENSION else y.value)
        fp = GF(self.small.p)
        if self._solver is None:
            cols = [list(rp.value) for rp in self._powers]
            self._solver = linalg.transpose([[fp(c) for c in col] for col in cols])
        sol = linalg.solve(self._solver, [fp(c) for c in y.value])
        if sol is None:
            raise FieldError(f"{y!r} does not lie in {self.small}")
        return FieldElement(self.small, tuple(int(c) for c in sol))


@lru_cache(maxsize=None)
def embedding(small: FieldSpec, big: FieldSpec) -> Embedding:
    return Embedding(small, big)


def extension(field: FieldSpec, m: int) -> FieldSpec:
    """The canonical field of degree m over ``field`` (as an extension of F_p)."""
    if not field.is_finite:
        raise FieldError("the rationals have no canonical finite extension")
    return GF(field.p, field.k * m)


def extension_with_points(field: FieldSpec, count: int, projective: bool = False) -> FieldSpec:
    """Smallest extension of ``field`` with at least ``count`` elements (or P^1 points)."""
    if not field.is_finite:
        return field
    m = 1
    while True:
        size = field.order**m + (1 if projective else 0)
        if size >= count:
            return extension(field, m)
        m += 1


def lift(x: FieldElement, big: FieldSpec) -> FieldElement:
    return embedding(x.field, big)(x)


def descend(y: FieldElement, small: FieldSpec) -> FieldElement:
    return embedding(small, y.field).preimage(y)
