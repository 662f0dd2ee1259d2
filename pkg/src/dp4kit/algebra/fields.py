"""Exact scalar fields: the rationals, prime fields F_p and extensions F_{p^k}.

Elements of F_{p^k} are coefficient tuples ``(c_0, ..., c_{k-1})`` of a
polynomial in the generator ``x`` reduced modulo the field's modulus.  The
modulus is the lexicographically smallest monic irreducible of degree ``k``
(coefficients compared from the constant term upwards), so every field tower
built here is reproducible.

Characteristic two is rejected everywhere.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

RATIONALS = "rationals"
PRIME = "prime-field"
EXTENSION = "extension-field"


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- tiny helpers on int lists (low-to-high) over F_p, used for the modulus search


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    inv = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m, p)


def _ppowx(e: int, m: list[int], p: int) -> list[int]:
    """x^e mod m."""
    result = [1]
    base = _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_mod_p(f: list[int], p: int) -> bool:
    """Rabin's test for a monic ``f`` (low-to-high ints) over F_p."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    xq = _ppowx(p**k, f, p)
    if _trim([(c - d) % p for c, d in itertools.zip_longest(xq, [0, 1], fillvalue=0)]):
        return False
    for r in _prime_factors(k):
        h = _ppowx(p ** (k // r), f, p)
        h = [(c - d) % p for c, d in itertools.zip_longest(h, [0, 1], fillvalue=0)]
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over F_p."""
    for low in itertools.product(range(p), repeat=k):
        f = list(low) + [1]
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible of degree {k} over F_{p}")  # unreachable


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int | None = None
    k: int = 1
    modulus: tuple[int, ...] | None = None

    # -- descriptors

    @property
    def is_finite(self) -> bool:
        return self.kind != RATIONALS

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == RATIONALS else self.p

    @property
    def order(self) -> int:
        if self.kind == RATIONALS:
            raise FieldError("the rationals are infinite")
        return self.p**self.k

    def __str__(self) -> str:
        if self.kind == RATIONALS:
            return "QQ"
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    __repr__ = __str__

    def to_json(self) -> dict:
        if self.kind == RATIONALS:
            return {"rationals": True}
        return {"p": self.p, "k": self.k}

    # -- element construction

    def __call__(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field == self:
                return x
            if x.field.kind == PRIME and self.kind == EXTENSION and x.field.p == self.p:
                return FieldElement(self, self._from_int(x.value))
            raise FieldError(f"cannot coerce {x.field} element into {self}")
        return FieldElement(self, self._coerce(x))

    def _from_int(self, n: int):
        if self.kind == RATIONALS:
            return Fraction(n)
        if self.kind == PRIME:
            return n % self.p
        return (n % self.p,) + (0,) * (self.k - 1)

    def _coerce(self, x):
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self._from_int(x)
        if isinstance(x, Fraction):
            if self.kind == RATIONALS:
                return x
            num = self._from_int(x.numerator)
            den = self._from_int(x.denominator)
            if self._is_zero(den):
                raise ZeroDivisionError(f"denominator vanishes in {self}")
            return self._mul(num, self._inv(den))
        if isinstance(x, str):
            return self._parse(x)
        if isinstance(x, (tuple, list)) and self.kind == EXTENSION:
            if len(x) > self.k:
                raise FieldError("too many coordinates for extension element")
            return tuple(int(c) % self.p for c in x) + (0,) * (self.k - len(x))
        raise FieldError(f"cannot coerce {x!r} into {self}")

    def _parse(self, s: str):
        s = s.strip()
        if self.kind == EXTENSION and s.startswith("["):
            return self._coerce([int(c) for c in s.strip("[]").split(",") if c.strip()])
        return self._coerce(Fraction(s))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, self._from_int(0))

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, self._from_int(1))

    @property
    def gen(self) -> "FieldElement":
        """The class of x in F_p[x]/(modulus); 1 for prime fields."""
        if self.kind == EXTENSION:
            return FieldElement(self, (0, 1) + (0,) * (self.k - 2))
        return self.one

    def from_index(self, i: int) -> "FieldElement":
        if self.kind == PRIME:
            return FieldElement(self, i % self.p)
        if self.kind == EXTENSION:
            digits = []
            for _ in range(self.k):
                i, d = divmod(i, self.p)
                digits.append(d)
            return FieldElement(self, tuple(digits))
        raise FieldError("rationals are not enumerable")

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.order):
            yield self.from_index(i)

    def random(self, rng: random.Random, nonzero: bool = False) -> "FieldElement":
        if self.kind == RATIONALS:
            while True:
                v = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                if v or not nonzero:
                    return FieldElement(self, v)
        lo = 1 if nonzero else 0
        return self.from_index(rng.randrange(lo, self.order))

    # -- raw arithmetic on canonical values

    def _is_zero(self, a) -> bool:
        if self.kind == EXTENSION:
            return not any(a)
        return a == 0

    def _add(self, a, b):
        if self.kind == PRIME:
            return (a + b) % self.p
        if self.kind == EXTENSION:
            p = self.p
            return tuple((x + y) % p for x, y in zip(a, b))
        return a + b

    def _sub(self, a, b):
        if self.kind == PRIME:
            return (a - b) % self.p
        if self.kind == EXTENSION:
            p = self.p
            return tuple((x - y) % p for x, y in zip(a, b))
        return a - b

    def _neg(self, a):
        if self.kind == PRIME:
            return -a % self.p
        if self.kind == EXTENSION:
            return tuple(-x % self.p for x in a)
        return -a

    def _mul(self, a, b):
        if self.kind == PRIME:
            return a * b % self.p
        if self.kind == RATIONALS:
            return a * b
        if self.order <= LOG_TABLE_LIMIT:
            exp, log = _log_tables(self.p, self.k, self.modulus)
            la, lb = log.get(a), log.get(b)
            if la is None or lb is None:
                return (0,) * self.k
            return exp[(la + lb) % len(exp)]
        return _ext_mul(self.p, self.k, self.modulus, a, b)

    def _inv(self, a):
        if self._is_zero(a):
            raise ZeroDivisionError(f"division by zero in {self}")
        if self.kind == PRIME:
            return pow(a, self.p - 2, self.p)
        if self.kind == RATIONALS:
            return 1 / a
        if self.order <= LOG_TABLE_LIMIT:
            exp, log = _log_tables(self.p, self.k, self.modulus)
            return exp[-log[a] % len(exp)]
        return self._pow(a, self.order - 2)

    def _pow(self, a, e: int):
        if e < 0:
            return self._pow(self._inv(a), -e)
        if self.kind == PRIME:
            return pow(a, e, self.p)
        if self.kind == RATIONALS:
            return a**e
        result = self._from_int(1)
        while e:
            if e & 1:
                result = self._mul(result, a)
            a = self._mul(a, a)
            e >>= 1
        return result


@lru_cache(maxsize=None)
def _reduction_table(p: int, k: int, modulus: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    # row j holds x^(k+j) mod modulus, for j = 0..k-2
    rows = []
    cur = [(-c) % p for c in modulus[:k]]
    for _ in range(k - 1):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [(c - top * m) % p for c, m in zip(cur, modulus[:k])]
    return tuple(rows)


LOG_TABLE_LIMIT = 1 << 16


@lru_cache(maxsize=None)
def _log_tables(p: int, k: int, modulus: tuple[int, ...]):
    """Discrete exp list and log dict for a small extension field."""
    q = p**k
    n = q - 1
    factors = _prime_factors(n)
    one = (1,) + (0,) * (k - 1)

    def power(a, e):
        out = one
        while e:
            if e & 1:
                out = _ext_mul(p, k, modulus, out, a)
            a = _ext_mul(p, k, modulus, a, a)
            e >>= 1
        return out

    for idx in range(1, q):
        g = tuple((idx // p**i) % p for i in range(k))
        if all(power(g, n // r) != one for r in factors):
            break
    exp = []
    log = {}
    cur = one
    for e in range(n):
        exp.append(cur)
        log[cur] = e
        cur = _ext_mul(p, k, modulus, cur, g)
    return tuple(exp), log


def _ext_mul(p, k, modulus, a, b):
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    out = prod[:k]
    if k > 1:
        for j, row in enumerate(_reduction_table(p, k, modulus)):
            c = prod[k + j]
            if c:
                for i in range(k):
                    out[i] += c * row[i]
    return tuple(c % p for c in out)


class FieldElement:
    """Immutable element of a :class:`FieldSpec`; equality is canonical-form equality."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mismatched fields {self.field} and {other.field}")
            return other.value
        return self.field._coerce(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field._add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field._sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field._sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field._mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field._mul(self.value, self.field._inv(o)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field._mul(self._other(other), self.field._inv(self.value)))

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field._pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field._inv(self.value))

    def __bool__(self) -> bool:
        return not self.field._is_zero(self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field._coerce(other)
        except (FieldError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def frobenius(self) -> "FieldElement":
        return self ** self.field.characteristic

    def in_prime_field(self) -> bool:
        if self.field.kind == EXTENSION:
            return not any(self.value[1:])
        return True

    def index(self) -> int:
        """Position in :meth:`FieldSpec.elements` (finite fields only)."""
        if self.field.kind == PRIME:
            return self.value
        if self.field.kind == EXTENSION:
            return sum(c * self.field.p**i for i, c in enumerate(self.value))
        raise FieldError("rationals are not enumerable")

    def sort_key(self):
        if self.field.kind == RATIONALS:
            return self.value
        return self.index()

    def to_str(self) -> str:
        if self.field.kind == EXTENSION:
            return "[" + ",".join(str(c) for c in self.value) + "]"
        return str(self.value)

    def __repr__(self) -> str:
        return self.to_str()

    def __int__(self) -> int:
        if self.field.kind == PRIME:
            return self.value
        if self.field.kind == RATIONALS and self.value.denominator == 1:
            return int(self.value)
        if self.field.kind == EXTENSION and self.in_prime_field():
            return self.value[0]
        raise FieldError(f"{self!r} is not an integer")

    def is_square(self) -> bool:
        if not self:
            return True
        if self.field.kind == RATIONALS:
            v = self.value
            return v > 0 and _isqrt_exact(v.numerator) and _isqrt_exact(v.denominator)
        return (self ** ((self.field.order - 1) // 2)) == 1


def _isqrt_exact(n: int) -> bool:
    import math

    r = math.isqrt(n)
    return r * r == n


@lru_cache(maxsize=None)
def _build(kind: str, p: int | None, k: int) -> FieldSpec:
    if kind == RATIONALS:
        return FieldSpec(RATIONALS)
    if p is None or not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if p == 2:
        raise FieldError("characteristic two unsupported")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if kind == PRIME and k != 1:
        raise FieldError("a prime field has k = 1; use extension-field")
    if k == 1:
        return FieldSpec(PRIME, p, 1, None)
    return FieldSpec(EXTENSION, p, k, canonical_modulus(p, k))


def field_build(kind: str, p: int | None = None, k: int = 1) -> FieldSpec:
    """Canonical field for (kind, p, k); extension moduli are chosen deterministically."""
    aliases = {"rationals": RATIONALS, "Q": RATIONALS, "prime": PRIME, "extension": EXTENSION}
    kind = aliases.get(kind, kind)
    if kind not in (RATIONALS, PRIME, EXTENSION):
        raise FieldError(f"unknown field kind {kind!r}")
    return _build(kind, p, k)


def GF(p: int, k: int = 1) -> FieldSpec:
    return field_build(PRIME if k == 1 else EXTENSION, p, k)


QQ = field_build(RATIONALS)


def field_from_json(obj: dict) -> FieldSpec:
    if obj.get("rationals"):
        return QQ
    return GF(int(obj["p"]), int(obj.get("k", 1)))
