"""Vectorized arithmetic over a finite field on numpy integer arrays.

Elements are encoded by their field index (FieldElement.index()).  Prime fields
use plain modular arithmetic; extension fields use base-p digit tables for
addition and discrete log/exp tables for multiplication.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .fields import EXTENSION, FieldElement, FieldError, FieldSpec

MAX_TABLE_ORDER = 1 << 22


class VecField:
    def __init__(self, field: FieldSpec):
        if not field.is_finite:
            raise FieldError("vectorized arithmetic needs a finite field")
        self.field = field
        self.p = field.p
        self.q = field.order
        self.prime = field.kind != EXTENSION
        if not self.prime:
            if self.q > MAX_TABLE_ORDER:
                raise FieldError(f"{field} is too large for table arithmetic")
            self._build_tables()

    def _build_tables(self):
        f, q, p, k = self.field, self.q, self.p, self.field.k
        idx = np.arange(q, dtype=np.int64)
        digits = np.empty((q, k), dtype=np.int64)
        rest = idx.copy()
        for i in range(k):
            digits[:, i] = rest % p
            rest //= p
        self._digits = digits
        self._weights = p ** np.arange(k, dtype=np.int64)
        g = _primitive_element(f)
        exp = np.empty(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = f.one
        for e in range(q - 1):
            i = cur.index()
            exp[e] = i
            log[i] = e
            cur = cur * g
        self._exp = exp
        self._log = log

    # -- encoding

    def encode(self, x: FieldElement) -> int:
        return x.index()

    def decode(self, i: int) -> FieldElement:
        return self.field.from_index(int(i))

    def array(self, values) -> np.ndarray:
        return np.array([self.field(v).index() for v in values], dtype=np.int64)

    # -- arithmetic

    def add(self, a, b):
        if self.prime:
            return (a + b) % self.p
        s = (self._digits[a] + self._digits[b]) % self.p
        return s @ self._weights

    def neg(self, a):
        if self.prime:
            return (-a) % self.p
        return ((-self._digits[a]) % self.p) @ self._weights

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.prime:
            return (a * b) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def scalar_mul(self, c: int, a):
        if self.prime:
            return (c * a) % self.p
        return self.mul(np.full_like(np.asarray(a), c), a)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in vectorized field")
        if self.prime:
            return _prime_inv_table(self.p)[a]
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def power(self, a, e: int):
        a = np.asarray(a)
        if self.prime:
            out = np.ones_like(a)
            base = a % self.p
            while e:
                if e & 1:
                    out = (out * base) % self.p
                base = (base * base) % self.p
                e >>= 1
            return out
        if e == 0:
            return np.ones_like(a)
        out = self._exp[(self._log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def dot(self, coeffs, arrays):
        """sum_i coeffs[i] * arrays[i] with scalar field-index coefficients."""
        acc = None
        for c, arr in zip(coeffs, arrays):
            if c == 0:
                continue
            term = self.scalar_mul(c, arr)
            acc = term if acc is None else self.add(acc, term)
        if acc is None:
            return np.zeros_like(np.asarray(arrays[0]))
        return acc

    def quadratic_form(self, matrix_idx, x):
        """Evaluate x^T A x for A given as field indices and x an (N, n) index array."""
        n = len(matrix_idx)
        acc = np.zeros(x.shape[0], dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                c = matrix_idx[i][j]
                if c == 0:
                    continue
                if i != j:
                    c = (self.field.from_index(c) * 2).index()
                term = self.scalar_mul(c, self.mul(x[:, i], x[:, j]))
                acc = self.add(acc, term)
        return acc

    def bilinear_form(self, matrix_idx, x, y):
        """x^T A y row-wise for (N, n) index arrays x, y."""
        n = len(matrix_idx)
        acc = np.zeros(x.shape[0], dtype=np.int64)
        for i in range(n):
            for j in range(n):
                c = matrix_idx[i][j]
                if c:
                    acc = self.add(acc, self.scalar_mul(c, self.mul(x[:, i], y[:, j])))
        return acc

    def projective_points(self, n: int) -> np.ndarray:
        """All points of P^(n-1) over the field, normalized with first nonzero coordinate 1.

        Ordered by position of the leading 1, then lexicographically by index.
        """
        blocks = []
        q = self.q
        for lead in range(n):
            tail = n - lead - 1
            count = q**tail
            block = np.zeros((count, n), dtype=np.int64)
            block[:, lead] = 1
            if tail:
                grid = np.indices((q,) * tail).reshape(tail, -1).T
                block[:, lead + 1 :] = grid
            blocks.append(block)
        return np.concatenate(blocks, axis=0)


@lru_cache(maxsize=None)
def _prime_inv_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = pow(a, p - 2, p)
    return t


def _primitive_element(field: FieldSpec) -> FieldElement:
    q = field.order
    n = q - 1
    primes = []
    m, f = n, 2
    while f * f <= m:
        if m % f == 0:
            primes.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        primes.append(m)
    for i in range(1, q):
        g = field.from_index(i)
        if all(g ** (n // r) != 1 for r in primes):
            return g
    raise FieldError("no primitive element")  # unreachable


@lru_cache(maxsize=None)
def vec_field(field: FieldSpec) -> VecField:
    return VecField(field)


def matrix_indices(matrix) -> list[list[int]]:
    return [[x.index() for x in row] for row in matrix]


def normalize_rows(vf: VecField, x: np.ndarray) -> np.ndarray:
    """Scale each row so that its first nonzero entry is 1 (zero rows unchanged)."""
    x = np.asarray(x)
    nz = x != 0
    has = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    lead = x[np.arange(x.shape[0]), first]
    lead = np.where(has, lead, 1)
    inv = vf.inv(lead)
    return np.stack([vf.mul(x[:, j], inv) for j in range(x.shape[1])], axis=1)


def rref_indices(vf: VecField, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an index matrix, with vectorized row operations."""
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = int(vf.inv(np.array([R[r, c]]))[0])
        R[r] = vf.scalar_mul(inv, R[r])
        col = R[:, c].copy()
        col[r] = 0
        if col.any():
            R = vf.sub(R, vf.mul(col[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots
