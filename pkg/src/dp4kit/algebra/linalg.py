"""Dense linear algebra over an exact field.

Matrices are lists of row lists of FieldElement.  Everything is exact Gaussian
elimination; the matrices met here are at most a few hundred columns wide.
"""

from __future__ import annotations

from typing import Sequence

from .fields import FieldElement, FieldSpec

Matrix = list[list[FieldElement]]


def matrix(field: FieldSpec, rows) -> Matrix:
    return [[field(x) for x in row] for row in rows]


def zeros(field: FieldSpec, n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return [[field.zero for _ in range(m)] for _ in range(n)]


def identity(field: FieldSpec, n: int) -> Matrix:
    out = zeros(field, n)
    for i in range(n):
        out[i][i] = field.one
    return out


def diagonal(field: FieldSpec, entries) -> Matrix:
    out = zeros(field, len(entries))
    for i, e in enumerate(entries):
        out[i][i] = field(e)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(a: Matrix, v: Sequence[FieldElement]) -> list[FieldElement]:
    out = []
    for row in a:
        acc = row[0] * v[0]
        for x, y in zip(row[1:], v[1:]):
            acc = acc + x * y
        out.append(acc)
    return out


def congruence(m: Matrix, a: Matrix) -> Matrix:
    """M^T A M."""
    return matmul(matmul(transpose(m), a), m)


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(c, a: Matrix) -> Matrix:
    return [[c * x for x in r] for r in a]


def bilinear(a: Matrix, x: Sequence[FieldElement], y: Sequence[FieldElement]) -> FieldElement:
    return sum((xi * v for xi, v in zip(x, matvec(a, y))), x[0].field.zero)


def quadratic(a: Matrix, x: Sequence[FieldElement]) -> FieldElement:
    return bilinear(a, x, x)


def det(a: Matrix) -> FieldElement:
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    field = a[0][0].field
    m = [list(r) for r in a]
    result = field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        pv = m[c][c]
        result = result * pv
        inv = pv.inverse()
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                row_c = m[c]
                m[r] = [x - f * y if j >= c else x for j, (x, y) in enumerate(zip(m[r], row_c))]
    return result


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (column order as given)."""
    m = [list(r) for r in a]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1]) if a else 0


def nullspace(a: Matrix, ncols: int | None = None) -> list[list[FieldElement]]:
    """Basis of {v : a v = 0}, one vector per free column (free entry = 1)."""
    if not a:
        raise ValueError("nullspace of an empty matrix needs an explicit field")
    ncols = len(a[0]) if ncols is None else ncols
    field = a[0][0].field
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence[FieldElement]) -> list[FieldElement] | None:
    """One solution of a x = b, or None if inconsistent."""
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    field = b[0].field
    x = [field.zero] * ncols
    for row, pc in zip(r, pivots):
        x[pc] = row[-1]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    field = a[0][0].field
    aug = [list(row) + e for row, e in zip(a, identity(field, n))]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def map_matrix(fn, a: Matrix) -> Matrix:
    return [[fn(x) for x in row] for row in a]
