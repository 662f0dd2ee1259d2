"""Point enumeration on intersections of quadrics over finite fields.

Points are returned as numpy index arrays (rows normalized so the first nonzero
coordinate is 1, sorted lexicographically).  The enumeration walks the points
of P^(n-2) in the first n-1 coordinates and solves for the last coordinate,
which turns the q^(n-1) scan into q^(n-2) vectorized steps.
"""

from __future__ import annotations

import os

import numpy as np

from .algebra.fields import FieldElement, FieldSpec
from .algebra.tables import VecField, matrix_indices, vec_field

DEFAULT_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    """Raised when a search would exceed the evaluation budget."""

    def __init__(self, message: str, estimate: int, budget: int):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


def evaluation_budget() -> int:
    raw = os.environ.get("DP4KIT_BUDGET")
    if raw:
        return int(float(raw))
    return DEFAULT_BUDGET


def check_budget(estimate: int, what: str, force: bool = False, budget: int | None = None):
    budget = evaluation_budget() if budget is None else budget
    if estimate > budget and not force:
        raise BudgetExceeded(
            f"{what}: estimated {estimate:.3g} evaluations exceeds budget {budget:.3g} (use --force)",
            estimate,
            budget,
        )


def quadric_points(
    field: FieldSpec,
    matrices: list,
    force: bool = False,
    chunk: int = 1 << 18,
) -> np.ndarray:
    """All F-points of the common zero locus of symmetric matrices in P^(n-1).

    ``matrices`` hold FieldElements of ``field`` (or a subfield that coerces).
    """
    vf = vec_field(field)
    n = len(matrices[0])
    q = field.order
    check_budget(q ** (n - 2) * len(matrices) * n * n, f"point enumeration over {field}", force)
    mats = [matrix_indices([[field(x) if x.field != field else x for x in row] for row in m]) for m in matrices]
    found = []
    base = vf.projective_points(n - 1)
    for start in range(0, base.shape[0], chunk):
        y = base[start : start + chunk]
        found.append(_solve_last_coordinate(vf, mats, y))
    # the point (0:...:0:1)
    if all(m[n - 1][n - 1] == 0 for m in mats):
        e = np.zeros((1, n), dtype=np.int64)
        e[0, n - 1] = 1
        found.append(e)
    pts = np.concatenate(found, axis=0) if found else np.zeros((0, n), dtype=np.int64)
    if pts.shape[0]:
        order = np.lexsort(pts.T[::-1])
        pts = pts[order]
    return pts


def _parts(vf: VecField, mat, y):
    """a, b(y), c(y) with Q(y, z) = a z^2 + b z + c."""
    n = len(mat)
    m = n - 1
    a = mat[m][m]
    two = vf.field(2).index()
    b_coeffs = [vf.field.from_index(mat[j][m]).index() for j in range(m)]
    b = vf.scalar_mul(two, vf.dot(b_coeffs, [y[:, j] for j in range(m)]))
    sub = [row[:m] for row in mat[:m]]
    c = vf.quadratic_form(sub, y)
    return a, b, c


def _solve_last_coordinate(vf: VecField, mats, y: np.ndarray) -> np.ndarray:
    n = len(mats[0])
    N = y.shape[0]
    parts = [_parts(vf, m, y) for m in mats]
    lead = next((i for i, (a, _, _) in enumerate(parts) if a), None)
    # Linear equations in z: L_i = b_i z + c_i.
    lin = []
    if lead is None:
        lin = [(b, c) for _, b, c in parts]
        quad = None
    else:
        a0, b0, c0 = parts[lead]
        for i, (a, b, c) in enumerate(parts):
            if i == lead:
                continue
            # a0 * Q_i - a * Q_0 kills z^2
            bb = vf.sub(vf.scalar_mul(a0, b), vf.scalar_mul(a, b0))
            cc = vf.sub(vf.scalar_mul(a0, c), vf.scalar_mul(a, c0))
            lin.append((bb, cc))
        quad = parts[lead]
    z = np.zeros(N, dtype=np.int64)
    determined = np.zeros(N, dtype=bool)
    inconsistent = np.zeros(N, dtype=bool)
    for b, c in lin:
        new = (~determined) & (b != 0)
        if new.any():
            safe_b = np.where(new, b, 1)
            z = np.where(new, vf.neg(vf.mul(c, vf.inv(safe_b))), z)
            determined |= new
        inconsistent |= (b == 0) & (c != 0)
    rows = []
    # rows with a determined z: verify every quadric
    cand = determined & ~inconsistent
    if cand.any():
        yy = y[cand]
        zz = z[cand]
        pts = np.concatenate([yy, zz[:, None]], axis=1)
        ok = np.ones(pts.shape[0], dtype=bool)
        for m in mats:
            ok &= vf.quadratic_form(m, pts) == 0
        rows.append(pts[ok])
    # rows where every linear equation vanishes identically: scan z
    free = ~determined & ~inconsistent
    if free.any():
        yy = y[free]
        q = vf.q
        zs = np.arange(q, dtype=np.int64)
        rep_y = np.repeat(yy, q, axis=0)
        rep_z = np.tile(zs, yy.shape[0])
        pts = np.concatenate([rep_y, rep_z[:, None]], axis=1)
        ok = np.ones(pts.shape[0], dtype=bool)
        check = mats if quad is None else [mats[lead]]
        for m in check:
            ok &= vf.quadratic_form(m, pts) == 0
        rows.append(pts[ok])
    if not rows:
        return np.zeros((0, n), dtype=np.int64)
    return np.concatenate(rows, axis=0)


def brute_force_points(field: FieldSpec, matrices: list, force: bool = False) -> np.ndarray:
    """Exhaustive scan of P^(n-1)(F); the oracle for :func:`quadric_points`."""
    vf = vec_field(field)
    n = len(matrices[0])
    check_budget(field.order ** (n - 1) * len(matrices) * n * n, "brute-force scan", force)
    mats = [matrix_indices([[field(x) for x in row] for row in m]) for m in matrices]
    pts = vf.projective_points(n)
    ok = np.ones(pts.shape[0], dtype=bool)
    for m in mats:
        ok &= vf.quadratic_form(m, pts) == 0
    pts = pts[ok]
    if pts.shape[0]:
        pts = pts[np.lexsort(pts.T[::-1])]
    return pts


def to_elements(field: FieldSpec, rows: np.ndarray) -> list[tuple[FieldElement, ...]]:
    return [tuple(field.from_index(int(i)) for i in row) for row in rows]


def element_degree(x: FieldElement, base: FieldSpec) -> int:
    """Degree over ``base`` of the smallest subfield of x.field containing x."""
    k = x.field.k // base.k
    q = base.order
    for d in range(1, k + 1):
        if k % d == 0 and x ** (q**d) == x:
            return d
    return k


def point_degree(pt, base: FieldSpec) -> int:
    from math import lcm

    out = 1
    for c in pt:
        out = lcm(out, element_degree(c, base))
    return out


def normalize_point(pt):
    lead = next(c for c in pt if c)
    inv = lead.inverse()
    return tuple(c * inv for c in pt)
