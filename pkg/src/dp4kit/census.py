"""Finite-field census of fibration models.

* fiber point counts by exhaustive evaluation;
* exhaustive search for sections of bounded degree;
* common zeros of four quadrics in P^4 (the sixteen base points of the conic
  families of height 20) via multiplication matrices, with an enumeration oracle;
* the degree-one row of the section-parameter table: lines in the quadric
  threefold of a height-10 model meeting the base curve once.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement
from math import lcm
from typing import Sequence

import numpy as np

from .algebra import linalg
from .algebra.binary import BinaryForm, _lift, divide_exact
from .algebra.embeddings import descend, extension, extension_with_points
from .algebra.fields import FieldElement, FieldError, FieldSpec
from .algebra.multipoly import matrix_to_quadric
from .algebra.poly import UniPoly, gcd, interpolate, is_squarefree, roots
from .algebra.tables import VecField, matrix_indices, rref_indices, vec_field
from .fibration.discriminant import discriminant_profile
from .fibration.model import FibrationModel, base_point, fiber_at, fiber_frame
from .fibration.sections import SectionCandidate, section_height, verify_section
from .pencil import canonical_line
from .varieties import check_budget, normalize_point, point_degree, quadric_points, to_elements


# -- fiber point counts


def fiber_point_count(model: FibrationModel, point, k: int = 1, force: bool = False) -> int:
    """#X_t(F_{q^k}) by exhaustive evaluation over P^4(F_{q^k})."""
    E = extension(model.field, k) if k > 1 else model.field
    s, t = base_point(model.field, point)
    if s.field != E:
        if E.k % s.field.k:
            raise FieldError(f"the point lives in {s.field}, which is not a subfield of {E}")
        s, t = _lift(s, E), _lift(t, E)
    P = fiber_at(model, (s, t))
    A, B = P.matrices()
    n = int(quadric_points(E, [A, B], force=force).shape[0])
    q = E.order
    if n % q != 1 % q:
        raise ArithmeticError(f"fiber count {n} is not 1 mod {q}")
    return n


def p1_points(field: FieldSpec) -> list[tuple[FieldElement, FieldElement]]:
    pts = [(field.one, x) for x in field.elements()]
    pts.append((field.zero, field.one))
    return pts


# -- section search


@dataclass
class SearchStats:
    degree: int
    naive_space: int
    reduced_dim: int
    candidates: int
    survivors: int
    sample_points: int

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "naiveSpace": self.naive_space,
            "constrainedDim": self.reduced_dim,
            "candidates": self.candidates,
            "survivors": self.survivors,
            "samplePoints": self.sample_points,
        }


@dataclass
class SectionSearchResult:
    field: FieldSpec
    sections: list
    stats: list

    def to_json(self, model: FibrationModel | None = None) -> dict:
        out = []
        for s in self.sections:
            entry = s.to_json()
            if model is not None:
                entry["height"] = section_height(model, s, verify=False)
            out.append(entry)
        return {"field": self.field.to_json(), "sections": out, "search": [s.to_json() for s in self.stats]}


def _linear_constraints(model: FibrationModel, d: int, E: FieldSpec) -> list[list[FieldElement]]:
    """Rows expressing L_k(s, t, x(s, t)) = 0 on the coefficients c_(i, j) of x_i = sum_j c_ij s^(d-j) t^j."""
    n = model.N + 1
    nc = n * (d + 1)
    rows = []
    for L in model.linear:
        block = [[E.zero] * nc for _ in range(d + 2)]
        for e, c in L.terms.items():
            l = next(i for i in range(n) if e[2 + i])
            cE = _lift(c, E)
            for j in range(d + 1):
                r = e[1] + j
                block[r][l * (d + 1) + j] = block[r][l * (d + 1) + j] + cE
        rows.extend(block)
    return rows


def _projective_blocks(m: int, Q: int, chunk: int):
    """Chunks of P^(m-1)(F_Q) as index arrays, first nonzero coordinate equal to 1."""
    for lead in range(m):
        tail = m - lead - 1
        total = Q**tail
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            block = np.zeros((idx.size, m), dtype=np.int64)
            block[:, lead] = 1
            rest = idx.copy()
            for c in range(m - 1, lead, -1):
                block[:, c] = rest % Q
                rest //= Q
            yield block


def _vec_matmul(vf: VecField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Index-matrix product over the field: (K x m) @ (m x n)."""
    if vf.prime:
        return (A @ B) % vf.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for r in range(A.shape[1]):
        out = vf.add(out, vf.mul(A[:, r][:, None], B[r][None, :]))
    return out


def _sample_points(E: FieldSpec, count: int) -> tuple[FieldSpec, list]:
    S = extension_with_points(E, count, projective=True)
    pts = [(S.one, S.from_index(i)) for i in range(min(count, S.order))]
    if len(pts) < count:
        pts.append((S.zero, S.one))
    return S, pts


def _search_degree(model: FibrationModel, d: int, E: FieldSpec, threads: int, force: bool, chunk: int):
    n = model.N + 1
    nc = n * (d + 1)
    cons = _linear_constraints(model, d, E)
    basis = linalg.nullspace(cons, nc) if cons else [
        [E.one if i == j else E.zero for i in range(nc)] for j in range(nc)
    ]
    m = len(basis)
    Q = E.order
    count = (Q**m - 1) // (Q - 1) if m else 0
    max_twist = max(q.twist for q in model.quadrics)
    nsamples = max(2 * d + 3, max_twist + 2 * d + 1)
    check_budget(count * nsamples * 2 * 25, f"section search of degree {d} over {E}", force)
    stats = SearchStats(d, Q**nc, m, count, 0, nsamples)
    if not m:
        return [], stats
    S, samples = _sample_points(E, nsamples)
    vfE = vec_field(E)
    vfS = vec_field(S)
    Bidx = np.array([[x.index() for x in row] for row in basis], dtype=np.int64)
    lift_table = np.array([_lift(E.from_index(i), S).index() for i in range(Q)], dtype=np.int64)
    prepared = []
    for s, t in samples:
        fr = fiber_frame(model, (s, t))
        P = fiber_at(model, (s, t))
        mats = [matrix_indices(M) for M in P.matrices()]
        mon = [(s ** (d - j) * t**j).index() for j in range(d + 1)]
        prepared.append((fr.free, mats, mon))

    def run(block: np.ndarray) -> np.ndarray:
        X = _vec_matmul(vfE, block, Bidx)
        XS = lift_table[X]
        keep = np.ones(X.shape[0], dtype=bool)
        for free, mats, mon in prepared:
            if not keep.any():
                break
            vals = np.zeros((X.shape[0], n), dtype=np.int64)
            for i in range(n):
                acc = np.zeros(X.shape[0], dtype=np.int64)
                for j in range(d + 1):
                    acc = vfS.add(acc, vfS.scalar_mul(mon[j], XS[:, i * (d + 1) + j]))
                vals[:, i] = acc
            xf = vals[:, list(free)]
            for M in mats:
                keep &= vfS.quadratic_form(M, xf) == 0
        return X[keep]

    blocks = list(_projective_blocks(m, Q, chunk))
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    survivors = np.concatenate(parts, axis=0) if parts else np.zeros((0, nc), dtype=np.int64)
    stats.survivors = int(survivors.shape[0])
    found = []
    for row in survivors:
        coeffs = [E.from_index(int(v)) for v in row]
        forms = tuple(BinaryForm(E, coeffs[i * (d + 1) : (i + 1) * (d + 1)]) for i in range(n))
        cand = SectionCandidate(forms)
        if not cand.is_content_free():
            continue
        cand = cand.canonical()
        if verify_section(model, cand).ok:
            found.append(cand)
    return found, stats


def section_search(
    model: FibrationModel,
    d: int,
    k: int = 1,
    threads: int = 1,
    force: bool = False,
    chunk: int = 1 << 15,
) -> SectionSearchResult:
    """All sections of degree <= d over F_{q^k}, one canonical representative each, sorted.

    The (1, 1)-forms are linear in the coefficients, so the search runs over their
    common solution space; every candidate is pruned by evaluating the quadratic
    forms at sample points of P^1 and survivors are re-verified by exact substitution.
    """
    if d < 0:
        raise ValueError("degree bound must be non-negative")
    E = extension(model.field, k) if k > 1 else model.field
    sections, stats = [], []
    for dd in range(d + 1):
        found, st = _search_degree(model, dd, E, threads, force, chunk)
        sections.extend(found)
        stats.append(st)
    sections = sorted(set(sections), key=lambda c: (c.degree, c.sort_key()))
    return SectionSearchResult(E, sections, stats)


# -- census report


@dataclass
class CensusReport:
    model_height: int
    field: FieldSpec
    k: int
    fiber_counts: list  # (point, count, singular)
    search: SectionSearchResult | None
    model: FibrationModel
    timing: dict = dc_field(default_factory=dict)

    def to_json(self, with_timing: bool = False) -> dict:
        out = {
            "schema": "dp4kit/1",
            "kind": "census",
            "height": self.model_height,
            "field": self.field.to_json(),
            "countField": extension(self.field, self.k).to_json() if self.k > 1 else self.field.to_json(),
            "fiberCounts": [
                {"t": _point_str(p), "count": c, "singular": sing} for p, c, sing in self.fiber_counts
            ],
        }
        if self.search is not None:
            out.update(self.search.to_json(self.model))
        if with_timing:
            out["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return out

    def tsv(self) -> str:
        lines = ["t\tcount\tsingular"]
        for p, c, sing in self.fiber_counts:
            lines.append(f"{_point_str(p)}\t{c}\t{int(sing)}")
        return "\n".join(lines) + "\n"


def _point_str(p) -> str:
    s, t = p
    return "inf" if not s else t.to_str()


def census(
    model: FibrationModel,
    deg: int | None = 1,
    k: int = 1,
    threads: int = 1,
    force: bool = False,
    counts: bool = True,
) -> CensusReport:
    timing = {}
    rows = []
    if counts:
        t0 = time.perf_counter()
        prof = discriminant_profile(model)
        for p in p1_points(model.field):
            c = fiber_point_count(model, p, k, force)
            sing = (not prof.is_zero) and not prof.form(*p)
            rows.append((p, c, sing))
        timing["counts"] = time.perf_counter() - t0
    search = None
    if deg is not None:
        t0 = time.perf_counter()
        search = section_search(model, deg, 1, threads, force)
        timing["search"] = time.perf_counter() - t0
    return CensusReport(model.height, model.field, k, rows, search, model, timing)


# -- common zeros of four quadrics in P^4

SEPARATION_FIELD_ORDER = 1000


def _monomials(n: int, D: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(n), D):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


class _QuotientRing:
    """Normal forms in degrees D-1 and D of F[x] / (quadrics), by Macaulay matrices."""

    def __init__(self, field: FieldSpec, quadrics: Sequence, D: int):
        self.field = field
        self.vf = vec_field(field)
        self.n = len(quadrics[0])
        vars = [f"x{i}" for i in range(self.n)]
        self.terms = [matrix_to_quadric(M, field, vars).terms for M in quadrics]
        self.low = self._reduce(D - 1)
        self.high = self._reduce(D)

    def _reduce(self, D: int) -> dict:
        mons = _monomials(self.n, D)
        pos = {m: i for i, m in enumerate(mons)}
        rows = []
        for terms in self.terms:
            for mult in _monomials(self.n, D - 2):
                row = np.zeros(len(mons), dtype=np.int64)
                for e, c in terms.items():
                    row[pos[tuple(a + b for a, b in zip(e, mult))]] = c.index()
                rows.append(row)
        R, piv = rref_indices(self.vf, np.array(rows))
        pivset = set(piv)
        return {
            "mons": mons,
            "pos": pos,
            "R": R[: len(piv)],
            "piv": piv,
            "std": [i for i in range(len(mons)) if i not in pivset],
        }

    def dim(self, which: str) -> int:
        return len(getattr(self, which)["std"])

    def multiplication_matrix(self, linear: Sequence[FieldElement]) -> list[list[FieldElement]]:
        """Matrix of f -> l * f from degree D-1 to degree D, columns indexed by standard monomials."""
        L, H = self.low, self.high
        vf = self.vf
        vecs = np.zeros((len(L["std"]), len(H["mons"])), dtype=np.int64)
        for col, idx in enumerate(L["std"]):
            base = L["mons"][idx]
            for i, c in enumerate(linear):
                if c:
                    m = list(base)
                    m[i] += 1
                    j = H["pos"][tuple(m)]
                    vecs[col, j] = int(vf.add(np.int64(vecs[col, j]), np.int64(c.index())))
        red = vf.sub(vecs, _vec_matmul(vf, vecs[:, H["piv"]], H["R"]))
        nf = red[:, H["std"]]
        F = self.field
        return [[F.from_index(int(nf[col, r])) for col in range(nf.shape[0])] for r in range(nf.shape[1])]


@dataclass
class BasePoint:
    coords: tuple
    degree: int

    def to_json(self) -> dict:
        return {"coords": [c.to_str() for c in self.coords], "degree": self.degree}


@dataclass
class BasePointReport:
    field: FieldSpec
    k_max: int
    points: list
    multiplicity_free: bool | None
    method: str
    scheme_length: int | None

    def to_json(self) -> dict:
        return {
            "schema": "dp4kit/1",
            "kind": "base-points",
            "field": self.field.to_json(),
            "kmax": self.k_max,
            "count": len(self.points),
            "multiplicityFree": self.multiplicity_free,
            "method": self.method,
            "schemeLength": self.scheme_length,
            "points": [p.to_json() for p in self.points],
        }


def _charpoly(T: list[list[FieldElement]], field: FieldSpec) -> UniPoly:
    """det(x I - T) by evaluation at n + 1 points and interpolation."""
    n = len(T)
    big = extension_with_points(field, n + 1)
    Tb = [[_lift(x, big) for x in row] for row in T] if big != field else T
    xs = [big.from_index(i) for i in range(n + 1)]
    vals = []
    for x in xs:
        M = [[(x if i == j else big.zero) - Tb[i][j] for j in range(n)] for i in range(n)]
        vals.append(linalg.det(M) if n else big.one)
    f = interpolate(xs, vals, "x")
    if big != field:
        f = UniPoly(field, [descend(c, field) for c in f.coeffs], "x")
    return f


def _joint_left_eigenvectors(Ts: list, field: FieldSpec) -> list[list[FieldElement]]:
    """Common left eigenvectors (up to scale) of commuting matrices, eigenvalues in ``field``.

    Left eigenspaces of one operator are preserved by right multiplication with
    the others, so the spaces are split one operator at a time.
    """
    n = len(Ts[0])
    spaces = [linalg.identity(field, n)]
    for T in Ts:
        refined = []
        for K in spaces:
            KT = linalg.matmul(K, T)
            _, piv = linalg.rref(K)
            C = [[row[j] for j in piv] for row in KT]  # K T = C K since K[:, piv] = I
            chi = _charpoly(C, field)
            for lam in sorted(roots(chi), key=lambda x: x.sort_key()):
                r = len(C)
                shifted = [[C[j][i] - (lam if i == j else field.zero) for j in range(r)] for i in range(r)]
                W = linalg.nullspace(shifted, r)
                sub = linalg.matmul(W, K)
                R, p = linalg.rref(sub)
                refined.append(R[: len(p)])
        spaces = refined
    return [K[0] for K in spaces]


def base_points(
    quadrics: Sequence,
    field: FieldSpec,
    k_max: int = 1,
    seed: int = 0,
    force: bool = False,
    tries: int = 4,
) -> BasePointReport:
    """Common zeros of quadrics in P^4 over F_{q^k}, k <= k_max, each listed once.

    For four quadrics cutting out a finite scheme of length 16 the points are the
    joint left eigenvectors of the multiplication operators x_i / h on the
    degree-4 part of the quotient ring.  Otherwise the points are enumerated.
    """
    if not field.is_finite:
        raise FieldError("base points are computed over finite fields")
    quadrics = [[[field(x) for x in row] for row in M] for M in quadrics]
    n = len(quadrics[0])
    ring = _QuotientRing(field, quadrics, 5) if (n == 5 and len(quadrics) == 4) else None
    if ring is None or ring.dim("low") != 16 or ring.dim("high") != 16:
        return _base_points_enumerated(quadrics, field, k_max, force)
    rng = random.Random(seed)
    K = lcm(*range(1, k_max + 1))
    while field.order**K < SEPARATION_FIELD_ORDER:
        K *= 2
    L = extension(field, K) if K > 1 else field
    unit = [[field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    Ms = [[[_lift(x, L) for x in row] for row in ring.multiplication_matrix(u)] for u in unit]
    Mh_inv = None
    for _ in range(64):
        h = [L.random(rng) for _ in range(n)]
        Mh = linalg.zeros(L, 16)
        for c, M in zip(h, Ms):
            Mh = linalg.add(Mh, linalg.scale(c, M))
        if linalg.det(Mh):
            Mh_inv = linalg.inverse(Mh)
            break
    if Mh_inv is None:
        raise ArithmeticError("no linear form avoiding the base points was found")
    Ts = [linalg.matmul(Mh_inv, M) for M in Ms]
    pts = []
    for v in _joint_left_eigenvectors(Ts, L):
        j0 = next(j for j in range(16) if v[j])
        coords = [linalg.matvec(linalg.transpose(T), v)[j0] / v[j0] for T in Ts]
        pt = normalize_point(coords)
        if any(linalg.quadratic([[_lift(x, L) for x in row] for row in M], list(pt)) for M in quadrics):
            raise ArithmeticError("a joint eigenvector does not give a common zero")
        deg = point_degree(pt, field)
        if deg <= k_max:
            Ek = extension(field, deg) if deg > 1 else field
            pts.append(BasePoint(tuple(descend(c, Ek) for c in pt), deg))
    pts.sort(key=lambda p: (p.degree, tuple(c.sort_key() for c in p.coords)))
    return BasePointReport(field, k_max, pts, _multiplicity_free(Ts, L, rng, tries), "multiplication-matrix", 16)


def _multiplicity_free(Ts: list, L: FieldSpec, rng: random.Random, tries: int) -> bool:
    """Reduced iff some combination of the operators has squarefree characteristic polynomial.

    A squarefree characteristic polynomial proves reducedness.  The working field
    has at least SEPARATION_FIELD_ORDER elements, so a random combination
    separates sixteen distinct points with high probability; repeated failures
    are reported as a multiple point.
    """
    for _ in range(tries):
        c = [L.random(rng) for _ in Ts]
        T = linalg.zeros(L, 16)
        for ci, Ti in zip(c, Ts):
            T = linalg.add(T, linalg.scale(ci, Ti))
        if is_squarefree(_charpoly(T, L)):
            return True
    return False


def _base_points_enumerated(quadrics, field, k_max, force) -> BasePointReport:
    pts = []
    for k in range(1, k_max + 1):
        E = extension(field, k) if k > 1 else field
        mats = [[[_lift(x, E) for x in row] for row in M] for M in quadrics]
        for row in to_elements(E, quadric_points(E, mats, force=force)):
            if point_degree(row, field) == k:
                pts.append(BasePoint(tuple(row), k))
    return BasePointReport(field, k_max, pts, None, "enumeration", None)


def base_points_brute_force(quadrics, field: FieldSpec, k: int = 1, force: bool = False) -> list[tuple]:
    """Oracle: all common zeros over F_{q^k} by exhaustive enumeration."""
    E = extension(field, k) if k > 1 else field
    mats = [[[_lift(field(x), E) for x in row] for row in M] for M in quadrics]
    return [tuple(r) for r in to_elements(E, quadric_points(E, mats, force=force))]


def split_height20_quadrics(field: FieldSpec) -> list:
    """P1 = x1^2 - x0^2, Q1 = x2^2 - x0^2, P2 = x3^2 - x0^2, Q2 = x4^2 - x0^2."""
    out = []
    for i in range(1, 5):
        M = linalg.zeros(field, 5)
        M[0][0] = -field.one
        M[i][i] = field.one
        out.append(M)
    return out


def nodal_quartic_gradient_vanishes(quadrics, point) -> bool:
    """Does the gradient of P1 Q2 - Q1 P2 vanish at the point?  Quadrics ordered P1, Q1, P2, Q2."""
    field = quadrics[0][0][0].field
    vars = [f"x{i}" for i in range(5)]
    P1, Q1, P2, Q2 = (matrix_to_quadric(M, field, vars) for M in quadrics)
    Y = P1 * Q2 - Q1 * P2
    return all(not Y.derivative(i)(*point) for i in range(5))


# -- lines in the quadric threefold of a height-10 model


@dataclass
class LineIncidence:
    rows: tuple
    meets_curve: int  # geometric number of intersection points with C, 2 if the line lies in a fiber
    kind: str  # "section", "bisection", "fiber"
    section: SectionCandidate | None
    verified: bool

    def to_json(self) -> dict:
        out = {
            "line": [[c.to_str() for c in r] for r in self.rows],
            "meetsCurve": self.meets_curve,
            "kind": self.kind,
            "verified": self.verified,
        }
        if self.section is not None:
            out["section"] = self.section.to_json()
            out["secancy"] = self.meets_curve
        return out


@dataclass
class Figure1Check:
    field: FieldSpec
    lines: int
    sections: list
    bisections: int
    fiber_lines: int

    @property
    def all_verified(self) -> bool:
        return all(s.verified for s in self.sections)

    def to_json(self) -> dict:
        return {
            "schema": "dp4kit/1",
            "kind": "figure1-d1",
            "field": self.field.to_json(),
            "linesInQ": self.lines,
            "sectionLines": len(self.sections),
            "bisectionLines": self.bisections,
            "fiberLines": self.fiber_lines,
            "allVerified": self.all_verified,
            "secancy": sorted({s.meets_curve for s in self.sections}),
            "sections": [s.to_json() for s in self.sections],
        }


def lines_in_quadric(field: FieldSpec, M, force: bool = False) -> list:
    """All F_q-lines in the quadric {x^T M x = 0} of P^4, as canonical Line objects."""
    vf = vec_field(field)
    idx = matrix_indices(M)
    pts = quadric_points(field, [M], force=force)
    check_budget(pts.shape[0] ** 2, "line enumeration", force)
    out = {}
    for a in range(pts.shape[0]):
        p = pts[a]
        Bp = vf.bilinear_form(idx, np.repeat(p[None, :], pts.shape[0], axis=0), pts)
        for b in np.nonzero(Bp == 0)[0]:
            if b <= a:
                continue
            pe = [field.from_index(int(v)) for v in p]
            re = [field.from_index(int(v)) for v in pts[b]]
            line = canonical_line(pe, re)
            out.setdefault(line.key, line)
    return [out[k] for k in sorted(out)]


def figure1_d1_check(model: FibrationModel, force: bool = False) -> Figure1Check:
    """Degree-one sections of a height-10 model X = Bl_C(Q) from lines of Q meeting C once.

    The model must be case 1 odd n = 0: Q has twist 0 and the other form is s A + t B.
    A line l of Q maps to P^1 by (s : t) = (B : -A) restricted to l; after removing
    the common zeros of A|_l and B|_l (the points of l on C) the map has degree 1
    exactly when l meets C once, and then l lifts to a section.
    """
    spec = model.spec
    if spec is None or (spec.case, spec.parity, spec.n) != (1, "odd", 0):
        raise ValueError("the line-incidence check needs a case 1 odd n = 0 model")
    F = model.field
    Qf = next(q for q in model.quadrics if q.twist == 0)
    Pf = next(q for q in model.quadrics if q.twist == 1)
    Qm = [[(Qf.entry(i, j).coeffs[0]) for j in range(5)] for i in range(5)]
    A = [[Pf.entry(i, j).coeffs[0] for j in range(5)] for i in range(5)]
    B = [[Pf.entry(i, j).coeffs[1] for j in range(5)] for i in range(5)]
    lines = lines_in_quadric(F, Qm, force)
    sections = []
    bis = fib = 0
    for line in lines:
        p, r = line.rows
        a = BinaryForm(F, [linalg.quadratic(A, p), linalg.bilinear(A, p, r) * 2, linalg.quadratic(A, r)])
        b = BinaryForm(F, [linalg.quadratic(B, p), linalg.bilinear(B, p, r) * 2, linalg.quadratic(B, r)])
        if linalg.rank([list(a.coeffs), list(b.coeffs)]) < 2:
            fib += 1
            continue
        g = _common_degree(a, b)
        if g == 0:
            bis += 1
            continue
        # g == 1: divide out the common linear factor
        a1, b1 = _strip_common_linear(a, b)
        # s a1 + t b1 = 0 with a1 = a0 l + a1' m, b1 = b0 l + b1' m:
        # (l : m) = (s a1' + t b1' : -(s a0 + t b0))
        lam = BinaryForm(F, [a1.coeffs[1], b1.coeffs[1]])
        mu = -BinaryForm(F, [a1.coeffs[0], b1.coeffs[0]])
        forms = tuple(lam * pc + mu * rc for pc, rc in zip(p, r))
        sec = SectionCandidate(forms)
        ok = sec.is_content_free() and verify_section(model, sec).ok
        sections.append(LineIncidence(tuple(line.rows), 1, "section", sec.canonical() if ok else sec, ok))
    return Figure1Check(F, len(lines), sections, bis, fib)


def _common_degree(a: BinaryForm, b: BinaryForm) -> int:
    """Number of common zeros on P^1, for nonzero forms that are not proportional."""
    inf = min(a.multiplicity_at_infinity(), b.multiplicity_at_infinity())
    return gcd(a.dehomogenize(), b.dehomogenize()).degree + inf


def _strip_common_linear(a: BinaryForm, b: BinaryForm) -> tuple[BinaryForm, BinaryForm]:
    """Divide two binary quadratics by their common linear factor."""
    F = a.field
    if a.multiplicity_at_infinity() and b.multiplicity_at_infinity():
        lin = BinaryForm(F, [1, 0])  # s vanishes at (0 : 1)
    else:
        r = -gcd(a.dehomogenize(), b.dehomogenize()).monic().coeffs[0]
        lin = BinaryForm(F, [r, -F.one])  # r s - t vanishes at (1 : r)
    qa, qb = divide_exact(a, lin), divide_exact(b, lin)
    if qa is None or qb is None:
        raise ArithmeticError("common factor did not divide")
    return qa, qb
