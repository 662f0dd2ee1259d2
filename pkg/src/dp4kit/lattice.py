"""Picard lattice of a quartic del Pezzo surface and K3 Gram-table arithmetic.

A quartic del Pezzo surface is P^2 blown up in five points, so its Picard group
has basis L, E1..E5 with pairing diag(+1, -1, -1, -1, -1, -1).  A class is
stored as ``(d; m1..m5)`` meaning ``d L - sum m_i E_i``; in this notation the
canonical class -3L + E1 + ... + E5 is ``(-3; -1, -1, -1, -1, -1)`` and the
exceptional curve E1 is ``(0; -1, 0, 0, 0, 0)``.

The orthogonal complement of K is a D5 lattice.  Writing

    f_i = E_i + (L - E1 - ... - E5) / 2,

the f_i are pairwise orthogonal with f_i^2 = -1 and f_i . K = 0, the roots are
the classes +-f_i +- f_j, and W(D5) acts on f-coordinates by signed permutations
with an even number of sign changes.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence


# -- Picard classes


@dataclass(frozen=True, order=True)
class PicClass:
    d: int
    m: tuple[int, ...]

    def __post_init__(self):
        if len(self.m) != 5:
            raise ValueError("a Picard class has five exceptional coordinates")
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))

    @classmethod
    def of(cls, d: int, *m: int) -> "PicClass":
        return cls(d, tuple(m))

    def __add__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.d - other.d, tuple(a - b for a, b in zip(self.m, other.m)))

    def __neg__(self) -> "PicClass":
        return PicClass(-self.d, tuple(-a for a in self.m))

    def __rmul__(self, k: int) -> "PicClass":
        return PicClass(k * self.d, tuple(k * a for a in self.m))

    def vector(self) -> tuple[int, ...]:
        return (self.d,) + self.m

    def label(self) -> str:
        """Readable name such as 'E3', 'L-E1-E2' or '2L-E1-E2-E3-E4-E5'."""
        parts = []
        if self.d:
            parts.append(("" if abs(self.d) == 1 else str(abs(self.d))) + "L")
            if self.d < 0:
                parts[0] = "-" + parts[0]
        for i, mi in enumerate(self.m, 1):
            if mi:
                coef = "" if abs(mi) == 1 else str(abs(mi))
                sign = "-" if mi > 0 else "+"
                parts.append(f"{sign}{coef}E{i}")
        if not parts:
            return "0"
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    def __str__(self) -> str:
        return f"({self.d}; {', '.join(str(x) for x in self.m)})"


L = PicClass.of(1, 0, 0, 0, 0, 0)
K = PicClass.of(-3, -1, -1, -1, -1, -1)


def E(i: int) -> PicClass:
    """Exceptional curve E_i, i = 1..5."""
    m = [0] * 5
    m[i - 1] = -1
    return PicClass(0, tuple(m))


def pic_pairing(a: PicClass, b: PicClass) -> int:
    return a.d * b.d - sum(x * y for x, y in zip(a.m, b.m))


def exceptional_classes() -> list[PicClass]:
    """The 16 classes with C.C = C.K = -1.

    Order: E1..E5, then L - Ei - Ej for i < j lexicographically, then 2L - E1 - ... - E5.
    """
    out = [E(i) for i in range(1, 6)]
    for i, j in itertools.combinations(range(1, 6), 2):
        out.append(L - E(i) - E(j))
    out.append(PicClass.of(2, 1, 1, 1, 1, 1))
    return out


def exceptional_box_search(dmax: int = 3, mmax: int = 2) -> list[PicClass]:
    """All (-1)-classes with C.K = -1 in the box |d| <= dmax, |m_i| <= mmax (sorted)."""
    found = []
    rng = range(-mmax, mmax + 1)
    for d in range(-dmax, dmax + 1):
        for m in itertools.product(rng, repeat=5):
            c = PicClass(d, m)
            if pic_pairing(c, c) == -1 and pic_pairing(c, K) == -1:
                found.append(c)
    return sorted(found)


# -- the primitive lattice and its D5 frame

LAMBDA_BASIS: tuple[PicClass, ...] = (
    E(1) - E(2),
    E(2) - E(3),
    E(3) - E(4),
    E(4) - E(5),
    PicClass.of(1, 1, 1, 1, 0, 0),
)

LAMBDA_GRAM = (
    (-2, 1, 0, 0, 0),
    (1, -2, 1, 0, 0),
    (0, 1, -2, 1, 1),
    (0, 0, 1, -2, 0),
    (0, 0, 1, 0, -2),
)

# Lambda basis vectors written in the f-frame (columns of the conversion matrix).
_BASIS_IN_F = (
    (1, -1, 0, 0, 0),
    (0, 1, -1, 0, 0),
    (0, 0, 1, -1, 0),
    (0, 0, 0, 1, -1),
    (0, 0, 0, 1, 1),
)


def lambda_gram() -> list[list[int]]:
    return [[pic_pairing(a, b) for b in LAMBDA_BASIS] for a in LAMBDA_BASIS]


def f_frame() -> list[tuple[Fraction, tuple[Fraction, ...]]]:
    """The classes f_i as rational (d; m) vectors."""
    half = Fraction(1, 2)
    out = []
    for i in range(5):
        m = [half] * 5  # L - sum E contributes +1/2 to each m_j (m counts -E)
        m[i] = half - 1
        out.append((half, tuple(m)))
    return out


def _rpair(a, b) -> Fraction:
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1], b[1]))


def to_f_coords(c: PicClass) -> tuple[Fraction, tuple[Fraction, ...]]:
    """(k, x) with c = k K + sum x_i f_i."""
    v = (Fraction(c.d), tuple(Fraction(x) for x in c.m))
    k = _rpair(v, (Fraction(K.d), tuple(Fraction(x) for x in K.m))) / 4
    xs = tuple(-_rpair(v, f) for f in f_frame())
    return k, xs


def from_f_coords(k: Fraction, xs: Sequence[Fraction]) -> PicClass:
    d = k * K.d
    m = [k * x for x in K.m]
    for x, (fd, fm) in zip(xs, f_frame()):
        d += x * fd
        for j in range(5):
            m[j] += x * fm[j]
    if d.denominator != 1 or any(x.denominator != 1 for x in m):
        raise ValueError("action left the integral lattice")
    return PicClass(int(d), tuple(int(x) for x in m))


# -- signed permutations


@dataclass(frozen=True)
class SignedPerm:
    """x_i -> signs[i] * x_{perm[i]} on f-coordinates, i.e. the matrix with
    entry signs[i] at (i, perm[i])."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def matrix(self) -> list[list[int]]:
        out = [[0] * 5 for _ in range(5)]
        for i, (j, e) in enumerate(zip(self.perm, self.signs)):
            out[i][j] = e
        return out

    def perm_sign(self) -> int:
        sign = 1
        seen = [False] * 5
        for i in range(5):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = self.perm[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
        return sign

    def det(self) -> int:
        """Determinant of the matrix: permutation sign times the product of the signs."""
        out = self.perm_sign()
        for e in self.signs:
            out *= e
        return out

    def in_weyl_group(self) -> bool:
        return self.det() == self.perm_sign()

    def apply(self, xs: Sequence) -> tuple:
        return tuple(e * xs[j] for j, e in zip(self.perm, self.signs))

    def compose(self, other: "SignedPerm") -> "SignedPerm":
        """self after other, as matrices self.matrix() @ other.matrix()."""
        perm = tuple(other.perm[j] for j in self.perm)
        signs = tuple(e * other.signs[j] for j, e in zip(self.perm, self.signs))
        return SignedPerm(perm, signs)

    def __str__(self) -> str:
        return f"perm={list(self.perm)} signs={list(self.signs)}"


IDENTITY = SignedPerm((0, 1, 2, 3, 4), (1, 1, 1, 1, 1))


def _int_det(m: list[list[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(det)


@lru_cache(maxsize=None)
def weyl_group() -> tuple[SignedPerm, ...]:
    """All 1920 signed permutation matrices whose determinant equals the permutation sign."""
    out = []
    for perm in itertools.permutations(range(5)):
        for signs in itertools.product((1, -1), repeat=5):
            w = SignedPerm(perm, signs)
            if w.in_weyl_group():
                out.append(w)
    return tuple(out)


def _check_member(w: SignedPerm):
    if not w.in_weyl_group():
        raise ValueError(f"{w} is not in W(D5)")


def weyl_act(w: SignedPerm, v):
    """Act on a PicClass (fixing K) or on a Lambda-coordinate 5-vector."""
    _check_member(w)
    if isinstance(v, PicClass):
        k, xs = to_f_coords(v)
        return from_f_coords(k, w.apply(xs))
    coords = [Fraction(x) for x in v]
    f = [sum(_BASIS_IN_F[b][i] * coords[b] for b in range(5)) for i in range(5)]
    g = w.apply(f)
    out = _f_to_lambda(g)
    return tuple(int(x) for x in out)


def _f_to_lambda(f: Sequence[Fraction]) -> list[Fraction]:
    # solve sum_b c_b BASIS_IN_F[b] = f
    m = [[Fraction(_BASIS_IN_F[b][i]) for b in range(5)] + [Fraction(f[i])] for i in range(5)]
    for c in range(5):
        piv = next(r for r in range(c, 5) if m[r][c])
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(5):
            if r != c and m[r][c]:
                fac = m[r][c]
                m[r] = [a - fac * b for a, b in zip(m[r], m[c])]
    out = [row[5] for row in m]
    if any(x.denominator != 1 for x in out):
        raise ValueError("vector not in Lambda")
    return out


def lambda_matrix(w: SignedPerm) -> list[list[int]]:
    """Matrix of w on Lambda-coordinates (columns are images of the basis)."""
    cols = [weyl_act(w, tuple(1 if i == b else 0 for i in range(5))) for b in range(5)]
    return [[cols[b][i] for b in range(5)] for i in range(5)]


def preserves_gram(w: SignedPerm) -> bool:
    m = lambda_matrix(w)
    g = LAMBDA_GRAM
    for i in range(5):
        for j in range(5):
            val = sum(m[a][i] * g[a][b] * m[b][j] for a in range(5) for b in range(5))
            if val != g[i][j]:
                return False
    return True


def orbit(c: PicClass, group: Iterable[SignedPerm] | None = None) -> list[PicClass]:
    group = weyl_group() if group is None else group
    return sorted({weyl_act(w, c) for w in group})


def sign_kernel() -> list[SignedPerm]:
    """Elements acting trivially on the underlying permutation: the (Z/2)^4 of even sign changes."""
    return [w for w in weyl_group() if w.perm == IDENTITY.perm]


# -- Smith normal form


def smith_invariants(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors of a nonsingular integer matrix, those equal to 1 dropped."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("square matrix expected")
    diag = []
    for t in range(n):
        # find a nonzero pivot in the remaining block
        nz = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
        if not nz:
            raise ValueError("singular Gram matrix")
        while True:
            _, pi, pj = min(nz)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            done = True
            for i in range(t + 1, n):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # enforce divisibility of the rest by the pivot
                bad = next(
                    ((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                    None,
                )
                if bad is None:
                    break
                i, _ = bad
                a[t] = [x + y for x, y in zip(a[t], a[i])]
            nz = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
        diag.append(abs(a[t][t]))
    return [d for d in diag if d != 1]


def discriminant_group(gram) -> list[int]:
    """Invariant factors of L^* / L for a Gram matrix (or GramTable), trivial factors dropped."""
    matrix = gram.gram if isinstance(gram, GramTable) else gram
    return smith_invariants(matrix)


# -- K3 Gram tables


@dataclass(frozen=True)
class GramTable:
    labels: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ValueError("Gram matrix shape does not match labels")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")

    @classmethod
    def from_json(cls, obj: dict) -> "GramTable":
        return cls(tuple(obj["labels"]), tuple(tuple(int(x) for x in r) for r in obj["gram"]))

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "gram": [list(r) for r in self.gram]}

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(len(self.labels)))

    def pair(self, a: dict[str, int], b: dict[str, int]) -> int:
        idx = {lab: i for i, lab in enumerate(self.labels)}
        return sum(ca * cb * self.gram[idx[la]][idx[lb]] for la, ca in a.items() for lb, cb in b.items())


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*\*?\s*([A-Za-z][A-Za-z0-9_]*'*)\s*")


def parse_class_expr(expr: str, labels: Sequence[str]) -> dict[str, int]:
    """Parse an integer combination like "2h - C + R'" into {label: coefficient}."""
    out: dict[str, int] = {}
    pos = 0
    expr = expr.strip()
    if not expr:
        raise ValueError("empty class expression")
    first = True
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        if not m or m.end() == pos or (not first and m.group(1) is None):
            raise ValueError(f"cannot parse class expression at {expr[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        lab = m.group(3)
        if lab not in labels:
            raise KeyError(f"unknown class label {lab!r}; known: {', '.join(labels)}")
        out[lab] = out.get(lab, 0) + sign * coef
        pos = m.end()
        first = False
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class ClassArithmetic:
    expr: str
    coefficients: dict
    self_intersection: int
    pairings: dict
    genus: Fraction

    def to_json(self) -> dict:
        g = self.genus
        return {
            "expr": self.expr,
            "coefficients": self.coefficients,
            "selfIntersection": self.self_intersection,
            "pairings": self.pairings,
            "genus": int(g) if g.denominator == 1 else str(g),
        }


def k3_class_arith(table: GramTable, expr: str) -> ClassArithmetic:
    """Self-intersection, pairings with each generator, and genus 1 + D^2/2 of a combination."""
    coeffs = parse_class_expr(expr, table.labels)
    d2 = table.pair(coeffs, coeffs)
    pairings = {lab: table.pair(coeffs, {lab: 1}) for lab in table.labels}
    return ClassArithmetic(expr, coeffs, d2, pairings, 1 + Fraction(d2, 2))


def pair_exprs(table: GramTable, a: str, b: str) -> int:
    return table.pair(parse_class_expr(a, table.labels), parse_class_expr(b, table.labels))


@lru_cache(maxsize=None)
def builtin_tables() -> dict[str, GramTable]:
    """The K3 lattice polarizations shipped with the package, keyed by name."""
    raw = resources.files("dp4kit.data").joinpath("k3_tables.json").read_text()
    return {name: GramTable.from_json(obj) for name, obj in json.loads(raw).items()}
