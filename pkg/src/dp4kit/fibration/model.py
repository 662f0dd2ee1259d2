"""Explicit fibration models over finite fields.

A model of case c lives in P^1 x P^N (N = c + 3) with base coordinates (s : t)
and fiber-ambient coordinates x_0..x_N.  It is generated in a scroll frame:

* y = G x for an invertible matrix G (the identity in case 1);
* the weight-0 coordinates are y_0..y_(5-c); each weight-1 coordinate u of V
  contributes a pair (y_a, y_b) = (s u, t u), and the (1, 1)-forms are
  L = t y_a - s y_b;
* so y = E(s, t) u with u = (u_0..u_4) coordinates on the fiber P^4.

A quadratic form of twist a is stored as a symmetric matrix of binary forms in u
whose (i, j) entry has degree a + w_i + w_j (entries of negative degree vanish).
For a >= 0 the same form is also given in the ambient frame, as a polynomial of
bidegree (a, 2) in (s, t; x), lifted from the scroll and perturbed by multiples
of the L's.  Restricting the ambient form to the scroll gives back the scroll
form exactly.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from ..algebra import linalg
from ..algebra.binary import BinaryForm, _lift
from ..algebra.fields import FieldElement, FieldSpec, field_from_json
from ..algebra.multipoly import MultiPoly
from ..pencil import QuadricPencil, random_invertible
from .cases import CaseSpec, case_splitting

log = logging.getLogger("dp4kit.fibration")

DEFAULT_MAX_RETRIES = 200


class ModelError(ValueError):
    pass


class DependentLinearFormsError(ModelError):
    """The (1, 1)-forms become dependent at the requested point of P^1."""


# -- scroll-frame quadratic forms


@dataclass(frozen=True)
class ScrollQuadric:
    """sum_{i,j} M_ij(s, t) u_i u_j with deg M_ij = twist + w_i + w_j."""

    field: FieldSpec
    twist: int
    weights: tuple
    entries: dict  # (i, j) with i <= j -> BinaryForm

    def entry_degree(self, i: int, j: int) -> int:
        return self.twist + self.weights[i] + self.weights[j]

    def entry(self, i: int, j: int) -> BinaryForm | None:
        if i > j:
            i, j = j, i
        return self.entries.get((i, j))

    def matrix_at(self, s: FieldElement, t: FieldElement) -> list[list[FieldElement]]:
        F = s.field
        n = len(self.weights)
        M = [[F.zero] * n for _ in range(n)]
        for (i, j), f in self.entries.items():
            v = f(s, t)
            M[i][j] = v
            M[j][i] = v
        return M

    def value(self, s: FieldElement, t: FieldElement, u: Sequence[FieldElement]) -> FieldElement:
        return linalg.quadratic(self.matrix_at(s, t), list(u))

    def over(self, big: FieldSpec) -> "ScrollQuadric":
        if big == self.field:
            return self
        return ScrollQuadric(big, self.twist, self.weights, {k: f.change_field(big) for k, f in self.entries.items()})

    def vanishes_on(self, indices: Sequence[int]) -> bool:
        """Does the form vanish identically on the sub-bundle spanned by these coordinates?"""
        return all(self.entry(i, j) is None or not self.entry(i, j) for i in indices for j in indices)

    def __eq__(self, other):
        if not isinstance(other, ScrollQuadric):
            return NotImplemented
        keys = set(self.entries) | set(other.entries)

        def nz(e, k):
            f = e.get(k)
            return None if f is None or f.is_zero() else f

        return (
            self.twist == other.twist
            and self.weights == other.weights
            and all(nz(self.entries, k) == nz(other.entries, k) for k in keys)
        )

    def __hash__(self):
        return hash((self.twist, self.weights))

    def to_json(self) -> dict:
        return {
            "twist": self.twist,
            "entries": [
                {"i": i, "j": j, "form": f.to_json()} for (i, j), f in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, field: FieldSpec, weights: Sequence[int], obj: dict) -> "ScrollQuadric":
        entries = {(e["i"], e["j"]): BinaryForm(field, [field(c) for c in e["form"]]) for e in obj["entries"]}
        q = cls(field, int(obj["twist"]), tuple(weights), entries)
        for (i, j), f in entries.items():
            if i > j or f.degree != q.entry_degree(i, j):
                raise ModelError(f"scroll entry ({i}, {j}) has degree {f.degree}, expected {q.entry_degree(i, j)}")
        return q


def random_scroll_quadric(field: FieldSpec, twist: int, weights: Sequence[int], rng: random.Random) -> ScrollQuadric:
    entries = {}
    n = len(weights)
    for i in range(n):
        for j in range(i, n):
            d = twist + weights[i] + weights[j]
            if d >= 0:
                entries[(i, j)] = BinaryForm(field, [field.random(rng) for _ in range(d + 1)])
    return ScrollQuadric(field, twist, tuple(weights), entries)


# -- the frame


def ambient_vars(N: int) -> tuple[str, ...]:
    return ("s", "t") + tuple(f"x{i}" for i in range(N + 1))


def pair_indices(weights: Sequence[int]) -> list[tuple[int, ...]]:
    """For each u-coordinate, the y-indices it maps to: (j,) for weight 0, (a, b) for weight 1."""
    out = []
    pos = 0
    for w in weights:
        if w == 0:
            out.append((pos,))
            pos += 1
        elif w == 1:
            out.append((pos, pos + 1))
            pos += 2
        else:
            raise ModelError("scroll weights must be 0 or 1")
    return out


def frame_matrix(weights: Sequence[int], s: FieldElement, t: FieldElement) -> list[list[FieldElement]]:
    """E(s, t): y = E u."""
    F = s.field
    pairs = pair_indices(weights)
    rows = sum(len(p) for p in pairs)
    E = [[F.zero] * len(weights) for _ in range(rows)]
    for j, p in enumerate(pairs):
        if len(p) == 1:
            E[p[0]][j] = F.one
        else:
            E[p[0]][j] = s
            E[p[1]][j] = t
    return E


@dataclass
class FibrationModel:
    field: FieldSpec
    weights: tuple
    G: list  # y = G x
    linear: list  # MultiPoly in ambient_vars, bidegree (1, 1)
    quadrics: list  # ScrollQuadric
    ambient_quadrics: list  # MultiPoly of bidegree (a, 2) or None
    alpha: int
    spec: CaseSpec | None = None
    seed: int | None = None
    retries: int = 0
    _ginv: list | None = dc_field(default=None, repr=False, compare=False)

    @property
    def N(self) -> int:
        return len(self.G) - 1

    @property
    def vars(self) -> tuple[str, ...]:
        return ambient_vars(self.N)

    @property
    def twists(self) -> tuple[int, ...]:
        return tuple(q.twist for q in self.quadrics)

    @property
    def height(self) -> int:
        """-2 deg(pi_* omega^{-1}) with pi_* omega^{-1} = V(alpha)."""
        return -2 * (5 * self.alpha + sum(self.weights))

    @property
    def Ginv(self) -> list:
        if self._ginv is None:
            self._ginv = linalg.inverse(self.G)
        return self._ginv

    def has_ambient_forms(self) -> bool:
        return all(q is not None for q in self.ambient_quadrics)

    def scroll_embedding(self, s: FieldElement, t: FieldElement) -> list[list[FieldElement]]:
        """(N+1) x 5 matrix: x = G^{-1} E(s, t) u."""
        Ginv = [[_lift(c, s.field) for c in row] for row in self.Ginv]
        return linalg.matmul(Ginv, frame_matrix(self.weights, s, t))

    def to_json(self) -> dict:
        forms = []
        for L in self.linear:
            forms.append({"role": "linear", "bidegree": [1, 1], "frame": "ambient", "poly": L.to_json()})
        for q, amb in zip(self.quadrics, self.ambient_quadrics):
            entry = {"role": "quadric", "bidegree": [q.twist, 2], "frame": "ambient" if amb is not None else "scroll"}
            if amb is not None:
                entry["poly"] = amb.to_json()
            entry["scroll"] = q.to_json()
            forms.append(entry)
        out = {"schema": "dp4kit/1", "kind": "fibration-model"}
        if self.spec is not None:
            out.update(self.spec.to_json())
        out.update(
            {
                "field": self.field.to_json(),
                "seed": self.seed,
                "alpha": self.alpha,
                "height": self.height,
                "weights": list(self.weights),
                "frame": [[c.to_str() for c in row] for row in self.G],
                "retries": self.retries,
                "forms": forms,
            }
        )
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FibrationModel":
        field = field_from_json(obj["field"])
        spec = CaseSpec(obj["case"], obj["parity"], obj["n"]) if "case" in obj else None
        forms = obj["forms"]
        linear = [MultiPoly.from_json(field, f["poly"]) for f in forms if f["role"] == "linear"]
        quads = [f for f in forms if f["role"] == "quadric"]
        if len(quads) != 2:
            raise ModelError("a model needs exactly two quadratic forms")
        if "weights" in obj:
            weights = tuple(obj["weights"])
        elif not linear:
            weights = (0,) * 5
        else:
            raise ModelError("models with linear forms must declare their scroll weights")
        N = len(weights) + sum(weights) - 1
        if "frame" in obj:
            G = [[field(c) for c in row] for row in obj["frame"]]
        elif not linear:
            G = linalg.identity(field, N + 1)
        else:
            raise ModelError("models with linear forms must declare their frame matrix")
        if "alpha" not in obj:
            raise ModelError("the model must declare alpha, the relative anticanonical bidegree (alpha, 1)")
        model = cls(field, weights, G, linear, [], [], int(obj["alpha"]), spec, obj.get("seed"), obj.get("retries", 0))
        for f in quads:
            amb = MultiPoly.from_json(field, f["poly"]) if "poly" in f else None
            if "scroll" in f:
                q = ScrollQuadric.from_json(field, weights, f["scroll"])
            elif amb is not None:
                q = restrict_to_scroll(model, amb, int(f["bidegree"][0]))
            else:
                raise ModelError("a quadratic form needs an ambient polynomial or scroll entries")
            model.quadrics.append(q)
            model.ambient_quadrics.append(amb)
        _validate(model)
        return model


def _validate(model: FibrationModel):
    N = model.N
    if len(model.weights) != 5:
        raise ModelError("the fiber P^4 needs five scroll coordinates")
    if len(model.linear) != sum(model.weights):
        raise ModelError(f"expected {sum(model.weights)} linear forms, got {len(model.linear)}")
    groups = ([0, 1], list(range(2, N + 3)))
    for L in model.linear:
        if not L.is_bihomogeneous(groups, (1, 1)):
            raise ModelError("linear forms must have bidegree (1, 1)")
    for q, amb in zip(model.quadrics, model.ambient_quadrics):
        if amb is not None and not amb.is_bihomogeneous(groups, (q.twist, 2)):
            raise ModelError(f"quadratic form is not of bidegree ({q.twist}, 2)")


# -- polynomial plumbing


def _poly_from_binary(f: BinaryForm, vars: Sequence[str], extra: dict | None = None) -> MultiPoly:
    """A binary form in (s, t) as a polynomial in the ambient ring, times a monomial."""
    n = len(vars)
    d = f.degree
    terms = {}
    for i, c in enumerate(f.coeffs):
        if c:
            e = [0] * n
            e[0] = d - i
            e[1] = i
            if extra:
                for k, v in extra.items():
                    e[k] += v
            terms[tuple(e)] = c
    return MultiPoly(f.field, vars, terms)


def _y_polys(field: FieldSpec, G, vars) -> list[MultiPoly]:
    n = len(vars)
    out = []
    for row in G:
        terms = {}
        for l, c in enumerate(row):
            if c:
                e = [0] * n
                e[2 + l] = 1
                terms[tuple(e)] = c
        out.append(MultiPoly(field, vars, terms))
    return out


def linear_forms(field: FieldSpec, weights: Sequence[int], G) -> list[MultiPoly]:
    vars = ambient_vars(len(G) - 1)
    Y = _y_polys(field, G, vars)
    s = MultiPoly.var(field, vars, "s")
    t = MultiPoly.var(field, vars, "t")
    return [t * Y[p[0]] - s * Y[p[1]] for p in pair_indices(weights) if len(p) == 2]


def lift_to_ambient(q: ScrollQuadric, G, vars) -> MultiPoly:
    """An ambient (a, 2)-form restricting to q on the scroll (needs a >= 0)."""
    if q.twist < 0:
        raise ModelError("negative twist has no ambient lift")
    field = q.field
    Y = _y_polys(field, G, vars)
    pairs = pair_indices(q.weights)
    n = len(vars)
    acc = MultiPoly(field, vars)
    for (i, j), f in q.entries.items():
        d = f.degree
        mult = 1 if i == j else 2
        for k, c in enumerate(f.coeffs):
            if not c:
                continue
            e, g = d - k, k  # s^e t^g
            factors = []
            for idx in (i, j):
                p = pairs[idx]
                if len(p) == 1:
                    factors.append(Y[p[0]])
                elif e > 0:
                    factors.append(Y[p[0]])
                    e -= 1
                else:
                    factors.append(Y[p[1]])
                    g -= 1
            mono = [0] * n
            mono[0], mono[1] = e, g
            acc = acc + MultiPoly(field, vars, {tuple(mono): c * mult}) * factors[0] * factors[1]
    return acc


def restrict_to_scroll(model: FibrationModel, amb: MultiPoly, twist: int) -> ScrollQuadric:
    """Substitute x = G^{-1} E(s, t) u into an ambient (twist, 2)-form."""
    field = model.field
    weights = model.weights
    uvars = ("s", "t") + tuple(f"u{j}" for j in range(5))
    s = MultiPoly.var(field, uvars, "s")
    t = MultiPoly.var(field, uvars, "t")
    u = [MultiPoly.var(field, uvars, f"u{j}") for j in range(5)]
    y_images = [None] * (model.N + 1)
    for j, p in enumerate(pair_indices(weights)):
        if len(p) == 1:
            y_images[p[0]] = u[j]
        else:
            y_images[p[0]] = s * u[j]
            y_images[p[1]] = t * u[j]
    zero = MultiPoly(field, uvars)
    x_images = []
    for row in model.Ginv:
        acc = zero
        for c, y in zip(row, y_images):
            if c:
                acc = acc + y * c
        x_images.append(acc)
    images = [s, t] + x_images
    out = compose(amb, images, zero)
    entries: dict = {}
    for e, c in out.terms.items():
        us = [k for k in range(5) for _ in range(e[2 + k])]
        if len(us) != 2:
            raise ModelError("restriction is not quadratic in u")
        i, j = us
        deg = twist + weights[i] + weights[j]
        if e[0] + e[1] != deg:
            raise ModelError("restriction has the wrong base degree")
        cur = entries.get((i, j))
        if cur is None:
            cur = [field.zero] * (deg + 1)
            entries[(i, j)] = cur
        cur[e[1]] = cur[e[1]] + (c if i == j else c / field(2))
    forms = {k: BinaryForm(field, v) for k, v in entries.items()}
    for i in range(5):
        for j in range(i, 5):
            deg = twist + weights[i] + weights[j]
            if deg >= 0 and (i, j) not in forms:
                forms[(i, j)] = BinaryForm.zero(field, deg)
    return ScrollQuadric(field, twist, tuple(weights), forms)


def compose(poly: MultiPoly, images: Sequence[MultiPoly], zero: MultiPoly) -> MultiPoly:
    """poly(images[0], images[1], ...)."""
    acc = zero
    powers: dict = {}

    def pw(k, e):
        key = (k, e)
        if key not in powers:
            powers[key] = images[k] ** e
        return powers[key]

    for e, c in poly.terms.items():
        term = None
        for k, ek in enumerate(e):
            if ek:
                f = pw(k, ek)
                term = f if term is None else term * f
        if term is None:
            term = zero + 1
        acc = acc + term * c
    return acc


# -- generation


def generate_model(
    spec: CaseSpec,
    field: FieldSpec,
    seed: int,
    max_retries: int = DEFAULT_MAX_RETRIES,
    validate: bool = True,
) -> FibrationModel:
    """Random model of the given case, re-drawn until its discriminant profile is valid.

    All randomness comes from random.Random(seed).  A valid model has a nonzero,
    squarefree discriminant profile of degree exactly 2h.
    """
    from .discriminant import discriminant_profile

    if not field.is_finite:
        raise ModelError("models are generated over finite fields")
    if field.characteristic == 2:
        raise ModelError("quadratic forms need odd characteristic")
    if validate and field.characteristic == 5:
        raise ModelError("validating the discriminant needs characteristic other than 2 and 5")
    rng = random.Random(seed)
    weights = spec.weights
    N = spec.ambient_dim
    vars = ambient_vars(N)
    expected = 2 * case_splitting(spec).height
    for attempt in range(max_retries):
        G = linalg.identity(field, N + 1) if spec.case == 1 else random_invertible(field, N + 1, rng)
        linear = linear_forms(field, weights, G)
        quads = [random_scroll_quadric(field, a, weights, rng) for a in spec.twists]
        ambient = []
        for q in quads:
            if q.twist < 0:
                ambient.append(None)
                continue
            amb = lift_to_ambient(q, G, vars)
            if q.twist >= 1:
                for L in linear:
                    amb = amb + L * _random_form(field, vars, q.twist - 1, rng)
            ambient.append(amb)
        model = FibrationModel(field, weights, G, linear, quads, ambient, spec.alpha, spec, seed, attempt)
        if not validate:
            return model
        prof = discriminant_profile(model)
        if prof.is_valid(expected):
            if attempt:
                log.info("%s over %s seed %d: accepted after %d retries", spec, field, seed, attempt)
            return model
        log.info("%s over %s seed %d: attempt %d rejected (%s)", spec, field, seed, attempt, prof.reason(expected))
    raise ModelError(f"no valid model for {spec} over {field} after {max_retries} attempts")


def _random_form(field: FieldSpec, vars, a: int, rng: random.Random) -> MultiPoly:
    """Random form of bidegree (a, 1)."""
    n = len(vars)
    terms = {}
    for k in range(a + 1):
        for l in range(n - 2):
            e = [0] * n
            e[0], e[1] = a - k, k
            e[2 + l] = 1
            terms[tuple(e)] = field.random(rng)
    return MultiPoly(field, vars, terms)


# -- fibers


def base_point(field: FieldSpec, t) -> tuple[FieldElement, FieldElement]:
    """Normalize a base point: an element t (meaning (1 : t)), a pair (s, t), or "inf"."""
    if isinstance(t, str) and t.lower() in ("inf", "infinity", "oo"):
        return (field.zero, field.one)
    if isinstance(t, (tuple, list)) and len(t) == 2:
        s, tt = t
        F = s.field if isinstance(s, FieldElement) else tt.field if isinstance(tt, FieldElement) else field
        s, tt = F(s), F(tt)
        if not (s or tt):
            raise ValueError("(0 : 0) is not a point of P^1")
        return (s, tt)
    F = t.field if isinstance(t, FieldElement) else field
    return (F.one, F(t))


def _ambient_matrix(poly: MultiPoly, s: FieldElement, t: FieldElement) -> list[list[FieldElement]]:
    """Symmetric matrix in x of an ambient quadratic form at the base point (s, t)."""
    F = s.field
    n = len(poly.vars) - 2
    M = [[F.zero] * n for _ in range(n)]
    half = F(2).inverse()
    for e, c in poly.terms.items():
        v = _lift(c, F) * s ** e[0] * t ** e[1]
        xs = [k for k in range(n) for _ in range(e[2 + k])]
        i, j = xs
        if i == j:
            M[i][i] = M[i][i] + v
        else:
            M[i][j] = M[i][j] + v * half
            M[j][i] = M[j][i] + v * half
    return M


def _linear_row(L: MultiPoly, s: FieldElement, t: FieldElement) -> list[FieldElement]:
    F = s.field
    n = len(L.vars) - 2
    row = [F.zero] * n
    for e, c in L.terms.items():
        k = next(k for k in range(n) if e[2 + k])
        row[k] = row[k] + _lift(c, F) * s ** e[0] * t ** e[1]
    return row


@dataclass(frozen=True)
class FiberFrame:
    """x = P x_free on the fiber's P^4; ``free`` lists the kept ambient coordinates."""

    point: tuple
    pivots: tuple
    free: tuple
    P: list


def fiber_frame(model: FibrationModel, point) -> FiberFrame:
    """Eliminate the pivot variables of the lexicographically first nonzero maximal minor."""
    s, t = base_point(model.field, point)
    F = s.field
    n = model.N + 1
    rows = [_linear_row(L, s, t) for L in model.linear]
    r = len(rows)
    if r == 0:
        return FiberFrame((s, t), (), tuple(range(n)), linalg.identity(F, n))
    for piv in itertools.combinations(range(n), r):
        sub = [[row[c] for c in piv] for row in rows]
        if linalg.det(sub):
            break
    else:
        raise DependentLinearFormsError(f"the linear forms are dependent at ({s.to_str()} : {t.to_str()})")
    free = tuple(c for c in range(n) if c not in piv)
    inv = linalg.inverse(sub)
    rest = [[row[c] for c in free] for row in rows]
    solved = linalg.scale(-F.one, linalg.matmul(inv, rest))  # x_piv = solved * x_free
    P = [[F.zero] * len(free) for _ in range(n)]
    for k, c in enumerate(free):
        P[c][k] = F.one
    for k, c in enumerate(piv):
        P[c] = list(solved[k])
    return FiberFrame((s, t), piv, free, P)


def fiber_at(model: FibrationModel, point) -> QuadricPencil:
    """The fiber over a point of P^1 as a pencil in the free ambient coordinates.

    Ambient-frame forms are restricted through the elimination; scroll-frame forms
    are carried over by u = R^{-1} x_free with R the free rows of G^{-1} E(s, t).
    """
    fr = fiber_frame(model, point)
    s, t = fr.point
    mats = []
    R_inv = None
    for q, amb in zip(model.quadrics, model.ambient_quadrics):
        if amb is not None:
            mats.append(linalg.congruence(fr.P, _ambient_matrix(amb, s, t)))
        else:
            if R_inv is None:
                X = model.scroll_embedding(s, t)
                R_inv = linalg.inverse([X[c] for c in fr.free])
            mats.append(linalg.congruence(R_inv, q.matrix_at(s, t)))
    return QuadricPencil.from_matrices(s.field, mats[0], mats[1])


def fiber_via_scroll(model: FibrationModel, point) -> QuadricPencil:
    """Same fiber computed from the scroll forms only (the second route)."""
    fr = fiber_frame(model, point)
    s, t = fr.point
    X = model.scroll_embedding(s, t)
    R_inv = linalg.inverse([X[c] for c in fr.free])
    mats = [linalg.congruence(R_inv, q.matrix_at(s, t)) for q in model.quadrics]
    return QuadricPencil.from_matrices(s.field, mats[0], mats[1])


def scroll_fiber(model: FibrationModel, point) -> QuadricPencil:
    """The fiber in scroll coordinates u (polynomial in the base point; used for discriminants)."""
    s, t = base_point(model.field, point)
    mats = [q.matrix_at(s, t) for q in model.quadrics]
    return QuadricPencil.from_matrices(s.field, mats[0], mats[1])
