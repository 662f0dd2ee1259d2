"""Sparse multivariate polynomials: {exponent tuple: nonzero coefficient}."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .fields import FieldElement, FieldError, FieldSpec


class MultiPoly:
    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: FieldSpec, vars: Sequence[str], terms: Mapping | Iterable = ()):
        self.field = field
        self.vars = tuple(vars)
        n = len(self.vars)
        out: dict[tuple[int, ...], FieldElement] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {self.vars}")
            c = field(c)
            prev = out.get(exp)
            c = c if prev is None else prev + c
            if c:
                out[exp] = c
            elif exp in out:
                del out[exp]
        self.terms = out

    # -- constructors

    @classmethod
    def var(cls, field: FieldSpec, vars: Sequence[str], name: str) -> "MultiPoly":
        i = list(vars).index(name)
        exp = [0] * len(vars)
        exp[i] = 1
        return cls(field, vars, {tuple(exp): 1})

    @classmethod
    def constant(cls, field: FieldSpec, vars: Sequence[str], c) -> "MultiPoly":
        return cls(field, vars, {(0,) * len(vars): c})

    def _zero(self) -> "MultiPoly":
        return MultiPoly(self.field, self.vars)

    def _wrap(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars or other.field != self.field:
                raise FieldError("mismatched polynomial rings")
            return other
        return MultiPoly.constant(self.field, self.vars, other)

    # -- ring operations

    def __add__(self, other):
        o = self._wrap(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out[e] + c if e in out else c
        return MultiPoly(self.field, self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.field, self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return MultiPoly(self.field, self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(self.field, self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.field == other.field and self.vars == other.vars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.vars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            c = self.terms[e]
            parts.append(f"{c!r}*{mono}" if mono else repr(c))
        return " + ".join(parts)

    # -- structure

    def degree_in(self, indices: Sequence[int]) -> set[int]:
        """Set of total degrees in the given group of variables, across all terms."""
        return {sum(e[i] for i in indices) for e in self.terms}

    def is_bihomogeneous(self, groups: Sequence[Sequence[int]], degrees: Sequence[int]) -> bool:
        return all(
            all(sum(e[i] for i in g) == d for g, d in zip(groups, degrees)) for e in self.terms
        )

    def derivative(self, name_or_index) -> "MultiPoly":
        i = name_or_index if isinstance(name_or_index, int) else self.vars.index(name_or_index)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly(self.field, self.vars, out)

    def __call__(self, *values):
        """Evaluate at a point; values may live in an extension of the coefficient field."""
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = tuple(values[0])
        if len(values) != len(self.vars):
            raise ValueError("wrong number of values")
        field = next((v.field for v in values if isinstance(v, FieldElement)), self.field)
        vals = [field(v) if not isinstance(v, FieldElement) else v for v in values]
        from .binary import _lift

        acc = field.zero
        for e, c in self.terms.items():
            term = _lift(c, field)
            for v, k in zip(vals, e):
                if k:
                    term = term * v**k
            acc = acc + term
        return acc

    # -- serialization

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(e), "coeff": self.terms[e].to_str()} for e in sorted(self.terms)],
        }

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> "MultiPoly":
        return cls(field, obj["vars"], [(t["exp"], field(t["coeff"])) for t in obj["terms"]])


def quadric_to_matrix(f: MultiPoly, indices: Sequence[int] | None = None) -> list[list[FieldElement]]:
    """Symmetric matrix A with f = x^T A x, for a quadratic form in the chosen variables."""
    idx = list(range(len(f.vars))) if indices is None else list(indices)
    n = len(idx)
    pos = {v: i for i, v in enumerate(idx)}
    A = [[f.field.zero] * n for _ in range(n)]
    half = f.field(2).inverse()
    for e, c in f.terms.items():
        support = [(pos[i], k) for i, k in enumerate(e) if k]
        if sum(k for _, k in support) != 2 or any(i not in pos for i, k in enumerate(e) if k):
            raise ValueError("not a quadratic form in the chosen variables")
        if len(support) == 1:
            i = support[0][0]
            A[i][i] = A[i][i] + c
        else:
            (i, _), (j, _) = support
            A[i][j] = A[i][j] + c * half
            A[j][i] = A[j][i] + c * half
    return A


def matrix_to_quadric(A, field: FieldSpec, vars: Sequence[str]) -> MultiPoly:
    n = len(A)
    terms = {}
    for i in range(n):
        for j in range(i, n):
            c = A[i][j] if i == j else A[i][j] * 2
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
    return MultiPoly(field, vars, terms)
