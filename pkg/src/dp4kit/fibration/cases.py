"""The eight balanced constructions of quartic del Pezzo fibrations.

Case c (1..5) lives in P^1 x P^(c+3): c - 1 forms of bidegree (1, 1) cut a scroll
P(V^dual) with V = O^(6-c) + O(1)^(c-1), and two quadratic forms of bidegrees
(n, 2), (n, 2) (even parity) or (n, 2), (n + 1, 2) (odd parity) cut the fibration.
The relative anticanonical bundle is O(alpha, 1) with alpha = -(a1 + a2) - (c - 1),
so pi_* omega^{-1} = V(alpha).
"""

from __future__ import annotations

from dataclasses import dataclass

from .numerology import SplittingType, height_from_splitting

EVEN = "even"
ODD = "odd"
PARITIES = (EVEN, ODD)

# (case, parity, n) triples realized by a scroll construction whose quadratic
# forms may have negative twist.
SPECIAL_NEGATIVE = {
    (3, ODD, -1): "constant conic subfamily C x P^1",
    (4, EVEN, -1): "constant line subfamily l x P^1",
    (4, ODD, -1): "two sections from l meeting the quadric",
    (5, EVEN, -1): "canonical section from the trivial summand",
    (5, ODD, -1): "canonical section from the trivial summand",
}


@dataclass(frozen=True)
class CaseSpec:
    case: int
    parity: str
    n: int

    def __post_init__(self):
        if self.case not in (1, 2, 3, 4, 5):
            raise ValueError(f"case must be 1..5, got {self.case}")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if min(self.twists) < 0 and (self.case, self.parity, self.n) not in SPECIAL_NEGATIVE:
            raise ValueError(f"{self} has a negative twist outside the special n = -1 constructions")

    @property
    def twists(self) -> tuple[int, int]:
        """Twists (a1, a2) of the two quadratic forms, of bidegrees (a1, 2), (a2, 2)."""
        return (self.n, self.n) if self.parity == EVEN else (self.n, self.n + 1)

    @property
    def linear_count(self) -> int:
        return self.case - 1

    @property
    def ambient_dim(self) -> int:
        return self.case + 3

    @property
    def weights(self) -> tuple[int, ...]:
        """Splitting of V = pi_* O_X(0, 1): weight-0 coordinates first."""
        return (0,) * (6 - self.case) + (1,) * (self.case - 1)

    @property
    def alpha(self) -> int:
        """omega_pi^{-1} = O_X(alpha, 1)."""
        a1, a2 = self.twists
        return -(a1 + a2) - (self.case - 1)

    @property
    def is_special(self) -> bool:
        return (self.case, self.parity, self.n) in SPECIAL_NEGATIVE

    @property
    def special_note(self) -> str | None:
        return SPECIAL_NEGATIVE.get((self.case, self.parity, self.n))

    @property
    def height(self) -> int:
        return case_splitting(self).height

    def __str__(self) -> str:
        return f"case {self.case} {self.parity} n={self.n}"

    def to_json(self) -> dict:
        return {"case": self.case, "parity": self.parity, "n": self.n}


@dataclass(frozen=True)
class CaseSplitting:
    spec: CaseSpec
    V: SplittingType
    W: SplittingType
    degree: int
    height: int

    def to_json(self) -> dict:
        out = self.spec.to_json()
        out.update(
            {
                "V": self.V.to_json(),
                "W": self.W.to_json(),
                "alpha": self.spec.alpha,
                "degree": self.degree,
                "height": self.height,
                "special": self.spec.special_note,
            }
        )
        return out


def case_splitting(c: CaseSpec) -> CaseSplitting:
    V = SplittingType(c.weights)
    W = SplittingType(a + c.alpha for a in V.degrees)
    return CaseSplitting(c, V, W, W.degree, height_from_splitting(W))


# offsets of the closed-form heights 20n + offset
HEIGHT_OFFSETS = {
    (1, EVEN): 0,
    (1, ODD): 10,
    (2, EVEN): 8,
    (2, ODD): 18,
    (3, EVEN): 16,
    (3, ODD): 26,
    (4, EVEN): 24,
    (4, ODD): 34,
    (5, EVEN): 32,
    (5, ODD): 42,
}


def closed_form_height(case: int, parity: str, n: int) -> int:
    return 20 * n + HEIGHT_OFFSETS[(case, parity)]


def height_formula(case: int, parity: str) -> str:
    off = HEIGHT_OFFSETS[(case, parity)]
    return "20n" if off == 0 else f"20n+{off}"


def case_table() -> list[dict]:
    """One row per (case, parity): V, alpha and degree as affine functions of n, and the height."""
    rows = []
    for case in range(1, 6):
        for parity in PARITIES:
            s0 = case_splitting(_unchecked(case, parity, 0))
            s1 = case_splitting(_unchecked(case, parity, 1))
            rows.append(
                {
                    "case": case,
                    "parity": parity,
                    "ambient": f"P^1 x P^{case + 3}",
                    "V": s0.V.to_json(),
                    "quadricBidegrees": _affine_pair(parity),
                    "alpha": _affine(s0.spec.alpha, s1.spec.alpha),
                    "degree": _affine(s0.degree, s1.degree),
                    "height": height_formula(case, parity),
                }
            )
    return rows


def _unchecked(case: int, parity: str, n: int) -> CaseSpec:
    return CaseSpec(case, parity, n)


def _affine(v0: int, v1: int) -> str:
    slope = v1 - v0
    head = {0: "", 1: "n", -1: "-n"}.get(slope, f"{slope}n")
    if not head:
        return str(v0)
    if v0 == 0:
        return head
    return f"{head}{v0:+d}"


def _affine_pair(parity: str) -> str:
    return "(n,2),(n,2)" if parity == EVEN else "(n,2),(n+1,2)"


def cases_in_height_range(hmin: int = 0, hmax: int = 60) -> list[CaseSpec]:
    """All (case, parity, n) with non-negative twists or a special n = -1 construction and height in range."""
    out = []
    for case in range(1, 6):
        for parity in PARITIES:
            n = -1
            while closed_form_height(case, parity, n) <= hmax:
                h = closed_form_height(case, parity, n)
                if h >= hmin and (n >= 0 or (case, parity, n) in SPECIAL_NEGATIVE):
                    out.append(CaseSpec(case, parity, n))
                n += 1
    return out
