"""Numerical invariants of quartic del Pezzo fibrations over P^1.

Splitting types of vector bundles on P^1, the height/Euler-characteristic
identities, Euler characteristics on P^1 x P^4 assembled from Koszul complexes,
and the small counting formulas used for section spaces and high-height models.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable


@dataclass(frozen=True)
class SplittingType:
    """The bundle O(a_1) + ... + O(a_r) on P^1, stored as a sorted tuple."""

    degrees: tuple

    def __init__(self, degrees: Iterable[int]):
        ds = tuple(sorted(int(a) for a in degrees))
        if not ds:
            raise ValueError("a splitting type needs rank >= 1")
        object.__setattr__(self, "degrees", ds)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    def is_balanced(self) -> bool:
        return self.degrees[-1] - self.degrees[0] <= 1

    def __str__(self) -> str:
        parts = []
        for a in sorted(set(self.degrees), reverse=True):
            k = self.degrees.count(a)
            parts.append(f"O({a})" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts)

    def to_json(self) -> list[int]:
        return list(self.degrees)


def sym2(S: SplittingType) -> SplittingType:
    d = S.degrees
    return SplittingType(d[i] + d[j] for i in range(len(d)) for j in range(i, len(d)))


def twist(S: SplittingType, m: int) -> SplittingType:
    return SplittingType(a + m for a in S.degrees)


def h0(S: SplittingType) -> int:
    return sum(max(0, a + 1) for a in S.degrees)


def height_from_splitting(S: SplittingType) -> int:
    """h = -2 deg(pi_* omega^{-1}) for the rank-five pushforward."""
    if S.rank != 5:
        raise ValueError(f"the anticanonical pushforward has rank 5, got rank {S.rank}")
    return -2 * S.degree


# -- height identities


@dataclass(frozen=True)
class NumerologyReport:
    h: int
    h11: int
    delta: int
    chi: int
    chi_omega1: int
    params: int
    h12: int

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "delta": self.delta,
            "chi": self.chi,
            "chiOmega1": self.chi_omega1,
            "params": self.params,
        }

    def to_json_full(self) -> dict:
        out = self.to_json()
        out.update({"h11": self.h11, "h12": self.h12})
        return out


def numerology(h: int, h11: int = 2) -> NumerologyReport:
    """Singular-fiber count, Euler characteristics, parameter count and h^{12} from the height."""
    if h < 0 or h % 2:
        raise ValueError(f"height must be a non-negative even integer, got {h}")
    return NumerologyReport(
        h=h,
        h11=h11,
        delta=2 * h,
        chi=16 - 2 * h,
        chi_omega1=h - 7,
        params=3 * h // 2 - 1,
        h12=h + h11 - 7,
    )


# -- Euler characteristics on P = P^1 x P^4


def binom_poly(x: int, k: int) -> int:
    """C(x, k) as the polynomial x(x-1)...(x-k+1)/k!, valid for negative x."""
    num = 1
    for i in range(k):
        num *= x - i
    q, r = divmod(num, factorial(k))
    assert r == 0
    return q


def chi_OP(a: int, b: int) -> int:
    """chi(O_P(a, b)) = (a + 1) C(b + 4, 4)."""
    return (a + 1) * binom_poly(b + 4, 4)


def chi_Omega1P(a: int, b: int) -> int:
    """chi(Omega^1_P(a, b)) = (a - 1) C(b + 4, 4) + (5 C(b + 3, 4) - C(b + 4, 4)) (a + 1)."""
    return (a - 1) * binom_poly(b + 4, 4) + (5 * binom_poly(b + 3, 4) - binom_poly(b + 4, 4)) * (a + 1)


def chi_projective_space(r: int, b: int) -> int:
    """chi(O_{P^r}(b)) from monomial counts and Serre duality (no closed-form binomials)."""
    if b >= 0:
        return comb(b + r, r)
    if b >= -r:
        return 0
    return (-1) ** r * comb(-b - 1, r)


def chi_omega_projective_space(r: int, b: int) -> int:
    """chi(Omega^1_{P^r}(b)) from the Euler sequence 0 -> Omega(b) -> O(b-1)^(r+1) -> O(b) -> 0."""
    return (r + 1) * chi_projective_space(r, b - 1) - chi_projective_space(r, b)


def chi_Omega1P_euler(a: int, b: int) -> int:
    """Oracle for chi_Omega1P: Kunneth on Omega_P = pr1^* Omega_{P^1} + pr2^* Omega_{P^4}."""
    return chi_omega_projective_space(1, a) * chi_projective_space(4, b) + chi_projective_space(
        1, a
    ) * chi_omega_projective_space(4, b)


def chi_OX(a: int, b: int, n: int) -> int:
    """chi(O_X(a, b)) for X a complete intersection of two (n, 2) forms, via Koszul."""
    return chi_OP(a, b) - 2 * chi_OP(a - n, b - 2) + chi_OP(a - 2 * n, b - 4)


def chi_Omega1P_on_X(a: int, b: int, n: int) -> int:
    """chi(Omega^1_P|_X (a, b)) via the same Koszul complex."""
    return chi_Omega1P(a, b) - 2 * chi_Omega1P(a - n, b - 2) + chi_Omega1P(a - 2 * n, b - 4)


@dataclass(frozen=True)
class KoszulChi:
    chi_omega1: int
    chi_top: int
    h2_omega1: int
    chi_structure_sheaf: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.chi_omega1, self.chi_top, self.h2_omega1)


def chi_via_koszul(n: int, h11: int = 2) -> KoszulChi:
    """Euler characteristics of X = {two (n, 2) forms} in P^1 x P^4.

    chi(Omega^1_X) = chi(Omega^1_P|_X) - 2 chi(O_X(-n, -2)) from the conormal sequence;
    the topological Euler characteristic is 2 chi(O_X) - 2 chi(Omega^1_X) by Serre
    duality; h^2(Omega^1_X) = chi(Omega^1_X) + h^{11} when h^{10} = h^{13} = 0.
    """
    if n < 1:
        raise ValueError("the Koszul computation is stated for n >= 1")
    chi_o = chi_OX(0, 0, n)
    chi1 = chi_Omega1P_on_X(0, 0, n) - 2 * chi_OX(-n, -2, n)
    return KoszulChi(chi1, 2 * chi_o - 2 * chi1, chi1 + h11, chi_o)


# -- counting formulas


def rr_quartic_count(deg: int, genus: int, ambient_poly_deg: int = 4) -> int:
    """Expected dimension of degree-a surfaces in P^3 through a curve of given degree and genus.

    C(a + 3, 3) - (a * deg + 1 - genus), with a = ambient_poly_deg.
    """
    a = ambient_poly_deg
    return comb(a + 3, 3) - (a * deg + 1 - genus)


def section_count_table(d: int) -> tuple:
    """(secancy, parameters) for degree-d sections; secancy is None at d = 0."""
    if d < 0:
        raise ValueError("section degree must be non-negative")
    if d == 0:
        return (None, 1)
    return (2 * d - 1, d + 1)


def dim_grassmannian(k: int, n: int) -> int:
    return k * (n - k)


def dim_pgl(n: int) -> int:
    return n * n - 1


@dataclass(frozen=True)
class HighHeightRow:
    m: int
    height: int
    ambient: int
    anticanonical_degree: int
    contracted_sections: int
    expected_params: int
    nodal_model_dim: int | None
    nodal_model: str

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "height": self.height,
            "ambientP": self.ambient,
            "degreeY": self.anticanonical_degree,
            "contractedSections": self.contracted_sections,
            "expectedParams": self.expected_params,
            "nodalModelDim": self.nodal_model_dim,
            "nodalModel": self.nodal_model,
        }


def expected_dims_high_height() -> list[HighHeightRow]:
    """Heights 14 + 2m (m = 0..3): the anticanonical image Y and its nodal-model dimension count.

    h = 16: three quadrics in P^6 with four nodes, dim Gr(3, 28) - dim PGL_7 - 4.
    h = 18: a (2, 3) complete intersection in P^5 with eight nodes.
    h = 20: a quartic in P^4 with sixteen nodes, counted on the vector space
            Gamma(O(4)) (70 dimensions) rather than its projectivization, which is
            the count that gives 30.
    """
    q6 = comb(6 + 2, 2)  # quadrics in P^6
    h16 = dim_grassmannian(3, q6) - dim_pgl(7) - 4
    quad5, cubic5 = comb(5 + 2, 2), comb(5 + 3, 3)
    h18 = (quad5 - 1) + (cubic5 - 6 - 1) - dim_pgl(6) - 8
    h20 = comb(4 + 4, 4) - dim_pgl(5) - 16
    dims = {0: None, 1: h16, 2: h18, 3: h20}
    models = {
        0: "degree-10 Fano threefold with 2 nodes",
        1: "three quadrics in P^6 with 4 nodes",
        2: "quadric and cubic in P^5 with 8 nodes",
        3: "quartic threefold in P^4 with 16 nodes",
    }
    rows = []
    for m in range(4):
        h = 14 + 2 * m
        rows.append(
            HighHeightRow(
                m=m,
                height=h,
                ambient=7 - m,
                anticanonical_degree=10 - 2 * m,
                contracted_sections=2 ** (m + 1),
                expected_params=numerology(h).params,
                nodal_model_dim=dims[m],
                nodal_model=models[m],
            )
        )
    return rows


def conic_family_params() -> int:
    """Two (1, 2) forms in P^1 x P^4 up to automorphisms: 2(2*15 - 2) - (3 + 24)."""
    return 2 * (2 * comb(6, 2) - 2) - (dim_pgl(2) + dim_pgl(5))
