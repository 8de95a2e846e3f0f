"""Socle functionals, apolarity and Poincare-duality pairings of graded quotients.

For an ideal ``I`` whose quotient is one-dimensional in degree ``N``, the
functional ``L`` on ``S^N`` vanishing on ``I^N`` is unique up to scale.  The
ideal is Cox-Gorenstein when every piece ``I^alpha`` is recovered from ``L``
by apolarity and the toric vanishing locus of ``I`` is empty.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .cox_ring import CoxRing, GradedPolynomial
from .exact_linalg import RationalMatrix, determinant, kernel_basis
from .fan import DivisorClass, Fan
from .graded_ideal import (
    EmptinessCertificate,
    GradedIdeal,
    SubspaceOfDegree,
    emptiness_certificate,
)


class SocleDimensionError(ValueError):
    def __init__(self, dimension: int, degree: DivisorClass):
        self.dimension = dimension
        self.degree = degree
        super().__init__(f"quotient has dimension {dimension} in degree ({degree.label()}), "
                         "expected 1")


# -- Euler form -----------------------------------------------------------------


@dataclass(frozen=True)
class EulerForm:
    """``det(e_iota)`` for every ascending ``d``-subset ``iota`` of rays."""

    terms: dict[tuple[int, ...], int]

    def lines(self) -> list[str]:
        return [f"iota={','.join(map(str, k))} det={v}" for k, v in self.terms.items()]


def euler_coefficients(fan: Fan) -> EulerForm:
    terms = {}
    for iota in itertools.combinations(range(fan.r), fan.d):
        terms[iota] = int(determinant([fan.rays[i] for i in iota]))
    return EulerForm(terms)


# -- socle functional -----------------------------------------------------------


@dataclass(frozen=True)
class SocleFunctional:
    """A linear form on ``S^N`` given by its values on the monomial basis."""

    ring: CoxRing
    degree: DivisorClass
    coefficients: tuple[Fraction, ...]

    def __call__(self, g: GradedPolynomial) -> Fraction:
        if g.degree != self.degree:
            raise ValueError("degree mismatch")
        idx = self.ring.basis_index(self.degree)
        return sum((c * self.coefficients[idx[m]] for m, c in g.terms.items()), Fraction(0))

    def support(self) -> dict:
        basis = self.ring.monomial_basis(self.degree)
        return {basis[i]: c for i, c in enumerate(self.coefficients) if c}

    def bilinear_matrix(self, left: DivisorClass, right: DivisorClass,
                        rows=None, cols=None) -> RationalMatrix:
        """``[L(m_i * m_j)]`` over monomial bases of ``left`` and ``right`` (optionally subsets)."""
        S = self.ring
        lb = S.monomial_basis(left)
        rb = S.monomial_basis(right)
        rows = range(len(lb)) if rows is None else rows
        cols = list(range(len(rb))) if cols is None else list(cols)
        idx = S.basis_index(self.degree)
        L = self.coefficients
        out = []
        for i in rows:
            a = lb[i]
            row = {}
            for k, j in enumerate(cols):
                v = L[idx[tuple(x + y for x, y in zip(a, rb[j]))]]
                if v:
                    row[k] = v
            out.append(row)
        return RationalMatrix.from_sparse(out, len(cols))


def socle_functional(I: GradedIdeal, N: DivisorClass) -> SocleFunctional:
    """The functional vanishing on ``I^N``, scaled so its first nonzero coordinate is 1."""
    piece = I.piece(N)
    if piece.codim != 1:
        raise SocleDimensionError(piece.codim, N)
    if piece.dim == 0:
        coeffs = [Fraction(1)]
    else:
        coeffs = list(kernel_basis(piece.basis).rows[0])
    return SocleFunctional(I.ring, N, tuple(coeffs))


# -- apolarity ------------------------------------------------------------------


def pairs_with_complement(L: SocleFunctional, alpha: DivisorClass) -> bool:
    """True when both ``alpha`` and ``N - alpha`` are effective."""
    return L.ring.is_effective(alpha) and L.ring.is_effective(L.degree - alpha)


def apolar_piece(L: SocleFunctional, alpha: DivisorClass) -> SubspaceOfDegree:
    """``{f in S^alpha : L(f g) = 0 for all g in S^(N - alpha)}``.

    When ``N - alpha`` is not effective there is nothing to pair with and the
    whole of ``S^alpha`` is returned; see :func:`pairs_with_complement`.
    """
    S = L.ring
    if not pairs_with_complement(L, alpha):
        return SubspaceOfDegree.full(S, alpha)
    B = L.bilinear_matrix(alpha, L.degree - alpha)
    K = kernel_basis(B.transpose())
    if K.nrows == 0:
        return SubspaceOfDegree.zero(S, alpha)
    return SubspaceOfDegree(S, alpha, K, reduced=True)


def pairing_degrees(ring: CoxRing, N: DivisorClass) -> list[DivisorClass]:
    """All classes ``alpha`` with ``alpha`` and ``N - alpha`` effective, sorted by coordinates.

    Every such ``alpha`` is the class of a monomial dividing a monomial of
    class ``N``, so a search adding one variable at a time reaches all of them.
    """
    if not ring.is_effective(N):
        return []
    steps = [ring.degree([int(i == j) for j in range(ring.r)]) for i in range(ring.r)]
    seen = {ring.fan.zero_class().coords: ring.fan.zero_class()}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for a in frontier:
            for s in steps:
                b = a + s
                if b.coords not in seen and ring.is_effective(N - b):
                    seen[b.coords] = b
                    nxt.append(b)
        frontier = nxt
    return [seen[k] for k in sorted(seen)]


@dataclass
class PairingResult:
    matrix: RationalMatrix
    rank: int
    left_dim: int
    right_dim: int

    @property
    def nondegenerate(self) -> bool:
        return self.rank == self.left_dim == self.right_dim


def pairing_matrix(I: GradedIdeal, N: DivisorClass, alpha: DivisorClass,
                   L: SocleFunctional | None = None) -> PairingResult:
    """Matrix of ``R^alpha x R^(N - alpha) -> R^N`` on the quotient monomial bases."""
    if L is None:
        L = socle_functional(I, N)
    S = I.ring
    beta = N - alpha
    left = I.piece(alpha).free_columns if S.is_effective(alpha) else []
    right = I.piece(beta).free_columns if S.is_effective(beta) else []
    if not left or not right:
        M = RationalMatrix.zeros(len(left), len(right))
        return PairingResult(M, 0, len(left), len(right))
    M = L.bilinear_matrix(alpha, beta, rows=left, cols=right)
    return PairingResult(M, M.rank(), len(left), len(right))


# -- the Gorenstein check -------------------------------------------------------


@dataclass
class DegreeCheck:
    alpha: DivisorClass
    ideal_dim: int
    apolar_dim: int
    equal: bool
    convention: bool = False

    def line(self) -> str:
        s = (f"alpha={self.alpha.label()} ideal_dim={self.ideal_dim} "
             f"apolar_dim={self.apolar_dim} equal={str(self.equal).lower()}")
        return s + (" convention=full" if self.convention else "")


@dataclass
class GorensteinReport:
    N: DivisorClass
    socle_dim: int
    degrees: list[DegreeCheck] = field(default_factory=list)
    certificate: EmptinessCertificate | None = None

    @property
    def clause_a(self) -> bool:
        return self.socle_dim == 1

    @property
    def clause_b(self) -> bool:
        return self.clause_a and all(c.equal for c in self.degrees)

    @property
    def first_failing_alpha(self) -> DivisorClass | None:
        return next((c.alpha for c in self.degrees if not c.equal), None)

    @property
    def clause_c(self) -> str:
        if self.certificate is None:
            return "UNCHECKED"
        if self.certificate.certified:
            return "PASS"
        return "FAIL" if self.certificate.refuted else "INCONCLUSIVE"

    @property
    def verdict(self) -> str:
        if not (self.clause_a and self.clause_b) or self.clause_c == "FAIL":
            return "FAIL"
        if self.clause_c != "PASS":
            return "INCONCLUSIVE"
        return "PASS"

    def lines(self) -> list[str]:
        out = [f"N={self.N.label()}", f"socle_dim={self.socle_dim}",
               f"clause_a={'PASS' if self.clause_a else 'FAIL'}"]
        out += [c.line() for c in self.degrees]
        if self.clause_a:
            out.append(f"clause_b={'PASS' if self.clause_b else 'FAIL'}")
            bad = self.first_failing_alpha
            if bad is not None:
                out.append(f"first_failing_alpha={bad.label()}")
        else:
            out.append("clause_b=SKIPPED")
        if self.certificate is not None:
            out += self.certificate.lines()
            out.append(f"clause_c={self.clause_c}")
        out.append(f"verdict={self.verdict}")
        return out


def verify_cox_gorenstein(I: GradedIdeal, N: DivisorClass, m_max: int | None = None,
                          certify: bool = True) -> GorensteinReport:
    report = GorensteinReport(N, I.quotient_dim(N))
    if report.clause_a:
        L = socle_functional(I, N)
        for alpha in pairing_degrees(I.ring, N):
            ideal = I.piece(alpha)
            apolar = apolar_piece(L, alpha)
            report.degrees.append(DegreeCheck(alpha, ideal.dim, apolar.dim, ideal == apolar,
                                              not pairs_with_complement(L, alpha)))
    if certify:
        report.certificate = emptiness_certificate(I, m_max)
    return report
