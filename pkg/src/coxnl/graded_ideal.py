"""Graded ideals of the Cox ring, computed one graded piece at a time.

A graded piece ``I^alpha`` is the row span of the products ``m * g`` over
generators ``g`` and monomials ``m`` of class ``alpha - deg g``, stored in
reduced row echelon form so that equal subspaces have equal matrices.
"""

from __future__ import annotations

import itertools

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cox_ring import CoxRing, GradedPolynomial, Monomial
from .exact_linalg import RationalMatrix, kernel_basis
from .fan import DivisorClass


class SubspaceOfDegree:
    """A subspace of ``S^alpha`` given by spanning rows.

    The reduced row echelon ``basis`` and the ``annihilator`` (a basis of the
    linear forms vanishing on the subspace) are both computed on demand.  For
    pieces of small codimension the annihilator is far cheaper to use:
    membership and quotient coordinates only need ``v @ annihilator^T``.
    Rows are coefficient vectors in the order of ``ring.monomial_basis(degree)``.
    """

    def __init__(self, ring: CoxRing, degree: DivisorClass, rows: RationalMatrix,
                 reduced: bool = False):
        self.ring = ring
        self.degree = degree
        self.ambient_dim = ring.dim(degree)
        if rows.ncols != self.ambient_dim:
            raise ValueError("row length does not match the graded piece")
        self._span = rows
        self._basis = None
        self._pivots = None
        self._ann = None
        if reduced:
            self._basis = rows
            self._pivots = tuple(min(r) for r in rows.sparse_rows())

    @classmethod
    def full(cls, ring: CoxRing, degree: DivisorClass) -> "SubspaceOfDegree":
        n = ring.dim(degree)
        return cls(ring, degree, RationalMatrix.identity(n) if n else RationalMatrix.zeros(0, 0),
                   reduced=True)

    @classmethod
    def zero(cls, ring: CoxRing, degree: DivisorClass) -> "SubspaceOfDegree":
        return cls(ring, degree, RationalMatrix.zeros(0, ring.dim(degree)), reduced=True)

    def __repr__(self):
        return f"SubspaceOfDegree({self.degree.label()}: {self.dim}/{self.ambient_dim})"

    def _reduce_basis(self):
        if self._basis is None:
            self._basis, self._pivots = self._span.rref()

    @property
    def basis(self) -> RationalMatrix:
        self._reduce_basis()
        return self._basis

    @property
    def pivots(self) -> tuple[int, ...]:
        self._reduce_basis()
        return self._pivots

    @property
    def annihilator(self) -> RationalMatrix:
        """Rows spanning the linear forms that vanish on the subspace (not canonical)."""
        if self._ann is None:
            src = self._basis if self._basis is not None else self._span
            if src.nrows == 0:
                self._ann = RationalMatrix.identity(self.ambient_dim)
            else:
                self._ann = kernel_basis(src, canonical=False)
        return self._ann

    @property
    def dim(self) -> int:
        if self._basis is None and self._ann is not None:
            return self.ambient_dim - self._ann.nrows
        return len(self.pivots)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def __eq__(self, other):
        return isinstance(other, SubspaceOfDegree) and self.degree == other.degree \
            and self.basis == other.basis

    def __hash__(self):
        return hash((self.degree, self.dim))

    @property
    def free_columns(self) -> list[int]:
        """Monomial indices outside the pivots; they give a basis of ``S^alpha / self``."""
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def reduce(self, vectors: RationalMatrix) -> RationalMatrix:
        """Normal forms of the rows of ``vectors`` modulo this subspace.

        The result is expressed on :attr:`free_columns` only (pivot entries of
        a normal form vanish).
        """
        if vectors.ncols != self.ambient_dim:
            raise ValueError("vector length does not match the graded piece")
        free = self.free_columns
        if vectors.nrows == 0:
            return RationalMatrix.zeros(0, len(free))
        if not self.pivots:
            return vectors.take_columns(free) if free else RationalMatrix.zeros(vectors.nrows, 0)
        if not free:
            return RationalMatrix.zeros(vectors.nrows, 0)
        coeffs = vectors.take_columns(self.pivots)
        return (vectors - coeffs @ self.basis).take_columns(free)

    def quotient_coordinates(self, vectors: RationalMatrix) -> RationalMatrix:
        """Images of the rows of ``vectors`` in ``S^alpha / self``, via the annihilator.

        These are coordinates for an isomorphism of the quotient, not normal
        forms; a row is zero exactly when the vector lies in the subspace.
        """
        if vectors.ncols != self.ambient_dim:
            raise ValueError("vector length does not match the graded piece")
        ann = self.annihilator
        if ann.nrows == 0 or vectors.nrows == 0:
            return RationalMatrix.zeros(vectors.nrows, ann.nrows)
        return vectors @ ann.transpose()

    def contains_vector(self, v: Sequence) -> bool:
        m = RationalMatrix([list(v)], self.ambient_dim)
        if self._basis is None and self._ann is not None:
            return self.quotient_coordinates(m).is_zero()
        return self.reduce(m).is_zero()

    def contains_polynomial(self, g: GradedPolynomial) -> bool:
        if g.degree != self.degree:
            raise ValueError("degree mismatch")
        return self.contains_vector(g.vector())

    def issubset(self, other: "SubspaceOfDegree") -> bool:
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        if self.dim == 0:
            return True
        if other._basis is None and other._ann is not None:
            return other.quotient_coordinates(self.basis).is_zero()
        return other.reduce(self.basis).is_zero()

    def polynomials(self) -> list[GradedPolynomial]:
        return [self.ring.from_vector(self.degree, r) for r in self.basis.rows]


def product_rows(ring: CoxRing, alpha: DivisorClass, g: GradedPolynomial) -> list[dict]:
    """Coefficient rows of ``m * g`` for every monomial ``m`` of class ``alpha - deg g``."""
    if g.is_zero():
        return []
    idx = ring.basis_index(alpha)
    shift = ring.monomial_basis(alpha - g.degree)
    items = list(g.terms.items())
    rows = []
    for m in shift:
        rows.append({idx[tuple(a + b for a, b in zip(m, e))]: c for e, c in items})
    return rows


def _dedupe(rows: list[dict]) -> list[dict]:
    seen, out = set(), []
    for r in rows:
        key = tuple(sorted(r.items()))
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


class GradedIdeal:
    """An ideal given by homogeneous generators; zero generators are kept."""

    def __init__(self, ring: CoxRing, generators: Sequence[GradedPolynomial]):
        self.ring = ring
        self.generators = tuple(generators)
        for g in self.generators:
            if g.ring is not ring:
                raise ValueError("generator from a different ring")
        self._pieces: dict[tuple, SubspaceOfDegree] = {}

    def __repr__(self):
        degs = ", ".join(g.degree.label() for g in self.generators)
        return f"GradedIdeal(<{len(self.generators)} generators of degrees {degs}>)"

    def __add__(self, other: "GradedIdeal") -> "GradedIdeal":
        return GradedIdeal(self.ring, self.generators + other.generators)

    def with_generators(self, extra: Sequence[GradedPolynomial]) -> "GradedIdeal":
        return GradedIdeal(self.ring, self.generators + tuple(extra))

    def piece(self, alpha: DivisorClass) -> SubspaceOfDegree:
        key = alpha.coords
        if key not in self._pieces:
            self._pieces[key] = graded_piece(self, alpha)
        return self._pieces[key]

    def quotient_dim(self, alpha: DivisorClass) -> int:
        return self.piece(alpha).codim

    def contains(self, g: GradedPolynomial) -> bool:
        return self.piece(g.degree).contains_polynomial(g)


def graded_piece(I: GradedIdeal, alpha: DivisorClass) -> SubspaceOfDegree:
    ring = I.ring
    n = ring.dim(alpha)
    rows: list[dict] = []
    for g in I.generators:
        rows.extend(product_rows(ring, alpha, g))
    rows = _dedupe(rows)
    if not rows or n == 0:
        return SubspaceOfDegree.zero(ring, alpha)
    return SubspaceOfDegree(ring, alpha, RationalMatrix.from_sparse(rows, n))


def quotient_dim(I: GradedIdeal, alpha: DivisorClass) -> int:
    return I.quotient_dim(alpha)


def contains(I: GradedIdeal, g: GradedPolynomial) -> bool:
    return I.contains(g)


def transporter(ring: CoxRing, alpha: DivisorClass, multipliers: Sequence[GradedPolynomial],
                target: SubspaceOfDegree) -> SubspaceOfDegree:
    """``{h in S^alpha : g * h in target for every multiplier g}``.

    Every multiplier must have degree ``target.degree - alpha``.
    """
    n = ring.dim(alpha)
    if n == 0:
        return SubspaceOfDegree.zero(ring, alpha)
    blocks = []
    for g in multipliers:
        if g.degree + alpha != target.degree:
            raise ValueError("multiplier degree does not match the target")
        rows = product_rows(ring, target.degree, g)
        if not rows:
            continue
        blocks.append(target.quotient_coordinates(
            RationalMatrix.from_sparse(rows, target.ambient_dim)))
    big = [dict() for _ in range(n)]
    off = 0
    for B in blocks:
        for i, r in enumerate(B.sparse_rows()):
            for j, v in r.items():
                big[i][off + j] = v
        off += B.ncols
    if off == 0:
        return SubspaceOfDegree.full(ring, alpha)
    K = kernel_basis(RationalMatrix.from_sparse(big, off).transpose())
    if K.nrows == 0:
        return SubspaceOfDegree.zero(ring, alpha)
    return SubspaceOfDegree(ring, alpha, K, reduced=True)


def jacobian_ideal(f: GradedPolynomial) -> GradedIdeal:
    """Toric Jacobian ideal: the ``r`` log-derivatives ``x_rho df/dx_rho``."""
    return GradedIdeal(f.ring, [f.log_derivative(rho) for rho in range(f.ring.r)])


def partials_ideal(f: GradedPolynomial) -> GradedIdeal:
    """``(f, df/dx_rho ...)``; its toric vanishing locus is empty iff ``X_f`` is quasi-smooth."""
    return GradedIdeal(f.ring, [f] + [f.derivative(rho) for rho in range(f.ring.r)])


# -- emptiness certificates ------------------------------------------------------


def default_m_max(I: GradedIdeal) -> int:
    """Sum of the ``d + 1`` largest generator total degrees.

    For ``d + 1`` forms cutting out nothing on projective space this exceeds
    the socle degree ``sum(deg - 1)`` of the quotient, so the search reaches
    every witness there.
    """
    tot = sorted((max(sum(m) for m in g.terms) for g in I.generators if not g.is_zero()),
                 reverse=True)
    return max(1, sum(tot[: I.ring.fan.d + 1]))


@dataclass
class EmptinessCertificate:
    """Per-cone least ``m`` with ``xhat_sigma^m`` in the ideal (None where not found)."""

    witnesses: list[int | None]
    m_max: int
    xhat: list[Monomial] = field(default_factory=list)
    # rays of a face whose distinguished point (zero exactly on those rays) lies in V_T(I)
    nonempty_face: tuple[int, ...] | None = None

    @property
    def refuted(self) -> bool:
        return self.nonempty_face is not None

    @property
    def certified(self) -> bool:
        return all(w is not None for w in self.witnesses)

    @property
    def verdict(self) -> str:
        return "CERTIFIED" if self.certified else "INCONCLUSIVE"

    def failing_cones(self) -> list[int]:
        return [i for i, w in enumerate(self.witnesses) if w is None]

    def lines(self) -> list[str]:
        out = []
        for i, w in enumerate(self.witnesses):
            out.append(f"cone={i} witness={'none' if w is None else w}")
        out.append(f"m_max={self.m_max}")
        out.append(f"certificate={self.verdict}")
        if self.refuted:
            out.append("nonempty_witness=zero_on_rays(" + ",".join(map(str, self.nonempty_face))
                       + ")")
        return out


def nonempty_face(I: GradedIdeal) -> tuple[int, ...] | None:
    """A face ``tau`` of the fan whose point ``x_rho = [rho in tau ? 0 : 1]`` is a common zero.

    That point lies outside ``V(B)``, so a hit proves ``V_T(I)`` nonempty.
    """
    fan = I.ring.fan
    faces = {()}
    for cone in fan.cones:
        for k in range(1, len(cone) + 1):
            faces.update(itertools.combinations(sorted(cone), k))
    gens = [g for g in I.generators if not g.is_zero()]
    for tau in sorted(faces, key=lambda t: (len(t), t)):
        if all(sum((c for m, c in g.terms.items() if not any(m[i] for i in tau)), 0) == 0
               for g in gens):
            return tau
    return None


def emptiness_certificate(I: GradedIdeal, m_max: int | None = None) -> EmptinessCertificate:
    """Certify ``V_T(I)`` empty by finding powers of the irrelevant monomials in ``I``.

    A failure only means no witness exists up to ``m_max``; it never proves
    the locus nonempty.
    """
    ring = I.ring
    fan = ring.fan
    if m_max is None:
        m_max = default_m_max(I)
    witnesses, xhats = [], []
    for cone in fan.cones:
        xhat = tuple(0 if rho in cone else 1 for rho in range(fan.r))
        xhats.append(xhat)

        def member(m: int) -> bool:
            g = ring.monomial([m * e for e in xhat])
            return I.contains(g)

        if m_max < 1 or not member(m_max):
            witnesses.append(None)
            continue
        # membership is monotone in m, so bisect for the least witness
        lo, hi = 0, m_max
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if member(mid):
                hi = mid
            else:
                lo = mid
        witnesses.append(hi)
    cert = EmptinessCertificate(witnesses, m_max, xhats)
    if not cert.certified:
        cert.nonempty_face = nonempty_face(I)
    return cert


@dataclass
class NondegeneracyVerdict:
    certificate: EmptinessCertificate
    kind: str = "nondegenerate"

    @property
    def certified(self) -> bool:
        return self.certificate.certified

    @property
    def verdict(self) -> str:
        return f"certified-{self.kind}" if self.certified else "inconclusive"

    def lines(self) -> list[str]:
        return self.certificate.lines() + [f"verdict={self.verdict}"]


def nondegenerate_check(f: GradedPolynomial, m_max: int | None = None) -> NondegeneracyVerdict:
    """Certify that the log-derivatives of ``f`` have no common zero on ``X_f``."""
    I = GradedIdeal(f.ring, [f]) + jacobian_ideal(f)
    return NondegeneracyVerdict(emptiness_certificate(I, m_max))


def quasi_smooth_check(f: GradedPolynomial, m_max: int | None = None) -> NondegeneracyVerdict:
    """Certify that ``f`` and its partial derivatives have no common zero off ``V(B)``."""
    return NondegeneracyVerdict(emptiness_certificate(partials_ideal(f), m_max), "quasi-smooth")
