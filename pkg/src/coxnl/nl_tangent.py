"""Tangent spaces to Noether-Lefschetz loci of hypersurfaces containing a complete intersection.

A datum is ``f = A_1 K_1 + ... + A_{k+1} K_{k+1}`` of class ``beta`` on a
toric ``(2k+1)``-fold, where ``V = {A_1 = ... = A_{k+1} = 0}``.  The flag
ideal ``I = (A, K)`` gives the tangent space ``I^beta``; a class
``P in S^N`` with ``N = (k+1) beta - beta0`` gives the annihilator
``T^beta(P)``.

Classes are paired through ``R_0 = S / J_0(f)`` after multiplying by
``x_1 ... x_r``: the space of zero classes is ``J_1^N = (J_0 : x_1...x_r)^N``,
which for nondegenerate ``f`` on projective space is the classical Jacobian
piece.
"""

from __future__ import annotations

import functools
import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cox_ring import CoxRing, GradedPolynomial
from .exact_linalg import RationalMatrix, solve
from .fan import DivisorClass
from .graded_ideal import (
    GradedIdeal,
    SubspaceOfDegree,
    emptiness_certificate,
    jacobian_ideal,
    nondegenerate_check,
    product_rows,
    quasi_smooth_check,
    transporter,
)


class NotContainedError(ValueError):
    """``f`` is not in the ideal of ``V``."""


class ZeroClassWarning(UserWarning):
    pass


# -- degrees and data -------------------------------------------------------------


def socle_degree_N(beta: DivisorClass, k: int,
                   beta0: DivisorClass | None = None) -> tuple[DivisorClass, DivisorClass]:
    """``N = (k+1) beta - beta0`` and the socle degree ``2N + beta0`` of ``J_0(f)``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if beta0 is None:
        beta0 = beta.fan.anticanonical()
    N = (k + 1) * beta - beta0
    return N, 2 * N + beta0


def decompose_on_ci(f: GradedPolynomial, A: Sequence[GradedPolynomial]) -> list[GradedPolynomial]:
    """Solve ``f = sum A_i K_i`` for ``K``.

    The unknowns are the coefficients of ``K_1``, then ``K_2``, ... in monomial
    order; the returned solution is the reduced-echelon one with every free
    unknown set to zero.
    """
    S = f.ring
    beta = f.degree
    rows, blocks = [], []
    for a in A:
        delta = beta - a.degree
        if not S.is_effective(delta):
            raise ValueError(f"class beta - deg A = ({delta.label()}) is not effective")
        r = product_rows(S, beta, a)
        blocks.append((delta, len(r)))
        rows.extend(r)
    n = S.dim(beta)
    if not rows:
        raise NotContainedError("V is not contained in X_f")
    M = RationalMatrix.from_sparse(rows, n).transpose()
    x = solve(M, f.vector())
    if x is None:
        raise NotContainedError("V is not contained in X_f")
    K, off = [], 0
    for delta, size in blocks:
        K.append(S.from_vector(delta, x[off:off + size]))
        off += size
    return K


def flag_ideal(A: Sequence[GradedPolynomial], K: Sequence[GradedPolynomial]) -> GradedIdeal:
    return GradedIdeal(A[0].ring, list(A) + list(K))


@dataclass
class FlagDatum:
    A: list[GradedPolynomial]
    K: list[GradedPolynomial]
    f: GradedPolynomial

    def __post_init__(self):
        S = self.ring
        if len(self.A) != len(self.K):
            raise ValueError("A and K must have the same length")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if S.fan.d != 2 * self.k + 1:
            raise ValueError(f"need a {2 * self.k + 1}-dimensional fan for {self.k + 1} equations")
        total = S.zero(self.f.degree)
        for a, kk in zip(self.A, self.K):
            if a.degree + kk.degree != self.f.degree:
                raise ValueError("deg A_i + deg K_i must equal deg f")
            total = total + a * kk
        if total != self.f:
            raise ValueError("f differs from sum A_i K_i")

    @property
    def ring(self) -> CoxRing:
        return self.f.ring

    @property
    def k(self) -> int:
        return len(self.A) - 1

    @property
    def beta(self) -> DivisorClass:
        return self.f.degree

    @property
    def ideal(self) -> GradedIdeal:
        return flag_ideal(self.A, self.K)

    @classmethod
    def build(cls, A: Sequence[GradedPolynomial], beta: DivisorClass | None = None,
              K: Sequence[GradedPolynomial] | None = None, f: GradedPolynomial | None = None,
              rng: random.Random | None = None, bound: int = 100) -> "FlagDatum":
        """Complete a datum: random ``K`` from ``rng`` if neither ``K`` nor ``f`` is given."""
        A = list(A)
        S = A[0].ring
        if K is None and f is None:
            if beta is None:
                raise ValueError("beta is required to generate K")
            rng = rng if rng is not None else random.Random(0)
            K = [S.random_polynomial(beta - a.degree, rng, bound) for a in A]
        if K is None:
            K = decompose_on_ci(f, A)
        K = list(K)
        if f is None:
            f = S.zero(A[0].degree + K[0].degree)
            for a, kk in zip(A, K):
                f = f + a * kk
        return cls(A, K, f)


# -- cached Jacobian data ---------------------------------------------------------------


@functools.lru_cache(maxsize=16)
def _jacobian(f: GradedPolynomial) -> GradedIdeal:
    return jacobian_ideal(f)


def _torus_monomial(ring: CoxRing) -> GradedPolynomial:
    return ring.monomial([1] * ring.r)


@functools.lru_cache(maxsize=16)
def zero_classes(f: GradedPolynomial, N: DivisorClass) -> SubspaceOfDegree:
    """``J_1^N = {P in S^N : x_1...x_r P in J_0(f)}``, the classes that vanish."""
    S = f.ring
    X = _torus_monomial(S)
    return transporter(S, N, [X], _jacobian(f).piece(N + X.degree))


# -- tangent spaces ---------------------------------------------------------------------


def tangent_space_from_class(f: GradedPolynomial, P: GradedPolynomial,
                             beta: DivisorClass | None = None) -> SubspaceOfDegree:
    """``T^beta(P) = {H in S^beta : x_1...x_r P H in J_0(f)}``.

    Warns with :class:`ZeroClassWarning` when ``P`` is a zero class, in which
    case the result is all of ``S^beta``.
    """
    S = f.ring
    beta = f.degree if beta is None else beta
    X = _torus_monomial(S)
    if zero_classes(f, P.degree).contains_polynomial(P):
        warnings.warn("P represents the zero class", ZeroClassWarning, stacklevel=2)
    target = _jacobian(f).piece(P.degree + beta + X.degree)
    return transporter(S, beta, [X * P], target)


def t0_kernel(f: GradedPolynomial, P: GradedPolynomial) -> SubspaceOfDegree:
    """Lift to ``S^N`` of the kernel of ``x_1...x_r P : R_0^N -> R_0^(2N + beta0)``."""
    S = f.ring
    X = _torus_monomial(S)
    target = _jacobian(f).piece(2 * P.degree + X.degree)
    return transporter(S, P.degree, [X * P], target)


@dataclass
class TransporterIdentity:
    from_t0: SubspaceOfDegree
    direct: SubspaceOfDegree

    @property
    def holds(self) -> bool:
        return self.from_t0 == self.direct


def transporter_identity(f: GradedPolynomial, P: GradedPolynomial,
                         beta: DivisorClass | None = None) -> TransporterIdentity:
    """Compare ``{H : H S^(N-beta) in T_0}`` with :func:`tangent_space_from_class`."""
    S = f.ring
    beta = f.degree if beta is None else beta
    T0 = t0_kernel(f, P)
    shifts = [S.monomial(m) for m in S.monomial_basis(P.degree - beta)]
    lifted = transporter(S, beta, shifts, T0) if shifts else SubspaceOfDegree.full(S, beta)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ZeroClassWarning)
        direct = tangent_space_from_class(f, P, beta)
    return TransporterIdentity(lifted, direct)


@dataclass
class HodgeCandidates:
    space: SubspaceOfDegree
    zero_classes: SubspaceOfDegree
    j0: SubspaceOfDegree

    @property
    def strict_over_j0(self) -> bool:
        return self.space.dim > self.j0.dim

    @property
    def nonzero_class_exists(self) -> bool:
        return self.space.dim > self.zero_classes.dim

    def sample(self, rng: random.Random, bound: int = 50, tries: int = 100) -> GradedPolynomial:
        """A random integer combination of the basis that is not a zero class."""
        if not self.nonzero_class_exists:
            raise ValueError("every candidate is a zero class")
        S = self.space.ring
        rows = self.space.basis.rows
        for _ in range(tries):
            coeffs = [rng.randint(-bound, bound) for _ in rows]
            vec = [sum((c * r[j] for c, r in zip(coeffs, rows)), Fraction(0))
                   for j in range(self.space.ambient_dim)]
            P = S.from_vector(self.space.degree, vec)
            if not self.zero_classes.contains_polynomial(P):
                return P
        raise RuntimeError("no nonzero class found in the sampled combinations")

    def lines(self) -> list[str]:
        return [f"candidates_dim={self.space.dim}", f"zero_classes_dim={self.zero_classes.dim}",
                f"j0_N_dim={self.j0.dim}",
                f"strict_over_j0={str(self.strict_over_j0).lower()}",
                f"nonzero_class_exists={str(self.nonzero_class_exists).lower()}"]


def hodge_class_candidates(datum: FlagDatum) -> HodgeCandidates:
    """``{P in S^N : x_1...x_r P I^beta in J_0(f)}`` with the zero classes and ``J_0^N``."""
    S, f, beta = datum.ring, datum.f, datum.beta
    N, _ = socle_degree_N(beta, datum.k)
    X = _torus_monomial(S)
    target = _jacobian(f).piece(N + beta + X.degree)
    Ib = datum.ideal.piece(beta)
    space = transporter(S, N, [X * h for h in Ib.polynomials()], target)
    return HodgeCandidates(space, zero_classes(f, N), _jacobian(f).piece(N))


# -- codimension report ---------------------------------------------------------------


@dataclass
class TangentReport:
    N: DivisorClass
    socle: DivisorClass
    dim_S_beta: int
    dim_J0_beta: int
    dim_I_beta: int
    j0_in_i: bool
    beta_le_N: bool
    flags: list[str] = field(default_factory=list)
    smoothness: str = "UNCHECKED"
    dim_T_beta: int | None = None
    t_equals_i: bool | None = None

    @property
    def codim(self) -> int:
        return self.dim_S_beta - self.dim_I_beta

    @property
    def status(self) -> str:
        if not self.j0_in_i or self.t_equals_i is False:
            return "FAIL"
        return "WARNED" if self.smoothness in ("INCONCLUSIVE", "REFUTED") or self.flags else "OK"

    def lines(self) -> list[str]:
        out = [f"N={self.N.label()}", f"socle_degree={self.socle.label()}",
               f"dim_S_beta={self.dim_S_beta}", f"dim_J0_beta={self.dim_J0_beta}",
               f"dim_I_beta={self.dim_I_beta}", f"codim={self.codim}",
               f"j0_in_i={str(self.j0_in_i).lower()}",
               f"beta_le_N={str(self.beta_le_N).lower()}",
               f"quasi_smooth={self.smoothness}"]
        if self.dim_T_beta is not None:
            out += [f"dim_T_beta={self.dim_T_beta}", f"t_equals_i={str(self.t_equals_i).lower()}"]
        out += [f"flag={x}" for x in self.flags]
        out.append(f"status={self.status}")
        return out


def _dependent_generators(gens: Sequence[GradedPolynomial]) -> bool:
    by_degree: dict[tuple, list[GradedPolynomial]] = {}
    for g in gens:
        by_degree.setdefault(g.degree.coords, []).append(g)
    for group in by_degree.values():
        if RationalMatrix([g.vector() for g in group], len(group[0].vector())).rank() < len(group):
            return True
    return False


def v_smoothness_ideal(A: Sequence[GradedPolynomial]) -> GradedIdeal:
    """``A`` together with the maximal minors of its Jacobian matrix."""
    S = A[0].ring
    n = len(A)
    gens = list(A)
    partials = [[a.derivative(rho) for rho in range(S.r)] for a in A]
    for cols in itertools.combinations(range(S.r), n):
        deg = sum((partials[i][c].degree for i, c in enumerate(cols)), S.fan.zero_class())
        minor = S.zero(deg)
        for perm in itertools.permutations(range(n)):
            sign = 1
            for i in range(n):
                for j in range(i + 1, n):
                    if perm[i] > perm[j]:
                        sign = -sign
            term = S.one()
            for i in range(n):
                term = term * partials[i][cols[perm[i]]]
            minor = minor + term.scale(sign)
        gens.append(minor)
    return GradedIdeal(S, gens)


def nl_tangent_codim(datum: FlagDatum, P: GradedPolynomial | None = None,
                     m_max: int | None = None, check_smoothness: bool = False) -> TangentReport:
    """Codimension of ``I^beta`` in ``S^beta`` with the consistency checks around it."""
    S, f, beta = datum.ring, datum.f, datum.beta
    N, socle = socle_degree_N(beta, datum.k)
    Ib = datum.ideal.piece(beta)
    Jb = _jacobian(f).piece(beta)
    report = TangentReport(
        N=N, socle=socle, dim_S_beta=S.dim(beta), dim_J0_beta=Jb.dim, dim_I_beta=Ib.dim,
        j0_in_i=Jb.issubset(Ib), beta_le_N=S.is_effective(N - beta))
    if not report.beta_le_N:
        report.flags.append("beta_outside_range")
    if _dependent_generators(datum.A + datum.K):
        report.flags.append("degenerate_generators")
    for d in datum.A:
        if not d.degree.is_ample():
            report.flags.append(f"A_degree_not_ample={d.degree.label()}")
    for kk in datum.K:
        if kk.degree == S.fan.zero_class():
            report.flags.append("constant_K")
    if check_smoothness:
        xf = quasi_smooth_check(f, m_max)
        v = emptiness_certificate(v_smoothness_ideal(datum.A), m_max)
        if xf.certified and v.certified:
            report.smoothness = "CERTIFIED"
        elif xf.certificate.refuted or v.refuted:
            report.smoothness = "REFUTED"
        else:
            report.smoothness = "INCONCLUSIVE"
    if P is not None:
        T = tangent_space_from_class(f, P, beta)
        report.dim_T_beta = T.dim
        report.t_equals_i = T == Ib
    return report


def is_nondegenerate(f: GradedPolynomial, m_max: int | None = None) -> bool:
    return nondegenerate_check(f, m_max).certified


# -- parameter count ------------------------------------------------------------------


@dataclass
class FamilyEstimate:
    choices_A: int
    choices_K: int
    dim_S_beta: int
    scaling: int
    koszul: int
    flags: list[str] = field(default_factory=list)

    @property
    def estimate(self) -> int:
        return self.choices_A + self.choices_K - self.scaling - self.koszul

    def lines(self) -> list[str]:
        out = [f"choices_A={self.choices_A}", f"choices_K={self.choices_K}",
               f"family_target_dim={self.dim_S_beta}", f"redundancy_scaling={self.scaling}",
               f"redundancy_koszul={self.koszul}", f"estimate_dim_image={self.estimate}",
               "estimate_kind=heuristic"]
        return out + [f"flag={x}" for x in self.flags]


def hilbert_family_diagnostic(ring: CoxRing, delta: Sequence[DivisorClass],
                              beta: DivisorClass) -> FamilyEstimate:
    """Naive dimension count of ``{sum A_i K_i}``; an estimate, not a theorem.

    Subtracts the changes of ``A`` by triangular substitutions (pairs with
    ``delta_i - delta_j`` effective) and the Koszul moves
    ``(K_i, K_j) -> (K_i + G A_j, K_j - G A_i)`` for ``i < j``.
    """
    delta = list(delta)
    flags = []
    for d in delta:
        if not ring.is_effective(beta - d):
            raise ValueError(f"beta - delta = ({(beta - d).label()}) is not effective")
        if d == beta:
            flags.append("delta_equals_beta")
    scaling = sum(ring.dim(a - b) for a in delta for b in delta)
    koszul = sum(ring.dim(beta - a - b) for a, b in itertools.combinations(delta, 2))
    return FamilyEstimate(sum(ring.dim(d) for d in delta),
                          sum(ring.dim(beta - d) for d in delta),
                          ring.dim(beta), scaling, koszul, flags)
