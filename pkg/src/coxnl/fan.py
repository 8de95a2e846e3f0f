"""Simplicial complete fans, their class groups and divisor classes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact_linalg import (
    IntegerMatrix,
    RationalMatrix,
    determinant,
    hermite_normal_form,
    integer_inverse,
    smith_normal_form,
)


class FanError(ValueError):
    """Raised for malformed fans (non-primitive or repeated rays, dependent cones)."""


@dataclass
class FanReport:
    simplicial: bool
    complete: bool
    errors: list[str] = field(default_factory=list)
    violating_cones: list[int] = field(default_factory=list)
    # completeness plus an ample class is accepted as the projectivity proxy
    projectivity: str = "not checked; supply an ample class to is_ample"

    @property
    def valid(self) -> bool:
        return self.simplicial and self.complete and not self.errors

    def lines(self) -> list[str]:
        out = [f"simplicial={str(self.simplicial).lower()}",
               f"complete={str(self.complete).lower()}"]
        out += [f"error={e}" for e in self.errors]
        if self.violating_cones:
            out.append("violating_cones=" + ",".join(map(str, self.violating_cones)))
        out.append(f"projectivity={self.projectivity}")
        return out


@dataclass(frozen=True)
class ClassGroup:
    """Cokernel of ``M -> Z^r``; ``projection`` maps ray coefficients to free coordinates."""

    free_rank: int
    torsion: tuple[int, ...]
    projection: IntegerMatrix          # free_rank x r, Hermite normal form
    torsion_rows: IntegerMatrix        # len(torsion) x r, read modulo torsion
    section: IntegerMatrix             # r x (free_rank + len(torsion)), a right inverse

    def coords(self, a: Sequence) -> tuple:
        free = tuple(sum(p * x for p, x in zip(row, a)) for row in self.projection.rows)
        tors = tuple(sum(p * x for p, x in zip(row, a)) % t
                     for row, t in zip(self.torsion_rows.rows, self.torsion))
        return free + tors


class Fan:
    """A simplicial fan given by primitive ray generators and maximal cones.

    ``rays`` are integer vectors in ``Z^d``; ``cones`` are ``d``-element tuples
    of ray indices.  Construction does not validate; call :meth:`validate` or
    :meth:`check`.
    """

    def __init__(self, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]]):
        self.rays = tuple(tuple(int(x) for x in v) for v in rays)
        self.cones = tuple(tuple(sorted(int(i) for i in c)) for c in cones)
        if not self.rays:
            raise FanError("a fan needs at least one ray")
        self.d = len(self.rays[0])
        self.r = len(self.rays)
        if any(len(v) != self.d for v in self.rays):
            raise FanError("rays of different lengths")

    def __repr__(self):
        return f"Fan(d={self.d}, r={self.r}, cones={len(self.cones)})"

    # -- validation ------------------------------------------------------------

    def validate(self) -> FanReport:
        errors, bad = [], set()
        for i, v in enumerate(self.rays):
            if math.gcd(*v) != 1:
                errors.append(f"ray {i} is not primitive")
        seen = {}
        for i, v in enumerate(self.rays):
            if v in seen:
                errors.append(f"ray {i} repeats ray {seen[v]}")
            seen.setdefault(v, i)
        simplicial = True
        for ci, c in enumerate(self.cones):
            if len(c) != self.d or len(set(c)) != self.d or any(not 0 <= i < self.r for i in c):
                errors.append(f"cone {ci} does not have {self.d} distinct rays")
                simplicial = False
                bad.add(ci)
            elif determinant([self.rays[i] for i in c]) == 0:
                errors.append(f"cone {ci} has linearly dependent rays")
                simplicial = False
                bad.add(ci)
        complete = simplicial and bool(self.cones)
        if complete:
            bad_facets = self._facet_violations()
            if bad_facets:
                complete = False
                bad.update(bad_facets)
        return FanReport(simplicial, complete, errors, sorted(bad))

    def _facet_violations(self) -> set[int]:
        """Cones having a facet not shared with exactly one cone on the other side."""
        facets: dict[tuple, list[tuple[int, int]]] = {}
        for ci, c in enumerate(self.cones):
            for out in c:
                face = tuple(i for i in c if i != out)
                facets.setdefault(face, []).append((ci, out))
        bad = set()
        for face, owners in facets.items():
            normal = RationalMatrix([self.rays[i] for i in face], self.d).kernel_basis().rows[0]
            sides = [sum(n * x for n, x in zip(normal, self.rays[out])) for _, out in owners]
            if len(owners) != 2 or (sides[0] > 0) == (sides[1] > 0):
                bad.update(ci for ci, _ in owners)
        return bad

    def check(self) -> "Fan":
        rep = self.validate()
        if not rep.valid:
            raise FanError("; ".join(rep.errors) or "fan is not complete")
        return self

    # -- class group -----------------------------------------------------------

    @cached_property
    def class_group(self) -> ClassGroup:
        ray_matrix = IntegerMatrix(self.rays, self.d)
        D, U, _ = smith_normal_form(ray_matrix)
        diag = [D[i, i] for i in range(self.d)]
        if 0 in diag:
            raise FanError("rays do not span the lattice rationally (torus factor)")
        tors_idx = [i for i, x in enumerate(diag) if x > 1]
        free_rows = IntegerMatrix(U.rows[self.d:], self.r)
        H, W = hermite_normal_form(free_rows)
        Uinv = integer_inverse(U)
        Winv = integer_inverse(W) if W.nrows else W
        k = self.r - self.d
        # section: class coordinates -> one representative divisor
        cols = []
        for j in range(k):
            y = [0] * self.r
            for t in range(k):
                y[self.d + t] = Winv[t, j]
            cols.append([sum(u * v for u, v in zip(row, y)) for row in Uinv.rows])
        for i in tors_idx:
            y = [0] * self.r
            y[i] = 1
            cols.append([sum(u * v for u, v in zip(row, y)) for row in Uinv.rows])
        section = IntegerMatrix(zip(*cols), len(cols)) if cols else IntegerMatrix([[]] * self.r, 0)
        return ClassGroup(
            free_rank=k,
            torsion=tuple(diag[i] for i in tors_idx),
            projection=H,
            torsion_rows=IntegerMatrix([U.rows[i] for i in tors_idx], self.r),
            section=section,
        )

    @cached_property
    def variable_degrees(self) -> tuple[tuple, ...]:
        """Class coordinates of each Cox variable ``x_rho``."""
        return tuple(self.class_group.coords([int(i == j) for j in range(self.r)])
                     for i in range(self.r))

    def divisor(self, representative: Sequence) -> "DivisorClass":
        if len(representative) != self.r:
            raise ValueError(f"expected {self.r} ray coefficients")
        return DivisorClass(self, representative)

    def from_class(self, coords: Sequence[int]) -> "DivisorClass":
        cg = self.class_group
        if len(coords) != cg.free_rank + len(cg.torsion):
            raise ValueError(f"expected {cg.free_rank + len(cg.torsion)} class coordinates")
        rep = [sum(s * c for s, c in zip(row, coords)) for row in cg.section.rows]
        D = DivisorClass(self, rep)
        assert D.coords == tuple(coords[:cg.free_rank]) + tuple(
            c % t for c, t in zip(coords[cg.free_rank:], cg.torsion))
        return D

    def zero_class(self) -> "DivisorClass":
        return DivisorClass(self, [0] * self.r)

    def anticanonical(self) -> "DivisorClass":
        return DivisorClass(self, [1] * self.r)

    # -- support functions per maximal cone --------------------------------------

    @cached_property
    def _cone_inverses(self):
        out = []
        for c in self.cones:
            A = RationalMatrix([self.rays[i] for i in c], self.d)
            # solve A m = b for m: rows of [A | I] reduced
            aug = RationalMatrix([list(A.rows[i]) + [int(i == j) for j in range(self.d)]
                                  for i in range(self.d)], 2 * self.d)
            r, _ = aug.rref()
            out.append([row[self.d:] for row in r.rows])
        return out


class DivisorClass:
    """A divisor class with a chosen torus-invariant representative ``sum a_rho D_rho``.

    Equality and hashing use the class coordinates only.  Representatives may
    be rational (Q-divisors arising from ``beta - q*eta``).
    """

    __slots__ = ("fan", "representative", "coords")

    def __init__(self, fan: Fan, representative: Sequence):
        self.fan = fan
        rep = []
        for x in representative:
            x = Fraction(x)
            rep.append(int(x) if x.denominator == 1 else x)
        self.representative = tuple(rep)
        self.coords = fan.class_group.coords(self.representative)

    def __repr__(self):
        return f"DivisorClass({','.join(map(str, self.coords))})"

    def __eq__(self, other):
        return isinstance(other, DivisorClass) and other.fan is self.fan \
            and other.coords == self.coords

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.fan, [a + b for a, b in zip(self.representative, other.representative)])

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.fan, [a - b for a, b in zip(self.representative, other.representative)])

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.fan, [-a for a in self.representative])

    def __mul__(self, c) -> "DivisorClass":
        return DivisorClass(self.fan, [c * a for a in self.representative])

    __rmul__ = __mul__

    @property
    def is_integral(self) -> bool:
        return all(isinstance(a, int) for a in self.representative)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def label(self) -> str:
        return ",".join(map(str, self.coords))

    # -- positivity --------------------------------------------------------------

    def cartier_data(self) -> "CartierData":
        fan = self.fan
        a = self.representative
        ms = []
        for c, inv in zip(fan.cones, fan._cone_inverses):
            b = [-a[i] for i in c]
            ms.append(tuple(sum(x * y for x, y in zip(row, b)) for row in inv))
        cartier = all(Fraction(x).denominator == 1 for m in ms for x in m)
        return CartierData(self, tuple(ms), cartier)

    def is_cartier(self) -> bool:
        return self.cartier_data().cartier

    def is_nef(self) -> bool:
        return self.cartier_data().is_nef()

    def is_ample(self) -> bool:
        return self.cartier_data().is_ample()


@dataclass(frozen=True)
class CartierData:
    """Per-cone vectors ``m_sigma`` with ``<m_sigma, v_rho> = -a_rho`` on ``sigma``."""

    divisor: DivisorClass
    m: tuple[tuple, ...]
    cartier: bool

    def slacks(self) -> list[list[Fraction]]:
        """``<m_sigma, v_rho> + a_rho`` for every cone and ray."""
        fan = self.divisor.fan
        a = self.divisor.representative
        return [[sum(x * y for x, y in zip(m, v)) + a[j] for j, v in enumerate(fan.rays)]
                for m in self.m]

    def is_nef(self) -> bool:
        return all(s >= 0 for row in self.slacks() for s in row)

    def is_ample(self) -> bool:
        cones = self.divisor.fan.cones
        return all(s > 0 for c, row in zip(cones, self.slacks())
                   for j, s in enumerate(row) if j not in c)


@dataclass(frozen=True)
class BetaDecomposition:
    q: Fraction
    beta_prime: DivisorClass
    beta_prime_cartier: bool
    beta_nef: bool

    def lines(self) -> list[str]:
        return [f"q={self.q}", f"beta_prime={self.beta_prime.label()}",
                f"beta_prime_cartier={str(self.beta_prime_cartier).lower()}",
                f"beta_nef={str(self.beta_nef).lower()}"]


def decompose_beta(beta: DivisorClass, eta: DivisorClass) -> BetaDecomposition:
    """Largest ``q`` with ``beta - q*eta`` nef, and the remainder ``beta'``.

    Each nef inequality is affine in ``q``; with ``eta`` ample every slack of
    ``eta`` off the cone is positive, so ``q`` is the smallest ratio of slacks.
    """
    if not eta.is_ample():
        raise ValueError("eta must be ample")
    fan = beta.fan
    sb = beta.cartier_data().slacks()
    se = eta.cartier_data().slacks()
    q = min(Fraction(sb[i][j]) / se[i][j]
            for i, c in enumerate(fan.cones) for j in range(fan.r) if j not in c)
    bp = beta - q * eta
    return BetaDecomposition(q, bp, bp.is_cartier(), beta.is_nef())


# -- standard fans ------------------------------------------------------------


def projective_space(n: int) -> Fan:
    rays = [[int(i == j) for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = list(itertools.combinations(range(n + 1), n))
    return Fan(rays, cones)


def product(*fans: Fan) -> Fan:
    """Product fan; rays are listed factor by factor."""
    d = sum(f.d for f in fans)
    rays, offsets, shift, pos = [], [], 0, 0
    for f in fans:
        offsets.append(len(rays))
        for v in f.rays:
            rays.append([0] * pos + list(v) + [0] * (d - pos - f.d))
        pos += f.d
    cones = []
    for combo in itertools.product(*(f.cones for f in fans)):
        cones.append([i + off for c, off in zip(combo, offsets) for i in c])
    return Fan(rays, cones)


def product_of_projective_spaces(*dims: int) -> Fan:
    return product(*(projective_space(n) for n in dims))


def weighted_projective_plane_112() -> Fan:
    return Fan([(1, 0), (0, 1), (-1, -2)], [(0, 1), (0, 2), (1, 2)])
