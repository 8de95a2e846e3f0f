"""The Cox ring of a toric variety: graded pieces and homogeneous polynomials.

Monomials are exponent tuples of length ``r`` (one entry per ray).  The
basis of a graded piece is always sorted lexicographically by exponent tuple,
so matrix layouts agree across modules.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .fan import DivisorClass, Fan
from .polytope import DivisorPolytope

Monomial = tuple[int, ...]


class InhomogeneousError(ValueError):
    def __init__(self, monomial: Monomial, found: DivisorClass, expected: DivisorClass):
        self.monomial = monomial
        self.found = found
        self.expected = expected
        super().__init__(
            f"monomial {format_monomial(monomial)} has class ({found.label()}), "
            f"expected ({expected.label()})")


class PolynomialSyntaxError(ValueError):
    pass


class CoxRing:
    """Graded polynomial ring ``S = Q[x_rho]`` of a simplicial complete fan."""

    def __init__(self, fan: Fan):
        self.fan = fan
        self.r = fan.r
        self._bases: dict[tuple, tuple[Monomial, ...]] = {}
        self._indices: dict[tuple, dict[Monomial, int]] = {}

    def __repr__(self):
        return f"CoxRing({self.fan!r})"

    def degree(self, exps: Sequence[int]) -> DivisorClass:
        return self.fan.divisor(exps)

    def monomial_basis(self, alpha: DivisorClass) -> tuple[Monomial, ...]:
        key = alpha.coords
        if key not in self._bases:
            self._bases[key] = monomial_basis(self.fan, alpha)
        return self._bases[key]

    def basis_index(self, alpha: DivisorClass) -> dict[Monomial, int]:
        key = alpha.coords
        if key not in self._indices:
            self._indices[key] = {m: i for i, m in enumerate(self.monomial_basis(alpha))}
        return self._indices[key]

    def dim(self, alpha: DivisorClass) -> int:
        return len(self.monomial_basis(alpha))

    def is_effective(self, alpha: DivisorClass) -> bool:
        return self.dim(alpha) > 0

    # -- constructors ------------------------------------------------------------

    def zero(self, degree: DivisorClass) -> "GradedPolynomial":
        return GradedPolynomial(self, {}, degree)

    def one(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {(0,) * self.r: Fraction(1)})

    def variable(self, i: int) -> "GradedPolynomial":
        e = [0] * self.r
        e[i] = 1
        return GradedPolynomial(self, {tuple(e): Fraction(1)})

    def monomial(self, exps: Sequence[int], coeff=1) -> "GradedPolynomial":
        return GradedPolynomial(self, {tuple(exps): Fraction(coeff)})

    def polynomial(self, terms: Mapping[Sequence[int], object],
                   degree: DivisorClass | None = None) -> "GradedPolynomial":
        return GradedPolynomial(self, {tuple(e): Fraction(c) for e, c in terms.items()}, degree)

    def from_vector(self, alpha: DivisorClass, vec: Sequence) -> "GradedPolynomial":
        basis = self.monomial_basis(alpha)
        return GradedPolynomial(self, {m: Fraction(c) for m, c in zip(basis, vec) if c}, alpha)

    def random_polynomial(self, alpha: DivisorClass, rng: random.Random,
                          bound: int = 100) -> "GradedPolynomial":
        """All monomials of ``alpha`` with nonzero integer coefficients in ``[-bound, bound]``."""
        terms = {}
        for m in self.monomial_basis(alpha):
            c = 0
            while c == 0:
                c = rng.randint(-bound, bound)
            terms[m] = Fraction(c)
        return GradedPolynomial(self, terms, alpha)

    def parse(self, text: str, degree: DivisorClass | None = None) -> "GradedPolynomial":
        return parse_polynomial(text, self, degree)


def monomial_basis(fan: Fan, alpha: DivisorClass) -> tuple[Monomial, ...]:
    """Exponent vectors of the monomials of class ``alpha``, in lexicographic order.

    Lattice points ``m`` of ``P_a`` for the representative ``a`` of ``alpha``
    correspond to monomials with exponents ``<m, v_rho> + a_rho``.
    """
    if not alpha.is_integral:
        raise ValueError("graded pieces need an integral divisor class")
    a = alpha.representative
    poly = DivisorPolytope(fan.rays, a)
    out = []
    for m in poly.lattice_points():
        out.append(tuple(sum(x * y for x, y in zip(m, v)) + ai for v, ai in zip(fan.rays, a)))
    return tuple(sorted(out))


class GradedPolynomial:
    """A homogeneous element of the Cox ring with exact rational coefficients.

    ``terms`` maps exponent tuples to nonzero ``Fraction`` coefficients.  The
    zero polynomial keeps an explicit degree.
    """

    __slots__ = ("ring", "terms", "degree")

    def __init__(self, ring: CoxRing, terms: Mapping[Monomial, Fraction],
                 degree: DivisorClass | None = None):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        if degree is None:
            if not self.terms:
                raise ValueError("the zero polynomial needs an explicit degree")
            degree = ring.degree(next(iter(self.terms)))
        self.degree = degree
        for m in self.terms:
            if len(m) != ring.r or min(m) < 0:
                raise ValueError(f"bad exponent vector {m}")
            found = ring.degree(m)
            if found != degree:
                raise InhomogeneousError(m, found, degree)

    def __repr__(self):
        return f"GradedPolynomial({self}; degree {self.degree.label()})"

    def __str__(self):
        return format_polynomial(self)

    def __eq__(self, other):
        return isinstance(other, GradedPolynomial) and self.degree == other.degree \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def _like(self, terms) -> "GradedPolynomial":
        return GradedPolynomial(self.ring, terms, self.degree)

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        if other.degree != self.degree:
            raise ValueError("cannot add polynomials of different degrees")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return self._like(terms)

    def __neg__(self) -> "GradedPolynomial":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return self + (-other)

    def scale(self, c) -> "GradedPolynomial":
        c = Fraction(c)
        return self._like({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, GradedPolynomial):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def log_derivative(self, rho: int) -> "GradedPolynomial":
        return log_derivative(self, rho)

    def derivative(self, rho: int) -> "GradedPolynomial":
        """Ordinary partial derivative; its class is ``deg f - deg x_rho``."""
        e = [0] * self.ring.r
        e[rho] = 1
        deg = self.degree - self.ring.degree(e)
        terms = {}
        for m, c in self.terms.items():
            if m[rho]:
                n = list(m)
                n[rho] -= 1
                terms[tuple(n)] = c * m[rho]
        return GradedPolynomial(self.ring, terms, deg)

    def vector(self) -> list[Fraction]:
        """Coefficients in the monomial basis of the degree."""
        idx = self.ring.basis_index(self.degree)
        v = [Fraction(0)] * len(idx)
        for m, c in self.terms.items():
            v[idx[m]] = c
        return v


def multiply(f: GradedPolynomial, g: GradedPolynomial) -> GradedPolynomial:
    terms: dict[Monomial, Fraction] = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            terms[m] = terms.get(m, 0) + c1 * c2
    return GradedPolynomial(f.ring, terms, f.degree + g.degree)


def log_derivative(f: GradedPolynomial, rho: int) -> GradedPolynomial:
    """``x_rho * df/dx_rho``: scales each term by its ``rho`` exponent."""
    return GradedPolynomial(f.ring, {m: c * m[rho] for m, c in f.terms.items()}, f.degree)


# -- text formats --------------------------------------------------------------


def format_monomial(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts) or "1"


def format_polynomial(f: GradedPolynomial) -> str:
    if f.is_zero():
        return "0"
    out = []
    for m in sorted(f.terms, reverse=True):
        c = f.terms[m]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        mono = format_monomial(m)
        if mono == "1":
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        out.append((sign, body))
    first = ("-" if out[0][0] == "-" else "") + out[0][1]
    return first + "".join(f" {s} {b}" for s, b in out[1:])


_TERM_SPLIT = re.compile(r"([+-])")
_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")
_COEF = re.compile(r"^(\d+)(?:/(\d+))?$")


def parse_polynomial(text: str, ring: CoxRing,
                     degree: DivisorClass | None = None) -> GradedPolynomial:
    """Parse ``"x0^4 + 3/2*x1*x2^3 - x3^4"`` style input (variables ``x0..x{r-1}``)."""
    s = text.replace(" ", "").replace("\t", "")
    if not s:
        raise PolynomialSyntaxError("empty polynomial")
    pieces = _TERM_SPLIT.split(s)
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    terms: dict[Monomial, Fraction] = {}
    for sign, body in zip(pieces[0::2], pieces[1::2]):
        if not body:
            raise PolynomialSyntaxError(f"dangling sign in {text!r}")
        coeff = Fraction(1 if sign == "+" else -1)
        exps = [0] * ring.r
        for tok in body.split("*"):
            if not tok:
                raise PolynomialSyntaxError(f"malformed token in term {body!r}")
            if (mc := _COEF.match(tok)):
                coeff *= Fraction(int(mc.group(1)), int(mc.group(2) or 1))
                continue
            mf = _FACTOR.match(tok)
            if not mf:
                raise PolynomialSyntaxError(f"malformed token {tok!r}")
            i = int(mf.group(1))
            if i >= ring.r:
                raise PolynomialSyntaxError(f"variable x{i} out of range (r={ring.r})")
            exps[i] += int(mf.group(2) or 1)
        m = tuple(exps)
        terms[m] = terms.get(m, 0) + coeff
    if degree is None:
        nz = [m for m, c in terms.items() if c]
        degree = ring.degree(nz[0] if nz else next(iter(terms)))
    return GradedPolynomial(ring, terms, degree)


def polynomials_from_vectors(ring: CoxRing, alpha: DivisorClass,
                             rows: Iterable[Sequence]) -> list[GradedPolynomial]:
    return [ring.from_vector(alpha, r) for r in rows]
