"""The acceptance checks, each against an oracle that shares no code with the module under test.

Each ``criterion_<n>`` returns a :class:`CriterionResult`.  ``selftest`` in
the CLI and ``tests/test_acceptance.py`` both run them.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .chow import intersection_number, verify_degree_bound
from .cox_ring import CoxRing, GradedPolynomial, monomial_basis
from .exact_linalg import (
    IntegerMatrix,
    RationalMatrix,
    determinant,
    kernel_basis,
    smith_normal_form,
)
from .fan import Fan, decompose_beta, product_of_projective_spaces, projective_space
from .gorenstein import (
    apolar_piece,
    pairing_degrees,
    pairing_matrix,
    socle_functional,
    verify_cox_gorenstein,
)
from .graded_ideal import (
    GradedIdeal,
    emptiness_certificate,
    jacobian_ideal,
    nondegenerate_check,
)
from .io import fixture, read_poly
from .nl_tangent import (
    FlagDatum,
    hilbert_family_diagnostic,
    hodge_class_candidates,
    nl_tangent_codim,
    socle_degree_N,
    tangent_space_from_class,
    transporter_identity,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0
    budget: float = 0.0

    @property
    def within_budget(self) -> bool:
        return self.seconds <= self.budget

    def line(self) -> str:
        ok = "PASS" if self.passed and self.within_budget else "FAIL"
        return (f"criterion {self.number} [{self.title}]: {ok} "
                f"({self.seconds:.1f}s of {self.budget:.0f}s)")


def _timed(number: int, title: str, budget: float, body: Callable[[list[str]], bool]):
    t = time.perf_counter()
    details: list[str] = []
    passed = bool(body(details))
    return CriterionResult(number, title, passed, details, time.perf_counter() - t, budget)


# -- oracles ---------------------------------------------------------------------------


def hilbert_coefficients(degrees, nvars: int, top: int) -> list[int]:
    """Coefficients of ``prod (1 - t^d) / (1 - t)^nvars`` up to ``t^top``."""
    num = [1] + [0] * top
    for d in degrees:
        new = list(num)
        for i in range(d, top + 1):
            new[i] -= num[i - d]
        num = new
    out = num
    for _ in range(nvars):
        acc, run = [], 0
        for c in out:
            run += c
            acc.append(run)
        out = acc
    return out


def product_space_count(dims, a) -> int:
    """``dim S^a`` on a product of projective spaces: a product of binomials."""
    return math.prod(math.comb(x + n, n) if x >= 0 else 0 for x, n in zip(a, dims))


def multilinear_intersection(dims, classes) -> int:
    """Brute-force ``D_1 ... D_d`` on ``P^{n_1} x ... x P^{n_m}`` from ``H_i^{n_i} = pt``."""
    total = 0
    for choice in itertools.product(range(len(dims)), repeat=len(classes)):
        if all(choice.count(i) == n for i, n in enumerate(dims)):
            total += math.prod(c[i] for c, i in zip(classes, choice))
    return total


def line_count_codim(d: int) -> int:
    """Codimension of surfaces of degree ``d`` containing some line: ``(d+1) - 4``."""
    conditions = d + 1
    lines_moduli = 4
    return conditions - lines_moduli


# -- criteria --------------------------------------------------------------------------


def criterion_1() -> CriterionResult:
    def body(out):
        S = CoxRing(projective_space(3))
        H = lambda k: S.fan.from_class([k])
        f = read_poly(fixture("fermat4.poly"), S)
        J = jacobian_ideal(f)
        N, socle = socle_degree_N(H(4), 1)
        ok = socle == H(12) and N == H(4)
        out.append(f"socle_degree={socle.label()} N={N.label()}")
        ok &= J.quotient_dim(socle) == 1
        oracle = hilbert_coefficients([4] * 4, 4, 16)
        dims = [J.quotient_dim(H(k)) for k in range(17)]
        out.append("quotient_dims=" + ",".join(map(str, dims)))
        ok &= dims == oracle
        L = socle_functional(J, socle)
        nondeg = [pairing_matrix(J, socle, H(a), L).nondegenerate for a in range(13)]
        ok &= all(nondeg)
        out.append(f"pairings_nondegenerate={sum(nondeg)}/13")
        return ok
    return _timed(1, "Gorenstein duality, Fermat quartic", 30, body)


def criterion_2() -> CriterionResult:
    def body(out):
        S = CoxRing(projective_space(2))
        H = lambda k: S.fan.from_class([k])
        ok = True
        for degs in ((2, 2, 2), (1, 2, 2)):
            N = H(sum(degs) - 3)
            passed = 0
            for seed in range(20):
                rng = random.Random(seed)
                I = GradedIdeal(S, [S.random_polynomial(H(k), rng) for k in degs])
                passed += verify_cox_gorenstein(I, N).verdict == "PASS"
            out.append(f"degrees={degs} N={N.label()} passed={passed}/20")
            ok &= passed == 20
        return ok
    return _timed(2, "toric Macaulay theorem on P2", 120, body)


def coordinate_line_datum(d: int, seed: int = 7) -> FlagDatum:
    S = CoxRing(projective_space(3))
    A = [read_poly(fixture("x0.poly"), S), read_poly(fixture("x1.poly"), S)]
    return FlagDatum.build(A, S.fan.from_class([d]), rng=random.Random(seed))


def generic_line_datum(d: int, seed: int = 7) -> FlagDatum:
    S = CoxRing(projective_space(3))
    A = [read_poly(fixture("gline0.poly"), S), read_poly(fixture("gline1.poly"), S)]
    return FlagDatum.build(A, S.fan.from_class([d]), rng=random.Random(seed))


def criterion_3() -> CriterionResult:
    def body(out):
        ok = True
        for d in (4, 5, 6):
            rep = nl_tangent_codim(coordinate_line_datum(d))
            out.append(f"d={d} codim={rep.codim} oracle={line_count_codim(d)} "
                       f"j0_in_i={rep.j0_in_i}")
            ok &= rep.codim == line_count_codim(d) and rep.j0_in_i
        return ok
    return _timed(3, "NL tangent codimension, line x0=x1=0", 120, body)


def criterion_4(data: Callable[[int], FlagDatum] = generic_line_datum,
                label: str = "line in general position") -> CriterionResult:
    def body(out):
        ok = True
        for d in (4, 5):
            D = data(d)
            cand = hodge_class_candidates(D)
            out.append(f"d={d} " + " ".join(cand.lines()))
            if not cand.nonzero_class_exists:
                return False
            Ib = D.ideal.piece(D.beta)
            rng = random.Random(100 + d)
            for trial in range(5):
                P = cand.sample(rng)
                outside = not cand.j0.contains_polynomial(P)
                T = tangent_space_from_class(D.f, P, D.beta)
                ident = transporter_identity(D.f, P, D.beta).holds
                out.append(f"d={d} trial={trial} P_outside_J0={outside} "
                           f"T_equals_I={T == Ib} transporter_identity={ident}")
                ok &= outside and T == Ib and ident
        return ok
    return _timed(4, f"T^beta = I^beta, {label}", 300, body)


def criterion_5() -> CriterionResult:
    def body(out):
        F = product_of_projective_spaces(1, 2)
        C = F.from_class
        eta, beta = C([1, 1]), C([2, 3])
        dec = decompose_beta(beta, eta)
        ok = dec.q == 2 and dec.beta_prime == C([0, 1]) and dec.beta_prime.is_nef()
        out.append(f"q={dec.q} beta_prime={dec.beta_prime.label()}")
        checked = 0
        for w in itertools.product(range(6), repeat=2):
            if w == (0, 0):
                continue
            W = C(list(w))
            rep = verify_degree_bound(beta, eta, [W])
            oracle = multilinear_intersection((1, 2), [(1, 1), (2, 3), w])
            ok &= rep.deg == oracle and rep.chain_holds and rep.bound_holds
            ok &= rep.deg_W == multilinear_intersection((1, 2), [(1, 1), (1, 1), w])
            ok &= rep.tail == multilinear_intersection((1, 2), [(1, 1), (0, 1), w])
            checked += 1
        out.append(f"w_checked={checked}")
        # intersection numbers against the oracle on several products
        sweeps = 0
        for dims, top in (((1, 2), 3), ((2, 1), 3), ((1, 1), 4), ((1, 1, 1), 2)):
            fan = product_of_projective_spaces(*dims)
            d = sum(dims)
            for combo in itertools.combinations_with_replacement(
                    list(itertools.product(range(top), repeat=len(dims))), d):
                got = intersection_number([fan.from_class(list(c)) for c in combo])
                ok &= got == multilinear_intersection(dims, combo)
                sweeps += 1
        out.append(f"oracle_comparisons={sweeps}")
        return ok
    return _timed(5, "degree bound on P1xP2", 30, body)


def criterion_6() -> CriterionResult:
    def body(out):
        S = CoxRing(projective_space(3))
        f = read_poly(fixture("fermat4.poly"), S)
        cert = emptiness_certificate(jacobian_ideal(f))
        ok = cert.witnesses == [4, 4, 4, 4]
        out.append("fermat_witnesses=" + ",".join(map(str, cert.witnesses)))
        S2 = CoxRing(product_of_projective_spaces(1, 1))
        g = S2.random_polynomial(S2.fan.from_class([2, 2]), random.Random(11))
        v = nondegenerate_check(g)
        out.append(f"p1xp1_generic={v.verdict} witnesses={v.certificate.witnesses}")
        ok &= v.certified
        h = S.parse("x0^2*x1^2")
        v = nondegenerate_check(h, m_max=20)
        out.append(f"x0^2x1^2 at m_max=20: {v.verdict}")
        ok &= not v.certified
        return ok
    return _timed(6, "emptiness certificates", 60, body)


# -- criterion 7: seeded property suite --------------------------------------------------


def _rand_matrix(rng, nr, nc, lo=-4, hi=4):
    return [[rng.randint(lo, hi) if rng.random() < 0.7 else 0 for _ in range(nc)]
            for _ in range(nr)]


def prop_rank_kernel(rng) -> bool:
    nr, nc = rng.randint(1, 7), rng.randint(1, 7)
    rows = _rand_matrix(rng, nr, nc)
    if nr > 1:
        rows[-1] = [a - 2 * b for a, b in zip(rows[0], rows[1])]
    M = RationalMatrix(rows, nc)
    K = kernel_basis(M)
    return M.rank() + K.nrows == nc and (K.nrows == 0 or (M @ K.transpose()).is_zero())


def prop_snf(rng) -> bool:
    nr, nc = rng.randint(1, 5), rng.randint(1, 5)
    A = IntegerMatrix(_rand_matrix(rng, nr, nc, -6, 6), nc)
    D, U, V = smith_normal_form(A)
    diag = [D.rows[i][i] for i in range(min(nr, nc))]
    off = all(D.rows[i][j] == 0 for i in range(nr) for j in range(nc) if i != j)
    chain = all(b % a == 0 if a else b == 0 for a, b in zip(diag, diag[1:]))
    return (U @ A @ V) == D and off and chain and abs(determinant(U.rows)) == 1 \
        and abs(determinant(V.rows)) == 1


def prop_monomial_count(rng) -> bool:
    dims = [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
    fan = product_of_projective_spaces(*dims)
    a = [rng.randint(0, 4) for _ in dims]
    S = CoxRing(fan)
    alpha = fan.from_class(a)
    # another representative of the same class
    shift = [rng.randint(-2, 2) for _ in range(fan.d)]
    rep = [x + sum(s * v for s, v in zip(shift, ray))
           for x, ray in zip(alpha.representative, fan.rays)]
    other = fan.divisor(rep)
    return S.dim(alpha) == product_space_count(dims, a) and \
        len(monomial_basis(fan, other)) == S.dim(alpha)


def _rand_poly(S: CoxRing, k: int, rng, dense: bool = False) -> GradedPolynomial:
    alpha = S.fan.from_class([k])
    basis = S.monomial_basis(alpha)
    terms = {m: rng.randint(-5, 5) for m in basis if dense or rng.random() < 0.4}
    return S.polynomial(terms, alpha)


def prop_multiply(rng) -> bool:
    S = CoxRing(projective_space(3))
    f, g, h = (_rand_poly(S, rng.randint(0, 3), rng) for _ in range(3))
    euler = sum((f.log_derivative(i) for i in range(4)), S.zero(f.degree))
    return f * g == g * f and (f * g) * h == f * (g * h) and \
        euler == f.scale(f.degree.coords[0])


def _regular_sequence(rng):
    S = CoxRing(projective_space(2))
    degs = [rng.randint(1, 3) for _ in range(3)]
    gens = [S.random_polynomial(S.fan.from_class([k]), rng, 20) for k in degs]
    return S, GradedIdeal(S, gens), S.fan.from_class([sum(degs) - 3])


def prop_pairing_symmetry(rng) -> bool:
    S, I, N = _regular_sequence(rng)
    if I.quotient_dim(N) != 1:
        return False
    L = socle_functional(I, N)
    for alpha in pairing_degrees(S, N):
        if I.quotient_dim(alpha) != I.quotient_dim(N - alpha):
            return False
        if not I.piece(alpha).issubset(apolar_piece(L, alpha)):
            return False
        pm = pairing_matrix(I, N, alpha, L)
        if pm.nondegenerate != (pm.left_dim == pm.right_dim):
            return False
    return True


def prop_ideal_monotone(rng) -> bool:
    S = CoxRing(projective_space(2))
    gens = [_rand_poly(S, rng.randint(1, 3), rng) for _ in range(rng.randint(1, 3))]
    gens = [g for g in gens if not g.is_zero()] or [S.variable(0)]
    I = GradedIdeal(S, gens)
    extra = I.with_generators([_rand_poly(S, rng.randint(1, 2), rng, dense=True)])
    shuffled = list(gens)
    rng.shuffle(shuffled)
    I2 = GradedIdeal(S, shuffled)
    for k in range(5):
        a = S.fan.from_class([k])
        if I.piece(a).dim > extra.piece(a).dim or I.piece(a) != I2.piece(a):
            return False
    return True


def _random_line_datum(rng, d: int) -> FlagDatum:
    S = CoxRing(projective_space(3))
    H = S.fan.from_class([1])
    if rng.random() < 0.5:
        A = [S.variable(0), S.variable(1)]
    else:
        A = [S.random_polynomial(H, rng, 10), S.random_polynomial(H, rng, 10)]
    return FlagDatum.build(A, S.fan.from_class([d]), rng=rng, bound=10)


def prop_jacobian_in_flag(rng) -> bool:
    D = _random_line_datum(rng, rng.randint(2, 5))
    Jb = jacobian_ideal(D.f).piece(D.beta)
    return Jb.issubset(D.ideal.piece(D.beta))


def prop_substitution_invariance(rng) -> bool:
    D = _random_line_datum(rng, rng.randint(2, 5))
    S = D.ring
    a, b, c, e = (rng.randint(-3, 3) for _ in range(4))
    if a * e - b * c == 0:
        a, b, c, e = 1, 1, 0, 1
    det = Fraction(a * e - b * c)
    A1, A2 = D.A
    K1, K2 = D.K
    # A' = M A and K' = M^{-T} K keep sum A_i K_i
    nA = [A1.scale(a) + A2.scale(b), A1.scale(c) + A2.scale(e)]
    nK = [K1.scale(e / det) - K2.scale(c / det), K2.scale(a / det) - K1.scale(b / det)]
    G = _rand_poly(S, D.beta.coords[0] - 2, rng)
    nK = [nK[0] + nA[1] * G, nK[1] - nA[0] * G]
    D2 = FlagDatum(nA, nK, D.f)
    return D.ideal.piece(D.beta) == D2.ideal.piece(D.beta) and \
        nl_tangent_codim(D).codim == nl_tangent_codim(D2).codim


def prop_decompose_beta(rng) -> bool:
    F = product_of_projective_spaces(1, 2)
    beta = F.from_class([rng.randint(1, 6), rng.randint(1, 6)])
    eta = F.from_class([rng.randint(1, 3), rng.randint(1, 3)])
    dec = decompose_beta(beta, eta)
    eps = Fraction(1, 10 ** 6)
    return dec.q > 0 and dec.beta_prime.is_nef() and \
        not (beta - (dec.q + eps) * eta).is_nef() and \
        dec.q == min(Fraction(beta.coords[0], eta.coords[0]),
                     Fraction(beta.coords[1], eta.coords[1]))


def prop_positivity(rng) -> bool:
    F = product_of_projective_spaces(1, 2)
    D1 = F.from_class([rng.randint(-2, 3), rng.randint(-2, 3)])
    D2 = F.from_class([rng.randint(-2, 3), rng.randint(-2, 3)])
    ok = (not D1.is_ample()) or D1.is_nef()
    if D1.is_nef() and D2.is_nef():
        ok &= (D1 + D2).is_nef()
    # on a product of projective spaces nef means every coordinate is >= 0
    ok &= D1.is_nef() == all(c >= 0 for c in D1.coords)
    ok &= D1.is_ample() == all(c > 0 for c in D1.coords)
    return ok


def prop_intersection_multilinear(rng) -> bool:
    F = product_of_projective_spaces(1, 2)
    vs = [[rng.randint(0, 3), rng.randint(0, 3)] for _ in range(4)]
    A, B, C, D = (F.from_class(v) for v in vs)
    perm = [A, B, C]
    rng.shuffle(perm)
    lhs = intersection_number([A + D, B, C])
    rhs = intersection_number([A, B, C]) + intersection_number([D, B, C])
    return lhs == rhs and intersection_number(perm) == intersection_number([A, B, C]) \
        and intersection_number([A, B, C]) == multilinear_intersection((1, 2), vs[:3])


def prop_family_estimate(rng) -> bool:
    d = rng.randint(4, 6)
    S = CoxRing(projective_space(3))
    H = S.fan.from_class
    est = hilbert_family_diagnostic(S, [H([1]), H([1])], H([d]))
    return est.estimate >= S.dim(H([d])) - line_count_codim(d)


PROPERTIES: dict[str, Callable[[random.Random], bool]] = {
    "rank_kernel_duality": prop_rank_kernel,
    "snf_reconstruction": prop_snf,
    "monomial_count_oracle": prop_monomial_count,
    "multiply_and_euler": prop_multiply,
    "pairing_symmetry": prop_pairing_symmetry,
    "ideal_monotone_canonical": prop_ideal_monotone,
    "jacobian_in_flag_ideal": prop_jacobian_in_flag,
    "substitution_invariance": prop_substitution_invariance,
    "decompose_beta_maximal": prop_decompose_beta,
    "nef_ample_positivity": prop_positivity,
    "intersection_multilinear": prop_intersection_multilinear,
    "family_estimate_bound": prop_family_estimate,
}


def run_property(name: str, trials: int = 100, base_seed: int = 0) -> list[int]:
    """Seeds on which the property fails."""
    fn = PROPERTIES[name]
    return [s for s in range(base_seed, base_seed + trials) if not fn(random.Random(s))]


def criterion_7(trials: int = 100) -> CriterionResult:
    def body(out):
        ok = True
        for name in PROPERTIES:
            t = time.perf_counter()
            bad = run_property(name, trials)
            out.append(f"{name}: {trials - len(bad)}/{trials} "
                       f"({time.perf_counter() - t:.1f}s)" + (f" failing seeds {bad[:5]}" if bad else ""))
            ok &= not bad
        return ok
    return _timed(7, "structural property suite", 600, body)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7]


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]
