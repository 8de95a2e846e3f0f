import random

import pytest
from hypothesis import given, settings, strategies as st

from coxnl.cox_ring import CoxRing
from coxnl.fan import Fan, product_of_projective_spaces, projective_space
from coxnl.graded_ideal import (
    GradedIdeal,
    SubspaceOfDegree,
    emptiness_certificate,
    graded_piece,
    jacobian_ideal,
    nondegenerate_check,
    quasi_smooth_check,
    transporter,
)
from coxnl.io import fixture, read_poly


def hilbert(degrees, nvars, top):
    """Coefficients of prod (1 - t^d) / (1 - t)^nvars by repeated convolution."""
    c = [1] + [0] * top
    for _ in range(nvars):
        c = [sum(c[: i + 1]) for i in range(top + 1)]
    for d in degrees:
        c = [c[i] - (c[i - d] if i >= d else 0) for i in range(top + 1)]
    return c


@pytest.fixture(scope="module")
def P3():
    return CoxRing(projective_space(3))


@pytest.fixture(scope="module")
def fermat_J(P3):
    return jacobian_ideal(read_poly(fixture("fermat4.poly"), P3))


def H(S, k):
    return S.fan.from_class([k])


def test_jacobian_of_fermat(P3, fermat_J):
    assert fermat_J.generators == tuple(P3.parse(f"4*x{i}^4") for i in range(4)) \
        or list(fermat_J.generators) == [P3.parse(f"4*x{i}^4") for i in range(4)]


def test_jacobian_on_p1():
    S = CoxRing(projective_space(1))
    J = jacobian_ideal(S.parse("x0*x1"))
    assert [str(g) for g in J.generators] == ["x0*x1", "x0*x1"]


def test_jacobian_keeps_zero_generators(P3):
    J = jacobian_ideal(P3.parse("x0^3"))
    assert len(J.generators) == 4
    assert [g.is_zero() for g in J.generators] == [False, True, True, True]
    assert all(g.degree == H(P3, 3) for g in J.generators)


def test_jacobian_generic_bidegree_22():
    S = CoxRing(product_of_projective_spaces(1, 1))
    f = S.random_polynomial(S.fan.from_class([2, 2]), random.Random(4))
    J = jacobian_ideal(f)
    assert len(J.generators) == 4
    assert all(g.degree.coords == (2, 2) for g in J.generators)


def test_graded_pieces(P3, fermat_J):
    I = GradedIdeal(P3, [P3.variable(0)])
    assert I.piece(H(P3, 1)).dim == 1
    assert graded_piece(fermat_J, H(P3, 4)).dim == 4
    assert fermat_J.piece(H(P3, 3)).dim == 0


def test_quotient_dims_match_hilbert_series(P3, fermat_J):
    oracle = hilbert([4] * 4, 4, 14)
    assert [fermat_J.quotient_dim(H(P3, k)) for k in range(15)] == oracle
    assert fermat_J.quotient_dim(H(P3, 12)) == 1
    assert fermat_J.quotient_dim(H(P3, 13)) == 0


def test_degree_zero_quotient_is_one(P3):
    I = GradedIdeal(P3, [P3.parse("x0^2 + x1*x2")])
    assert I.quotient_dim(P3.fan.zero_class()) == 1


def test_contains(P3, fermat_J):
    assert fermat_J.contains(P3.parse("x0^4*x1 - 7*x2^5"))
    assert not fermat_J.contains(P3.parse("x0^3*x1^3"))


def test_canonical_piece_is_independent_of_generators(P3):
    a = GradedIdeal(P3, [P3.parse("x0^2+x1^2"), P3.parse("x0^2-x1^2")])
    b = GradedIdeal(P3, [P3.parse("x0^2"), P3.parse("x1^2")])
    for k in range(2, 5):
        assert a.piece(H(P3, k)) == b.piece(H(P3, k))


def test_subspace_operations(P3):
    S = P3
    alpha = H(S, 2)
    I = GradedIdeal(S, [S.variable(0)])
    sub = I.piece(alpha)
    assert sub.dim == 4 and sub.codim == 6
    assert sub.issubset(SubspaceOfDegree.full(S, alpha))
    assert SubspaceOfDegree.zero(S, alpha).issubset(sub)
    assert sub.contains_polynomial(S.parse("x0*x3 - 2*x0^2"))
    assert not sub.contains_polynomial(S.parse("x1*x3"))


def test_transporter_colon(P3):
    # (x0^2) : x0 in degree 1 is spanned by x0
    S = P3
    target = GradedIdeal(S, [S.parse("x0^2")]).piece(H(S, 2))
    T = transporter(S, H(S, 1), [S.variable(0)], target)
    assert T.dim == 1 and T.contains_polynomial(S.variable(0))
    full = transporter(S, H(S, 1), [], target)
    assert full.dim == 4


def test_emptiness_fermat(P3, fermat_J):
    cert = emptiness_certificate(fermat_J)
    assert cert.witnesses == [4, 4, 4, 4] and cert.certified


def test_emptiness_hyperplane_fails_where_x0_meets_the_chart(P3):
    # xhat of the cone avoiding ray 0 is x0 itself; every cone through ray 0 fails
    cert = emptiness_certificate(GradedIdeal(P3, [P3.variable(0)]), m_max=6)
    for c, w in zip(P3.fan.cones, cert.witnesses):
        assert w == (None if 0 in c else 1)
    assert not cert.certified


def test_emptiness_irrelevant_generators(P3):
    gens = [P3.monomial([0 if rho in c else 1 for rho in range(4)]) for c in P3.fan.cones]
    cert = emptiness_certificate(GradedIdeal(P3, gens))
    assert cert.witnesses == [1] * 4


def test_nondegenerate_checks(P3):
    assert nondegenerate_check(read_poly(fixture("fermat4.poly"), P3)).certified
    v = nondegenerate_check(P3.parse("x0^2*x1^2"), m_max=12)
    assert v.verdict == "inconclusive"
    S = CoxRing(product_of_projective_spaces(1, 1))
    g = S.random_polynomial(S.fan.from_class([2, 2]), random.Random(11))
    assert nondegenerate_check(g, m_max=8).certified


def test_quasi_smooth_check(P3):
    assert quasi_smooth_check(read_poly(fixture("fermat4.poly"), P3)).certified
    v = quasi_smooth_check(P3.parse("x0^2*x1^2"), m_max=10)
    assert not v.certified
    assert v.lines()[-1] == "verdict=inconclusive"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_pieces_grow_with_generators(seed):
    S = CoxRing(projective_space(2))
    rng = random.Random(seed)
    gens = [S.random_polynomial(H(S, rng.randint(1, 2)), rng)
            for _ in range(2)]
    extra = S.random_polynomial(H(S, 2), rng)
    small, big = GradedIdeal(S, gens), GradedIdeal(S, gens + [extra])
    for k in range(4):
        assert small.piece(H(S, k)).issubset(big.piece(H(S, k)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_regular_sequence_quotients_match_hilbert_series(seed):
    S = CoxRing(projective_space(2))
    rng = random.Random(seed)
    degs = sorted(rng.choice([1, 2, 2, 3]) for _ in range(3))
    I = GradedIdeal(S, [S.random_polynomial(H(S, d), rng) for d in degs])
    top = sum(degs)
    assert [I.quotient_dim(H(S, k)) for k in range(top + 1)] == hilbert(degs, 3, top)


def test_nonempty_face_refutes_degenerate_loci(P3):
    from coxnl.graded_ideal import nonempty_face
    assert nonempty_face(GradedIdeal(P3, [P3.variable(0)])) == (0,)
    # x0 - x1 vanishes at the torus point (1,1,1,1)
    assert nonempty_face(GradedIdeal(P3, [P3.parse("x0 - x1")])) == ()
    assert nonempty_face(jacobian_ideal(read_poly(fixture("fermat4.poly"), P3))) is None


def test_refutation_never_accompanies_a_certificate(P3):
    cert = emptiness_certificate(GradedIdeal(P3, [P3.parse("x0^2*x1^2")]) +
                                 jacobian_ideal(P3.parse("x0^2*x1^2")), m_max=10)
    assert not cert.certified and cert.refuted
    assert cert.lines()[-1] == "nonempty_witness=zero_on_rays(0)"
    assert not emptiness_certificate(jacobian_ideal(read_poly(fixture("fermat4.poly"), P3))).refuted
