import random
import warnings

import pytest

from coxnl.acceptance import coordinate_line_datum, generic_line_datum
from coxnl.cox_ring import CoxRing
from coxnl.fan import projective_space
from coxnl.graded_ideal import emptiness_certificate, jacobian_ideal
from coxnl.io import fixture, read_poly
from coxnl.nl_tangent import (
    FlagDatum,
    NotContainedError,
    ZeroClassWarning,
    decompose_on_ci,
    hilbert_family_diagnostic,
    hodge_class_candidates,
    nl_tangent_codim,
    socle_degree_N,
    t0_kernel,
    tangent_space_from_class,
    transporter_identity,
    v_smoothness_ideal,
    zero_classes,
)


@pytest.fixture(scope="module")
def S():
    return CoxRing(projective_space(3))


def H(S, k):
    return S.fan.from_class([k])


@pytest.fixture(scope="module")
def quartic():
    return generic_line_datum(4)


def test_socle_degree(S):
    N, top = socle_degree_N(H(S, 4), 1)
    assert (N.coords, top.coords) == ((4,), (12,))
    N, top = socle_degree_N(H(S, 5), 1)
    assert (N.coords, top.coords) == ((6,), (16,))
    with pytest.raises(ValueError):
        socle_degree_N(H(S, 4), 0)


def test_decompose_on_ci(S):
    A = [S.variable(0), S.variable(1)]
    f = S.parse("x0*x1^3 + x1*x0^3")
    K = decompose_on_ci(f, A)
    assert A[0] * K[0] + A[1] * K[1] == f
    # free unknowns set to zero: all of f lands on x0
    assert K == [S.parse("x0^2*x1 + x1^3"), S.zero(H(S, 3))]
    g = S.parse("x1^3 - 2*x2*x3^2 + x0^3")
    assert decompose_on_ci(S.variable(0) * g, A) == [g, S.zero(H(S, 3))]


def test_decompose_rejects_polynomials_off_the_line(S):
    with pytest.raises(NotContainedError):
        decompose_on_ci(S.parse("x2^4"), [S.variable(0), S.variable(1)])


def test_flag_datum_validation(S):
    A = [S.variable(0), S.variable(1)]
    K = [S.parse("x2^3"), S.parse("x3^3")]
    d = FlagDatum(A, K, S.parse("x0*x2^3 + x1*x3^3"))
    assert d.k == 1 and d.beta.coords == (4,)
    with pytest.raises(ValueError):
        FlagDatum(A, K, S.parse("x0*x2^3"))
    with pytest.raises(ValueError):
        FlagDatum(A, K[:1], S.parse("x0*x2^3"))
    P2 = CoxRing(projective_space(2))
    with pytest.raises(ValueError):
        FlagDatum.build([P2.variable(0), P2.variable(1)], H(P2, 3))


def test_flag_datum_build_is_seeded(S):
    A = [S.variable(0), S.variable(1)]
    a = FlagDatum.build(A, H(S, 4), rng=random.Random(7))
    b = FlagDatum.build(A, H(S, 4), rng=random.Random(7))
    assert a.f == b.f and a.K == b.K
    c = FlagDatum.build(A, f=a.f)
    assert c.f == a.f


def test_codim_on_the_coordinate_line():
    for d in (4, 5, 6):
        rep = nl_tangent_codim(coordinate_line_datum(d))
        # parameter count: d + 1 conditions, a 4-dimensional family of lines
        assert rep.codim == d + 1 - 4
        assert rep.j0_in_i and rep.beta_le_N


def test_codim_on_a_general_line(quartic):
    rep = nl_tangent_codim(quartic)
    assert rep.codim == 1 and rep.status == "OK"
    assert rep.lines()[-1] == "status=OK"


def test_dependent_generators_are_flagged(S):
    A = [S.variable(0), S.variable(1)]
    K = S.parse("x2^3 + x3^3")
    rep = nl_tangent_codim(FlagDatum.build(A, K=[K, K.scale(2)]))
    assert "degenerate_generators" in rep.flags and rep.status == "WARNED"


def test_coordinate_line_makes_the_jacobian_non_artinian():
    # every log-derivative of x0 K0 + x1 K1 vanishes on x0 = x1 = 0
    D = coordinate_line_datum(4)
    J = jacobian_ideal(D.f)
    assert J.quotient_dim(H(D.ring, 12)) > 1
    cert = emptiness_certificate(J, m_max=8)
    assert not cert.certified and cert.nonempty_face == (0, 1)


def test_zero_class_gives_everything(quartic):
    S, f = quartic.ring, quartic.f
    P = jacobian_ideal(f).piece(H(S, 4)).polynomials()[0]
    with pytest.warns(ZeroClassWarning):
        T = tangent_space_from_class(f, P)
    assert T.codim == 0
    assert t0_kernel(f, P).codim == 0


def test_hodge_candidates_and_tangent_space(quartic):
    S = quartic.ring
    cand = hodge_class_candidates(quartic)
    assert cand.j0.issubset(cand.space) and cand.zero_classes.issubset(cand.space)
    assert cand.strict_over_j0 and cand.nonzero_class_exists
    assert (cand.space.dim, cand.zero_classes.dim, cand.j0.dim) == (17, 16, 4)
    P = cand.sample(random.Random(1))
    with warnings.catch_warnings():
        warnings.simplefilter("error", ZeroClassWarning)
        T = tangent_space_from_class(quartic.f, P)
    Ib = quartic.ideal.piece(H(S, 4))
    assert T == Ib and T.dim == 34
    rep = nl_tangent_codim(quartic, P=P)
    assert rep.t_equals_i and rep.dim_T_beta == 34


def test_t0_kernel_and_transporter_identity(quartic):
    f = quartic.f
    P = hodge_class_candidates(quartic).sample(random.Random(2))
    T0 = t0_kernel(f, P)
    assert jacobian_ideal(f).piece(P.degree).issubset(T0) and T0.codim > 0
    assert transporter_identity(f, P).holds


def test_fermat_tangent_space_is_proper(S):
    f = read_poly(fixture("fermat4.poly"), S)
    P = S.monomial([1, 1, 1, 1])     # x0x1x2x3 * P = (x0x1x2x3)^2 stays outside J0
    T = tangent_space_from_class(f, P, H(S, 4))
    assert 0 < T.codim < S.dim(H(S, 4))
    # zero classes: quartic monomials with an exponent >= 3, since J0 = (x_i^4)
    assert zero_classes(f, H(S, 4)).dim == 4 + 12


def test_family_diagnostic(S):
    est = hilbert_family_diagnostic(S, [H(S, 1), H(S, 1)], H(S, 4))
    assert (est.choices_A, est.choices_K) == (8, 40)
    assert (est.scaling, est.koszul) == (4, 10)
    assert est.estimate == 34 >= S.dim(H(S, 4)) - 1
    assert "estimate_kind=heuristic" in est.lines()
    flagged = hilbert_family_diagnostic(S, [H(S, 4), H(S, 1)], H(S, 4))
    assert "delta_equals_beta" in flagged.flags
    with pytest.raises(ValueError):
        hilbert_family_diagnostic(S, [H(S, 5), H(S, 1)], H(S, 4))


def test_v_smoothness_ideal_of_a_line(S):
    I = v_smoothness_ideal([S.variable(0), S.variable(1)])
    # the 2x2 minor in the x0, x1 columns is the unit
    assert any(g.degree.is_zero and not g.is_zero() for g in I.generators)
    assert emptiness_certificate(I).certified


def test_smoothness_check(quartic):
    rep = nl_tangent_codim(quartic, check_smoothness=True)
    assert rep.smoothness == "CERTIFIED"
