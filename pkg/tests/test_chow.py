from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coxnl.chow import NotNefError, deg_eta, intersection_number, verify_degree_bound
from coxnl.fan import product_of_projective_spaces, projective_space, weighted_projective_plane_112


def atoms_p1xp2(classes):
    """Coefficient of H1 H2^2 when expanding a product of three classes (a_i H1 + b_i H2)."""
    (a1, b1), (a2, b2), (a3, b3) = classes
    return a1 * b2 * b3 + a2 * b1 * b3 + a3 * b1 * b2


@pytest.fixture(scope="module")
def F():
    return product_of_projective_spaces(1, 2)


def test_normalization():
    P3 = projective_space(3)
    assert intersection_number([P3.from_class([1])] * 3) == 1
    assert intersection_number([P3.from_class([2]), P3.from_class([1]), P3.from_class([3])]) == 6


def test_p1xp2_atoms(F):
    C = F.from_class
    assert intersection_number([C([1, 0]), C([0, 1]), C([0, 1])]) == 1
    assert intersection_number([C([0, 1])] * 3) == 0
    assert intersection_number([C([1, 0]), C([1, 0]), C([0, 1])]) == 0
    assert intersection_number([C([1, 1])] * 3) == 3


def test_weighted_plane_self_intersection():
    P = weighted_projective_plane_112()
    assert intersection_number([P.from_class([1])] * 2) == Fraction(1, 2)
    assert intersection_number([P.from_class([2])] * 2) == 2


def test_deg_eta(F):
    P3 = projective_space(3)
    H = P3.from_class([1])
    assert deg_eta([H, H], H, 1) == 1
    assert deg_eta([], H, 3) == 1
    C = F.from_class
    # the surface X cut by beta = (2,3) inside W = (1,1), against eta = (1,1)
    assert deg_eta([C([2, 3]), C([1, 1])], C([1, 1]), 1) == 8
    assert atoms_p1xp2([(1, 1), (2, 3), (1, 1)]) == 8
    with pytest.raises(ValueError):
        deg_eta([H], H, 1)


def test_non_nef_is_refused(F):
    with pytest.raises(NotNefError):
        intersection_number([F.from_class([-1, 1]), F.from_class([1, 1]), F.from_class([1, 1])])


def test_wrong_count_is_refused(F):
    with pytest.raises(ValueError):
        intersection_number([F.from_class([1, 1])] * 2)


def test_degree_bound_examples(F):
    C = F.from_class
    rep = verify_degree_bound(C([2, 3]), C([1, 1]), [C([1, 0])])
    assert rep.q == 2 and rep.deg == atoms_p1xp2([(1, 1), (2, 3), (1, 0)]) == 3
    assert rep.deg_W == 1 and rep.tail == 1 and rep.ok
    assert rep.lines()[-2:] == ["chain=OK", "bound=OK"]


def test_degree_bound_for_quartic_surfaces():
    # V = X cap W on P^3 has degree 4 deg W >= q = 4 for any effective W
    P3 = projective_space(3)
    H = P3.from_class
    for w in range(1, 4):
        rep = verify_degree_bound(H([4]), H([1]), [H([w])])
        assert rep.q == 4 and rep.deg == 4 * w and rep.ok


def test_degree_bound_rejects_bad_input(F):
    C = F.from_class
    with pytest.raises(ValueError):
        verify_degree_bound(C([2, 3]), C([1, 1]), [C([0, 0])])
    with pytest.raises(NotNefError):
        verify_degree_bound(C([2, 3]), C([1, 1]), [C([-1, 1])])
    with pytest.raises(ValueError):
        verify_degree_bound(C([2, 3]), C([1, 1]), [C([1, 0]), C([0, 1])])


nef = st.tuples(st.integers(0, 3), st.integers(0, 3))


@settings(max_examples=60, deadline=None)
@given(st.tuples(nef, nef, nef))
def test_matches_multilinear_oracle(classes):
    F = product_of_projective_spaces(1, 2)
    got = intersection_number([F.from_class(list(c)) for c in classes])
    assert got == atoms_p1xp2(classes)


@settings(max_examples=40, deadline=None)
@given(st.tuples(nef, nef, nef, nef), st.integers(0, 3))
def test_symmetric_and_multilinear(classes, scale):
    F = product_of_projective_spaces(1, 2)
    a, b, c, d = [F.from_class(list(x)) for x in classes]
    assert intersection_number([a, b, c]) == intersection_number([c, a, b])
    lhs = intersection_number([a + d * scale, b, c])
    assert lhs == intersection_number([a, b, c]) + scale * intersection_number([d, b, c])


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda w: w != (0, 0)),
       st.tuples(st.integers(1, 4), st.integers(1, 4)))
def test_chain_holds(w, beta):
    F = product_of_projective_spaces(1, 2)
    rep = verify_degree_bound(F.from_class(list(beta)), F.from_class([1, 1]),
                              [F.from_class(list(w))])
    assert rep.chain_holds and rep.tail >= 0 and rep.deg_W >= 1 and rep.bound_holds
