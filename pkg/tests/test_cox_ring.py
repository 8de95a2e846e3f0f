import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from coxnl.cox_ring import (
    CoxRing,
    InhomogeneousError,
    PolynomialSyntaxError,
    format_polynomial,
    log_derivative,
    monomial_basis,
    multiply,
)
from coxnl.fan import product_of_projective_spaces, projective_space, weighted_projective_plane_112


@pytest.fixture
def P3():
    return CoxRing(projective_space(3))


def test_monomial_counts(P3):
    assert len(P3.monomial_basis(P3.fan.from_class([4]))) == 35
    F = product_of_projective_spaces(1, 2)
    assert len(monomial_basis(F, F.from_class([2, 3]))) == 30


def test_degree_zero_is_constants():
    for fan in (projective_space(2), product_of_projective_spaces(1, 1),
                weighted_projective_plane_112()):
        assert monomial_basis(fan, fan.zero_class()) == ((0,) * fan.r,)


def test_noneffective_class_is_empty():
    F = product_of_projective_spaces(1, 2)
    assert monomial_basis(F, F.from_class([-1, 2])) == ()


def test_weighted_plane_basis():
    P = weighted_projective_plane_112()
    S = CoxRing(P)
    # weights (1,2,1): degree 2 has x0^2, x0x2, x2^2, x1
    assert S.dim(P.from_class([2])) == 4
    assert S.dim(P.from_class([3])) == 6


def test_basis_is_sorted_and_deterministic(P3):
    b = P3.monomial_basis(P3.fan.from_class([3]))
    assert list(b) == sorted(b)
    assert b == monomial_basis(projective_space(3), P3.fan.from_class([3]))


def test_multiply(P3):
    f = P3.parse("x0^2 + x1*x3")
    assert multiply(f, P3.one()) == f
    assert P3.parse("x0+x1") * P3.parse("x0-x1") == P3.parse("x0^2-x1^2")
    fermat = P3.parse("x0^4+x1^4+x2^4+x3^4")
    g = fermat * P3.variable(0)
    assert g == P3.parse("x0^5+x0*x1^4+x0*x2^4+x0*x3^4")
    assert g.degree.coords == (5,)


def test_log_derivative(P3):
    f = P3.parse("x0^3")
    assert log_derivative(f, 0) == P3.parse("3*x0^3")
    assert log_derivative(f, 1).is_zero()
    fermat = P3.parse("x0^4+x1^4+x2^4+x3^4")
    for i in range(4):
        assert fermat.log_derivative(i) == P3.parse(f"4*x{i}^4")


def test_zero_derivative_keeps_degree(P3):
    z = P3.parse("x0^3").derivative(1)
    assert z.is_zero() and z.degree.coords == (2,)


def test_parse_and_format_round_trip(P3):
    f = P3.parse("3/2*x1*x2^3 - x3^4 + x0^4")
    assert P3.parse(format_polynomial(f)) == f
    assert str(P3.parse("x0^2 - 2*x0*x1")) == "x0^2 - 2*x0*x1"


def test_inhomogeneous_is_rejected(P3):
    with pytest.raises(InhomogeneousError):
        P3.parse("x0^2 + x1")


@pytest.mark.parametrize("text", ["", "x0^", "x9", "2**x0", "x0 +", "y1"])
def test_syntax_errors(P3, text):
    with pytest.raises(PolynomialSyntaxError):
        P3.parse(text)


def test_vector_round_trip(P3):
    rng = random.Random(3)
    f = P3.random_polynomial(P3.fan.from_class([3]), rng)
    assert P3.from_vector(f.degree, f.vector()) == f


def test_random_polynomial_is_seeded(P3):
    a = P3.random_polynomial(P3.fan.from_class([2]), random.Random(1))
    b = P3.random_polynomial(P3.fan.from_class([2]), random.Random(1))
    assert a == b and len(a.terms) == 10
    assert all(c != 0 and abs(c) <= 100 for c in a.terms.values())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.integers(0, 3))
def test_product_count_oracle(a, b):
    F = product_of_projective_spaces(1, 2)
    assert len(monomial_basis(F, F.from_class([a, b]))) == (a + 1) * math.comb(b + 2, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(1, 3))
def test_projective_count_oracle(k, n):
    fan = projective_space(n)
    assert len(monomial_basis(fan, fan.from_class([k]))) == math.comb(k + n, n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_euler_relation(seed):
    # on P^n the log-derivatives sum to deg(f) * f
    S = CoxRing(projective_space(2))
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    f = S.random_polynomial(S.fan.from_class([k]), rng)
    total = S.zero(f.degree)
    for i in range(3):
        total = total + f.log_derivative(i)
    assert total == f.scale(k)
