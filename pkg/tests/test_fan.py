from fractions import Fraction

import pytest

from coxnl.fan import (
    Fan,
    FanError,
    decompose_beta,
    product_of_projective_spaces,
    projective_space,
    weighted_projective_plane_112,
)


def test_validate_standard_fans():
    for fan in (projective_space(3), product_of_projective_spaces(1, 2),
                weighted_projective_plane_112()):
        rep = fan.validate()
        assert rep.simplicial and rep.complete and rep.valid


def test_missing_cone_is_incomplete():
    full = product_of_projective_spaces(1, 1)
    fan = Fan(full.rays, full.cones[1:])
    rep = fan.validate()
    assert rep.simplicial and not rep.complete
    assert rep.violating_cones
    with pytest.raises(FanError):
        fan.check()


def test_dependent_rays_are_not_simplicial():
    fan = Fan([(1, 0), (-1, 0), (0, 1)], [(0, 1), (0, 2)])
    rep = fan.validate()
    assert not rep.simplicial and any("dependent" in e for e in rep.errors)


def test_nonprimitive_ray_is_reported():
    fan = Fan([(2, 0), (0, 1), (-1, -1)], [(0, 1), (0, 2), (1, 2)])
    assert "ray 0 is not primitive" in fan.validate().errors


def test_class_groups():
    cg = projective_space(3).class_group
    assert (cg.free_rank, cg.torsion) == (1, ())
    assert product_of_projective_spaces(1, 2).class_group.free_rank == 2
    P112 = weighted_projective_plane_112()
    assert P112.class_group.free_rank == 1
    # x1 carries weight 2 because v0 + 2 v1 + v2 = 0
    assert sorted(d[0] for d in P112.variable_degrees) == [1, 1, 2]
    assert P112.variable_degrees == ((1,), (2,), (1,))


def test_torsion_class_group():
    # P^2 / (Z/3): rays (1,0),(1,3),(-2,-3) span an index-3 sublattice
    fan = Fan([(1, 0), (1, 3), (-2, -3)], [(0, 1), (0, 2), (1, 2)])
    cg = fan.class_group
    assert cg.free_rank == 1 and cg.torsion == (3,)


def test_anticanonical():
    assert projective_space(3).anticanonical().coords == (4,)
    assert product_of_projective_spaces(1, 2).anticanonical().coords == (2, 3)
    assert weighted_projective_plane_112().anticanonical().coords == (4,)


def test_positivity():
    H = projective_space(3).from_class([1])
    assert H.is_ample() and H.is_nef() and H.is_cartier()
    F = product_of_projective_spaces(1, 2)
    D = F.from_class([1, 0])
    assert D.is_nef() and not D.is_ample()
    assert not F.from_class([-1, 1]).is_nef()
    assert F.from_class([1, 1]).is_ample()


def test_weighted_plane_cartier():
    P = weighted_projective_plane_112()
    assert not P.from_class([1]).is_cartier()
    assert P.from_class([2]).is_cartier()
    assert P.from_class([1]).is_ample()


def test_decompose_beta():
    P3 = projective_space(3)
    dec = decompose_beta(P3.from_class([4]), P3.from_class([1]))
    assert dec.q == 4 and dec.beta_prime.is_zero
    F = product_of_projective_spaces(1, 2)
    dec = decompose_beta(F.from_class([2, 3]), F.from_class([1, 1]))
    assert dec.q == 2 and dec.beta_prime.coords == (0, 1) and dec.beta_prime_cartier
    dec = decompose_beta(F.from_class([3, 3]), F.from_class([1, 1]))
    assert dec.q == 3 and dec.beta_prime.is_zero


def test_decompose_beta_rational_q():
    P = weighted_projective_plane_112()
    dec = decompose_beta(P.from_class([3]), P.from_class([2]))
    assert dec.q == Fraction(3, 2) and dec.beta_prime.is_zero


def test_decompose_beta_requires_ample_eta():
    F = product_of_projective_spaces(1, 2)
    with pytest.raises(ValueError):
        decompose_beta(F.from_class([2, 3]), F.from_class([1, 0]))


def test_class_arithmetic():
    F = product_of_projective_spaces(1, 2)
    a, b = F.from_class([1, 2]), F.from_class([0, 1])
    assert (a + b).coords == (1, 3)
    assert (a - b).coords == (1, 1)
    assert (b * 2).coords == (0, 2)
    assert F.divisor([1, 0, 0, 0, 0]).coords == (1, 0)
