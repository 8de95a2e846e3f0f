"""Intersection numbers of nef divisor classes as mixed volumes of their polytopes."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fan import DivisorClass, decompose_beta
from .polytope import DivisorPolytope


class NotNefError(ValueError):
    pass


@functools.lru_cache(maxsize=4096)
def _volume(rays: tuple, representative: tuple) -> Fraction:
    return DivisorPolytope(rays, representative).volume


def _polytope_volume(D: DivisorClass) -> Fraction:
    return _volume(D.fan.rays, tuple(Fraction(a) for a in D.representative))


def intersection_number(classes: Sequence[DivisorClass]) -> Fraction:
    """``D_1 ... D_d`` for nef classes, normalized so that ``H^d = 1`` on ``P^d``.

    Uses ``P_{D+D'} = P_D + P_{D'}`` for nef divisors and the polarization
    formula ``D_1...D_d = sum_S (-1)^(d-|S|) vol(P_{sum_S D_i})``.
    """
    classes = list(classes)
    if not classes:
        raise ValueError("no classes given")
    fan = classes[0].fan
    if len(classes) != fan.d:
        raise ValueError(f"expected {fan.d} classes, got {len(classes)}")
    for D in classes:
        if not D.is_nef():
            raise NotNefError(f"class ({D.label()}) is not nef")
    d = fan.d
    total = Fraction(0)
    cache: dict[tuple, Fraction] = {}
    for size in range(1, d + 1):
        sign = -1 if (d - size) % 2 else 1
        for sub in itertools.combinations(range(d), size):
            rep = [sum((classes[i].representative[j] for i in sub), Fraction(0))
                   for j in range(fan.r)]
            key = tuple(sorted(classes[i].coords for i in sub))
            if key not in cache:
                cache[key] = _polytope_volume(DivisorClass(fan, rep))
            total += sign * cache[key]
    return total


def deg_eta(W_classes: Sequence[DivisorClass], eta: DivisorClass, dim_Z: int) -> Fraction:
    """Degree of a complete intersection ``Z`` of the ``W_classes`` against ``eta``."""
    W_classes = list(W_classes)
    d = eta.fan.d
    if len(W_classes) != d - dim_Z:
        raise ValueError(f"a {dim_Z}-dimensional complete intersection needs "
                         f"{d - dim_Z} classes, got {len(W_classes)}")
    return intersection_number([eta] * dim_Z + W_classes)


@dataclass
class DegreeBoundReport:
    q: Fraction
    beta_prime: DivisorClass
    beta_prime_cartier: bool
    deg: Fraction            # <eta^k beta, [W]> = deg_eta(X cap W)
    deg_W: Fraction          # <eta^(k+1), [W]>
    tail: Fraction           # <eta^k beta', [W]>

    @property
    def chain_holds(self) -> bool:
        return self.deg == self.q * self.deg_W + self.tail

    @property
    def bound_holds(self) -> bool:
        return self.deg >= self.q

    @property
    def ok(self) -> bool:
        return self.chain_holds and self.bound_holds and self.tail >= 0 and self.deg_W >= 1

    def lines(self) -> list[str]:
        return [
            f"q={self.q}",
            f"beta_prime={self.beta_prime.label()}",
            f"beta_prime_cartier={str(self.beta_prime_cartier).lower()}",
            f"deg={self.deg}",
            f"deg_W={self.deg_W}",
            f"tail={self.tail}",
            f"chain={'OK' if self.chain_holds else 'FAIL'}",
            f"bound={'OK' if self.ok else 'FAIL'}",
        ]


def verify_degree_bound(beta: DivisorClass, eta: DivisorClass,
                        W_classes: Sequence[DivisorClass]) -> DegreeBoundReport:
    """Check ``deg_eta(X cap W) >= q`` for ``W`` cut out by ``k`` nef classes on a ``(2k+1)``-fold.

    ``W_classes`` present ``W``; irreducibility of ``W`` is assumed, not checked.
    """
    W_classes = list(W_classes)
    d = eta.fan.d
    k = len(W_classes)
    if d != 2 * k + 1:
        raise ValueError(f"expected {(d - 1) // 2} classes presenting W, got {k}")
    for w in W_classes:
        if w.is_zero:
            raise ValueError("W classes must be nonzero")
        if not w.is_nef():
            raise NotNefError(f"W class ({w.label()}) is not nef")
    dec = decompose_beta(beta, eta)
    if not dec.beta_prime.is_nef():
        raise NotNefError(f"beta - q eta = ({dec.beta_prime.label()}) is not nef")
    deg = intersection_number([eta] * k + [beta] + W_classes)
    deg_W = intersection_number([eta] * (k + 1) + W_classes)
    tail = intersection_number([eta] * k + [dec.beta_prime] + W_classes)
    return DegreeBoundReport(dec.q, dec.beta_prime, dec.beta_prime_cartier, deg, deg_W, tail)
