"""Polytopes of torus-invariant divisors: vertices, lattice points, exact volume.

For a divisor ``D = sum a_rho D_rho`` the polytope is
``P_D = {m in M_R : <m, v_rho> >= -a_rho for all rho}``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact_linalg import RationalMatrix


def _solve_square(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve a small square system by Gaussian elimination; None if singular."""
    n = len(A)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n] for row in m]


def _affine_dim(points: Sequence[Sequence[Fraction]]) -> int:
    if len(points) <= 1:
        return len(points) - 1
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    return RationalMatrix(diffs, len(p0)).rank()


class DivisorPolytope:
    """The polytope ``P_D`` of a divisor representative on a complete fan."""

    def __init__(self, rays: Sequence[Sequence[int]], a: Sequence):
        self.rays = tuple(tuple(v) for v in rays)
        self.a = tuple(Fraction(x) for x in a)
        self.d = len(self.rays[0])

    def contains(self, m: Sequence) -> bool:
        return all(sum(x * y for x, y in zip(m, v)) >= -ai for v, ai in zip(self.rays, self.a))

    @cached_property
    def vertices(self) -> tuple[tuple[Fraction, ...], ...]:
        """All vertices, sorted; empty when the polytope is empty."""
        found = set()
        for sub in itertools.combinations(range(len(self.rays)), self.d):
            m = _solve_square([self.rays[i] for i in sub], [-self.a[i] for i in sub])
            if m is not None and self.contains(m):
                found.add(tuple(m))
        return tuple(sorted(found))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def lattice_points(self) -> list[tuple[int, ...]]:
        """Integer points, found by scanning the vertex bounding box."""
        verts = self.vertices
        if not verts:
            return []
        lo = [math.ceil(min(v[i] for v in verts)) for i in range(self.d)]
        hi = [math.floor(max(v[i] for v in verts)) for i in range(self.d)]
        ineqs = list(zip(self.rays, self.a))
        if all(ai.denominator == 1 for ai in self.a):
            ineqs = [(v, int(ai)) for v, ai in ineqs]
        out = []
        for m in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
            if all(sum(x * y for x, y in zip(m, v)) + ai >= 0 for v, ai in ineqs):
                out.append(m)
        return out

    @cached_property
    def dim(self) -> int:
        return _affine_dim(self.vertices)

    def _tight(self, j: int) -> frozenset[int]:
        v = self.rays[j]
        return frozenset(i for i, m in enumerate(self.vertices)
                         if sum(x * y for x, y in zip(m, v)) == -self.a[j])

    def _facets(self, face: frozenset[int], dim: int) -> list[frozenset[int]]:
        out = []
        verts = self.vertices
        for t in self._tights:
            g = face & t
            if g != face and g and g not in out and \
                    _affine_dim([verts[i] for i in sorted(g)]) == dim - 1:
                out.append(g)
        return out

    @cached_property
    def _tights(self) -> list[frozenset[int]]:
        return [self._tight(j) for j in range(len(self.rays))]

    def triangulation(self) -> list[tuple[int, ...]]:
        """Pulling triangulation into full-dimensional simplices (vertex indices)."""
        if self.is_empty or self.dim < self.d:
            return []

        def rec(face: frozenset[int], dim: int) -> list[tuple[int, ...]]:
            if dim == 0:
                return [tuple(face)]
            v0 = min(face)
            simplices = []
            for g in self._facets(face, dim):
                if v0 in g:
                    continue
                simplices.extend((v0,) + s for s in rec(g, dim - 1))
            return simplices

        return rec(frozenset(range(len(self.vertices))), self.d)

    @cached_property
    def volume(self) -> Fraction:
        """Euclidean volume in ``M_R``; the unit simplex has volume ``1/d!``."""
        verts = self.vertices
        total = Fraction(0)
        for s in self.triangulation():
            p0 = verts[s[0]]
            rows = [[x - y for x, y in zip(verts[i], p0)] for i in s[1:]]
            total += abs(_det(rows))
        return total / math.factorial(self.d)


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det
