"""Exact computations in Cox rings of simplicial projective toric varieties.

Graded pieces of ideals, Cox-Gorenstein duality, intersection-theoretic degree
bounds and tangent spaces to Noether-Lefschetz loci, all over the rationals.
"""

__version__ = "0.1.0"

from .cox_ring import CoxRing, GradedPolynomial
from .fan import DivisorClass, Fan, product_of_projective_spaces, projective_space
from .graded_ideal import GradedIdeal, SubspaceOfDegree, jacobian_ideal

__all__ = [
    "CoxRing", "DivisorClass", "Fan", "GradedIdeal", "GradedPolynomial", "SubspaceOfDegree",
    "jacobian_ideal", "product_of_projective_spaces", "projective_space", "__version__",
]
