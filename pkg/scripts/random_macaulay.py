"""Cox-Gorenstein verdicts for seeded random complete intersections on small toric varieties.

Usage: python scripts/random_macaulay.py [trials]
"""

import random
import sys

from coxnl.cox_ring import CoxRing
from coxnl.fan import product_of_projective_spaces, projective_space
from coxnl.gorenstein import verify_cox_gorenstein
from coxnl.graded_ideal import GradedIdeal

CASES = [
    ("P2", projective_space(2), [[2], [2], [2]]),
    ("P2", projective_space(2), [[1], [2], [3]]),
    ("P3", projective_space(3), [[1], [2], [2], [2]]),
    ("P1xP1", product_of_projective_spaces(1, 1), [[1, 1], [1, 1], [1, 1]]),
    ("P1xP1", product_of_projective_spaces(1, 1), [[2, 1], [1, 2], [1, 1]]),
]


def main(trials: int = 5):
    for name, fan, degrees in CASES:
        S = CoxRing(fan)
        classes = [fan.from_class(c) for c in degrees]
        N = sum(classes[1:], classes[0]) - fan.anticanonical()
        verdicts = []
        for seed in range(trials):
            rng = random.Random(seed)
            I = GradedIdeal(S, [S.random_polynomial(c, rng, bound=20) for c in classes])
            verdicts.append(verify_cox_gorenstein(I, N).verdict)
        print(f"{name} degrees={degrees} N={N.label()} verdicts={','.join(verdicts)}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:2]))
