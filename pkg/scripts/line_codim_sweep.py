"""Tangent codimension of surfaces in P^3 containing a line, for several degrees and seeds.

Usage: python scripts/line_codim_sweep.py [max_degree] [seeds]
"""

import sys
import time

from coxnl.acceptance import coordinate_line_datum, generic_line_datum, line_count_codim
from coxnl.nl_tangent import nl_tangent_codim


def main(max_degree: int = 6, seeds: int = 3):
    for d in range(4, max_degree + 1):
        for label, make in (("coordinate", coordinate_line_datum), ("general", generic_line_datum)):
            for seed in range(seeds):
                t = time.perf_counter()
                rep = nl_tangent_codim(make(d, seed=seed))
                print(f"d={d} line={label} seed={seed} codim={rep.codim} "
                      f"oracle={line_count_codim(d)} j0_in_i={rep.j0_in_i} "
                      f"seconds={time.perf_counter() - t:.2f}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:3]))
