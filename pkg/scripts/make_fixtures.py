"""Regenerate the bundled fixture files under src/coxnl/fixtures."""

import random

from coxnl.cox_ring import CoxRing
from coxnl.fan import product_of_projective_spaces, projective_space, weighted_projective_plane_112
from coxnl.io import fixtures_dir, format_fan, format_poly

GENERIC_LINE_SEED = 2024


def main():
    out = fixtures_dir()
    out.mkdir(exist_ok=True)
    fans = {
        "p2": projective_space(2),
        "p3": projective_space(3),
        "p1xp1": product_of_projective_spaces(1, 1),
        "p1xp2": product_of_projective_spaces(1, 2),
        "p112": weighted_projective_plane_112(),
    }
    for name, fan in fans.items():
        (out / f"{name}.fan").write_text(format_fan(fan))
    S = CoxRing(fans["p3"])
    for d in (4, 5):
        f = S.parse(" + ".join(f"x{i}^{d}" for i in range(4)))
        (out / f"fermat{d}.poly").write_text(format_poly(f))
    for i in range(2):
        (out / f"x{i}.poly").write_text(format_poly(S.variable(i)))
    # a line in general position with respect to the torus
    rng = random.Random(GENERIC_LINE_SEED)
    H = fans["p3"].from_class([1])
    for i in range(2):
        (out / f"gline{i}.poly").write_text(format_poly(S.random_polynomial(H, rng)))
    print(f"wrote fixtures to {out}")


if __name__ == "__main__":
    main()
