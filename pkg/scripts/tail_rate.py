"""Tail decay of the commutator [b, I_alpha] f away from the support of b.

Two experiments on the line, alpha = 1/4, p = 2, box half-width 64:

* fixed b (bump of radius 1/2) and fixed f = 1_[-1,1]: the tail falls like
  R^(alpha - n) because b only sees f on its own support;
* b and f rescaled with R (b_R(x) = b(x/R), f_R = (R/8)^(-1/p) 1_[-R/8, R/8], both
  of fixed size in their natural norms): the tail falls like R^(alpha - n/p),
  the uniform rate over the Morrey unit ball.

Run: python scripts/tail_rate.py
"""

import numpy as np

from campanato.commutator import KernelConfig, commutator_apply, fit_slope, tail_decay_probe
from campanato.grid import GridSpec, catalog

ALPHA, P, RADII = 0.25, 2.0, (4.0, 8.0, 16.0, 32.0)


def main():
    grid = GridSpec(1, 64.0, 1024)
    cfg = KernelConfig(ALPHA)
    b = catalog("bump", {"radius": 0.5}, grid)
    f = catalog("indicator", {"a": -1.0, "b": 1.0}, grid)
    rep = tail_decay_probe(b, f, ALPHA, P, RADII, cfg)
    print("fixed b and f")
    for R, v in rep.curve.points:
        print(f"  R = {R:5g}   sup |[b,I]f| = {v:.6e}")
    print(f"  fitted slope {rep.fitted_slope:+.4f}   (alpha - n = {ALPHA - 1:+.4f}, "
          f"alpha - n/p = {ALPHA - 1 / P:+.4f})")

    print("b and f rescaled with R (supports of radius R/8 and R/16)")
    grid = GridSpec(1, 64.0, 4096)  # finer lattice so the smallest rescaled bump spans 16 cells
    x = np.abs(grid_axis(grid))
    vals = []
    for R in RADII:
        s = R / 8
        bR = catalog("bump", {"radius": s / 2}, grid)
        bR = bR.with_values(bR.values / np.max(bR.values))  # unit height, like b(x/R)
        fR = catalog("indicator", {"a": -s, "b": s}, grid)
        fR = fR.with_values(fR.values * s ** (-1 / P))
        C = commutator_apply(bR, fR, cfg)
        vals.append(float(np.max(np.abs(C.values[x >= R]))))
        print(f"  R = {R:5g}   sup |[b_R,I]f_R| = {vals[-1]:.6e}")
    print(f"  fitted slope {fit_slope(RADII, vals):+.4f}   (alpha - n/p = {ALPHA - 1 / P:+.4f})")


def grid_axis(grid):
    return catalog("poly", {"coeffs": [0.0, 1.0]}, grid).values


if __name__ == "__main__":
    main()
