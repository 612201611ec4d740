"""Table of the regularity constants over [2, 3] and the two regularity windows."""

import argparse

import numpy as np

from katolab.regularity_constants import constants_row, regularity_window, thresholds


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=11)
    args = ap.parse_args()

    cols = ("V_p", "C_HL", "C_HL_simple", "C_P", "alpha_star", "C_T", "C_ext")
    print(f"{'p':>6} " + " ".join(f"{c:>12}" for c in cols) + "  window")
    for p in np.linspace(2.0, 3.0, args.steps):
        row = constants_row(float(p))
        vals = " ".join(f"{getattr(row, c):12.6f}" for c in cols)
        print(f"{p:6.3f} {vals}  {regularity_window(float(p)).value}")
    th = thresholds()
    print(f"\np0 = {th.p0:.10f}   eps3 = {th.eps3:.10f}   p1 = {th.p1:.10f} (rounded {th.p1_rounded})")
    print(f"1/sup C_ext over the grid = {th.eps3_grid:.15f}")


if __name__ == "__main__":
    main()
