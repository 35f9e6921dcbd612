"""Map the agreement between the 2F1-series route and the double series.

    python scripts/method_agreement.py --grid 41 --span 4 > agreement.csv

For a fixed (a, b, c) the script evaluates phi2 both ways on a square grid
of (x, y) and writes the relative difference, the terms used by each route
and whether the 2F1 route flagged cancellation. Useful for seeing where the
automatic dispatcher has to swap roles or fall back.
"""
import argparse
import csv
import sys

import numpy as np

from hker.humbert import Phi2Params, phi2_direct, phi2_f21_series
from hker.specfun import SpecialFunctionError


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--a", type=float, default=0.7)
    ap.add_argument("--b", type=float, default=1.3)
    ap.add_argument("--c", type=float, default=2.2)
    ap.add_argument("--span", type=float, default=4.0)
    ap.add_argument("--grid", type=int, default=21)
    args = ap.parse_args()

    p = Phi2Params(args.a, args.b, args.c)
    axis = np.linspace(-args.span, args.span, args.grid)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["x", "y", "rel_diff", "terms_f21", "terms_direct", "f21_converged"])
    for x in axis:
        for y in axis:
            d = phi2_direct(p, float(x), float(y))
            try:
                f = phi2_f21_series(p, float(x), float(y))
            except SpecialFunctionError:
                w.writerow([f"{x:.6g}", f"{y:.6g}", "", "", d.terms_used, "error"])
                continue
            diff = abs(f.value - d.value) / max(abs(f.value), abs(d.value), 1e-300)
            w.writerow([f"{x:.6g}", f"{y:.6g}", f"{diff:.3e}", f.terms_used, d.terms_used,
                        str(f.converged).lower()])


if __name__ == "__main__":
    main()
