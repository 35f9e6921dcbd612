"""Tabulate phi2 on the lines y = x and y = -x next to its one-variable reductions.

    python scripts/tabulate_reductions.py --a 0.5 --b 0.5 --c 1.5 --x-max 3 --steps 31

Columns: x, the double series, the reduction, relative difference, and the
path the automatic dispatcher chose. Output is CSV on stdout.
"""
import argparse
import csv
import sys

import numpy as np

from hker.humbert import Phi2Params, phi2_antisym, phi2_auto, phi2_direct, phi2_equal_args


def rel(u, v):
    return abs(u - v) / max(abs(u), abs(v), 1e-300)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--a", type=float, default=0.5)
    ap.add_argument("--b", type=float, default=0.5)
    ap.add_argument("--c", type=float, default=1.5)
    ap.add_argument("--x-max", type=float, default=3.0)
    ap.add_argument("--steps", type=int, default=31)
    args = ap.parse_args()

    p = Phi2Params(args.a, args.b, args.c)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["line", "x", "series", "reduction", "rel_diff", "auto_path"])
    for x in np.linspace(-args.x_max, args.x_max, args.steps):
        x = float(x)
        s = phi2_direct(p, x, x).value
        r = phi2_equal_args(args.a, args.b, args.c, x).value
        w.writerow(["y=x", f"{x:.6g}", f"{s.real:.17g}", f"{r.real:.17g}", f"{rel(s, r):.3e}",
                    phi2_auto(p, x, x).path])
        if args.a == args.b:
            s = phi2_direct(p, x, -x).value
            r = phi2_antisym(args.a, args.c, x).value
            w.writerow(["y=-x", f"{x:.6g}", f"{s.real:.17g}", f"{r.real:.17g}", f"{rel(s, r):.3e}",
                        phi2_auto(p, x, -x).path])


if __name__ == "__main__":
    main()
