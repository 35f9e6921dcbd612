"""Run every registered identity over a range of seeds and summarize.

    python scripts/run_sweeps.py --seeds 0:20 --out results/sweeps.jsonl

Each line of the output file is one IdentityReport record. A per-identity
summary (worst relative error over all seeds, failing seeds) goes to stdout.
"""
import argparse
import time
from dataclasses import replace
from pathlib import Path

from hker import verify
from hker.records import dumps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", default="0:10", help="half-open range lo:hi")
    ap.add_argument("--samples", type=int, default=None)
    ap.add_argument("--complex", action="store_true")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--only", nargs="*", default=None)
    ap.add_argument("--out", type=Path, default=Path("results/sweeps.jsonl"))
    args = ap.parse_args()

    lo, hi = (int(s) for s in args.seeds.split(":"))
    names = args.only or list(verify.REGISTRY)
    args.out.parent.mkdir(parents=True, exist_ok=True)

    with args.out.open("w") as fh:
        for name in names:
            domain = verify.REGISTRY[name].domain
            if args.complex:
                domain = replace(domain, complex_parts=True)
            worst, bad, t0 = 0.0, [], time.perf_counter()
            for seed in range(lo, hi):
                r = verify.check_identity(name, domain, args.samples, seed, jobs=args.jobs)
                fh.write(dumps(r.to_record()) + "\n")
                worst = max(worst, r.max_rel_err)
                if not r.passed:
                    bad.append(seed)
            print(f"{name:<13} seeds={hi - lo:<4} worst={worst:.2e} "
                  f"tol={verify.REGISTRY[name].default_tol:.0e} failing={bad or '-'} "
                  f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
