"""Numerical Kato constants next to the closed forms where those exist.

    python3 scripts/kappa_table.py --n 2 3 --d 1 2 3 --p 1.5 2 2.5 3
"""

import argparse

from katolab.closed_forms import kappa_closed
from katolab.kato_search import SearchConfig, outer_search
from katolab.tensor_core import Params


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--d", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--p", type=float, nargs="+", default=[1.25, 1.5, 2.0, 2.5, 3.0])
    ap.add_argument("--restarts", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = SearchConfig(restarts=args.restarts, seed=args.seed)
    print(f"{'p':>8} {'n':>2} {'d':>2} {'kappa_upper':>14} {'closed':>10} {'diff':>10}")
    for n in args.n:
        for d in args.d:
            for p in args.p:
                est = outer_search(Params(p, n, d), cfg)
                cf = kappa_closed(Params(p, n, d))
                closed = "-" if cf is None else f"{cf.value:10.6f}"
                diff = "-" if cf is None else f"{est.kappa_upper - cf.value:10.1e}"
                print(f"{p:8.4f} {n:2d} {d:2d} {est.kappa_upper:14.9f} {closed:>10} {diff:>10}")


if __name__ == "__main__":
    main()
