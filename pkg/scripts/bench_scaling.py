"""Wall-time scaling of the simulation engine in n and L.

Default grid doubles n and L from desk-size anchors; the large Figure-1
style run (10^6 points, L = 1000) is behind --big.
"""

import argparse
import sys
import time

import numpy as np

from stbfield import engine
from stbfield.models import CorrelationModel, GHParams
from stbfield.samplers import RngStream


def timed(model, dim, n, L, seed):
    loc = RngStream(seed, 1).gen.random((n, dim))
    t0 = time.perf_counter()
    engine.simulate(model, dim, loc, L=L, seed=seed)
    return time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--L", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--big", action="store_true",
                    help="also run n = 10^6, L = 1000")
    args = ap.parse_args(argv)

    model = CorrelationModel(GHParams(nu=1.0, mu=7.0, l=0.5, a=0.2, dim=2),
                             sill=1.0)
    rows = []
    for n, L in [(args.n // 2, args.L), (args.n, args.L),
                 (args.n, args.L // 2)]:
        dt = timed(model, 2, n, L, args.seed)
        rows.append((n, L, dt))
        print("n=%-8d L=%-5d %8.3f s   (%.1f Mterm/s)"
              % (n, L, dt, n * L / dt / 1e6))
    half_n, full, half_l = rows[0][2], rows[1][2], rows[2][2]
    print("n scaling ratio: %.2f (ideal 2.0)" % (full / half_n))
    print("L scaling ratio: %.2f (ideal 2.0)" % (full / half_l))
    if args.big:
        dt = timed(model, 2, 1_000_000, 1000, args.seed)
        print("n=1000000 L=1000 %8.3f s" % dt)
    return 0


if __name__ == "__main__":
    sys.exit(main())
