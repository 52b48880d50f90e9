"""Run the scenario reproduction suite end to end via the CLI.

Desk scale by default (200 replicates on 2000 points); pass --full-scale
for the 1000 x 5000 setting (slow). Reports land in --outdir.
"""

import argparse
import sys

from stbfield import cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="scenario-reports")
    ap.add_argument("--presets", default="table1,table2,table3")
    ap.add_argument("--full-scale", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    status = 0
    for preset in args.presets.split(","):
        cmd = ["scenario", "--preset", preset.strip(),
               "--outdir", args.outdir, "--seed", str(args.seed)]
        cmd.append("--full-scale" if args.full_scale else "--desk-scale")
        print(">>> " + " ".join(cmd))
        status = max(status, cli.main(cmd))
    return status


if __name__ == "__main__":
    sys.exit(main())
