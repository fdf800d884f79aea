"""Kingman theta = 1 separation at r = ceil(c n^2) against the limit series.

    python scripts/kingman_limit_table.py --c 0.1,0.25,0.5,1 --n 20,40,60 > kingman.csv
"""
import argparse
import sys

from latticewalk.cli import emit_limit_table, parse_floats, parse_range
from latticewalk.mixing import KINGMAN_THETA1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--c", default="0.05,0.1,0.25,0.5,1")
    parser.add_argument("--n", default="20,40,60")
    args = parser.parse_args()
    sys.stdout.write(emit_limit_table(KINGMAN_THETA1, parse_floats(args.c), parse_range(args.n)))


if __name__ == "__main__":
    main()
