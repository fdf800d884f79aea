"""Exact TV of the Schur down-up walk from (n) against the spectral bounds.

At r = ceil(n log(n)/2 + c n) prints the exact distance, the eigenbasis bound
and exp(-3c)/4.
"""
import argparse
import csv
import sys

from latticewalk import lattices as lat
from latticewalk.measures import ShiftedPlancherel
from latticewalk.mixing import schur_theorem_bound, schur_theorem_steps, schur_top_tv_bound, tv_profile
from latticewalk.operators import composed_kernel
from latticewalk.partitions import Partition


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", default="4,5,6,7,8,9,10")
    parser.add_argument("--c", default="0.25,0.5,1")
    args = parser.parse_args()
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "c", "r", "tv", "spectral_bound", "exp_bound"])
    for n in map(int, args.n.split(",")):
        kernel = composed_kernel(lat.schur(), ShiftedPlancherel(), n)
        for c in map(float, args.c.split(",")):
            r = schur_theorem_steps(n, c)
            tv = float(tv_profile(kernel, Partition((n,)), r)[r])
            writer.writerow([n, c, r, f"{tv:.3e}", f"{schur_top_tv_bound(n, r):.3e}", f"{schur_theorem_bound(c):.3e}"])


if __name__ == "__main__":
    main()
