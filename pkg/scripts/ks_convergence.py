#!/usr/bin/env python3
"""Sweep the finite-field family average against the exact USp moment.

Prints one row per (partition, q) with the absolute error and the fitted
C q^(-1/2) envelope, the data behind the equidistribution check.

    python scripts/ks_convergence.py --q 3,5,7,11,13,17,19,23
"""

import argparse
import math

from symp.ffield import PrimeField, empirical_moment
from symp.moments import moment_usp
from symp.partitions import Partition


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1)
    parser.add_argument("--q", default="3,5,7,11,13,17,19,23")
    parser.add_argument("--partitions", default="1^2,2^1,1^4,2^2")
    parser.add_argument("--mode", default="all_prime_powers")
    args = parser.parse_args()

    q_list = [int(tok) for tok in args.q.split(",")]
    fields = {q: PrimeField(q) for q in q_list}
    print(f"{'partition':>10} {'q':>4} {'empirical':>12} {'exact':>7} {'abs_err':>10} {'C/sqrt(q)':>10}")
    for text in args.partitions.split(","):
        a = Partition.parse(text.replace("+", " "))
        ref = moment_usp(args.n, a)
        errs = {}
        for q in q_list:
            value = empirical_moment(fields[q], args.n, a, args.mode)
            errs[q] = abs(value - ref)
        fitted = max(err * math.sqrt(q) for q, err in errs.items())
        for q in q_list:
            value = empirical_moment(fields[q], args.n, a, args.mode)
            print(
                f"{a.format():>10} {q:>4} {value:>12.6f} {ref:>7} {errs[q]:>10.6f} {fitted / math.sqrt(q):>10.6f}"
            )


if __name__ == "__main__":
    main()
