#!/usr/bin/env python3
"""Symmetric factorization error as the input's spectrum decays faster.

Generates n x n symmetric matrices with eigenvalues -exp(-i/t) on a fixed
random orthogonal basis, factors each at a deep core size, and writes the
(t, relative error) curve to CSV.
"""

import argparse
import sys

from mrmf.bench import DECAY_CORE_SIZE, run_decay_sweep


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument(
        "--t-list",
        type=lambda s: [float(v) for v in s.split(",") if v.strip()],
        default=[1.0, 2.0, 4.0, 6.0, 8.0, 10.0],
    )
    parser.add_argument("--core-size", type=int, default=DECAY_CORE_SIZE)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", default="benchmarks/out/decay.csv")
    args = parser.parse_args(argv)

    rows = run_decay_sweep(
        args.n, args.t_list, args.seed, output=args.out, core_size=args.core_size
    )
    for t, err in rows:
        print(f"t={t:<6g} error={err:.6f}")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
