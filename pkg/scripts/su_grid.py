#!/usr/bin/env python3
"""Tabulate the classification of principal special-unitary bundle models.

For each pair (n, m) in a grid this prints the number of distinct rational
homotopy types of the classifying-space model among all pure twists of the
SU(n) fiber over CP^m, the value of the naive enumeration formula, and the
first-nonzero invariant of each representative.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from derlie.classify import classify_su_family


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=5)
    parser.add_argument("--max-m", type=int, default=5)
    args = parser.parse_args()

    print(f"{'n':>3} {'m':>3} {'count':>6} {'formula':>8}  representatives")
    for n in range(1, args.max_n + 1):
        for m in range(1, args.max_m + 1):
            rep = classify_su_family(n, m, 2 * n)
            flag = " (disagrees)" if rep.formula_disagrees else ""
            reps = ", ".join(
                f"{label} [n={rep.invariants[label]}]"
                for label in sorted(rep.representatives)
            )
            print(f"{n:>3} {m:>3} {rep.count:>6} "
                  f"{rep.literal_example_count:>8}{flag}  {reps}")
            for kept, merged, cert in rep.merges:
                print(f"{'':17}merged {merged} into {kept}: {cert}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
