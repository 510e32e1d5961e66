"""Tabulate the dendriform image of Omega_q next to descent data.

For each planar binary tree of the given degree: encoding, descent set,
major index and the coefficient from the closed formula, then whether the
recursive computation agrees.

    python3 scripts/dendriform_table.py --degree 4
"""

import argparse

from omegaq.arith import format_rational_function
from omegaq.dendriform import descent_set, major_index, omega_q_dend_explicit, omega_q_dend_recursive, planar_trees


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--degree", type=int, default=4)
    args = parser.parse_args()
    n = args.degree
    explicit = omega_q_dend_explicit(n)
    recursive = omega_q_dend_recursive(n)
    print(f"{'tree':<24} {'descents':<14} maj  coefficient")
    for t in planar_trees(n):
        d = ",".join(str(i) for i in sorted(descent_set(t))) or "-"
        c = format_rational_function(explicit.coefficient(t))
        print(f"{t.encoding:<24} {d:<14} {major_index(t):>3}  {c}")
    print(f"\nrecursion agrees through degree {n}: {explicit == recursive}")


if __name__ == "__main__":
    main()
