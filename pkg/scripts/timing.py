"""Wall-clock time of each registered check at a given order.

    python3 scripts/timing.py --order 8
"""

import argparse
import time

from omegaq.checks import CHECK_NAMES, CheckContext, run_check


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--order", type=int, default=8)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--only", nargs="*", default=None)
    args = parser.parse_args()
    ctx = CheckContext(order=args.order, jobs=args.jobs)
    for name in args.only or CHECK_NAMES:
        start = time.perf_counter()
        result = run_check(name, ctx)
        elapsed = time.perf_counter() - start
        print(f"{name:<20} {'pass' if result.ok else 'FAIL':<5} {elapsed:8.2f} s  {result.detail}")


if __name__ == "__main__":
    main()
