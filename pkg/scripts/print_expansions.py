"""Print the first homogeneous components of Omega, Omega_q, Omega_inf and Omega_0.

    python3 scripts/print_expansions.py --order 5
    python3 scripts/print_expansions.py --order 6 --json-dir fixtures/
"""

import argparse
from pathlib import Path

from omegaq.cli import RunConfig, compute_bundle
from omegaq.io import KINDS, to_json, to_text


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--order", type=int, default=5)
    parser.add_argument("--kinds", nargs="*", default=["omega", "omega-q", "omega-inf", "omega-0"], choices=KINDS)
    parser.add_argument("--json-dir", type=Path, help="also write one JSON bundle per kind here")
    args = parser.parse_args()
    if args.json_dir:
        args.json_dir.mkdir(parents=True, exist_ok=True)
    for kind in args.kinds:
        bundle = compute_bundle(RunConfig("compute", kind, args.order))
        print(to_text(bundle))
        if args.json_dir:
            (args.json_dir / f"{kind}-{args.order}.json").write_text(to_json(bundle))


if __name__ == "__main__":
    main()
