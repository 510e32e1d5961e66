"""Command-line front end.

    omegaq compute omega-q --order 6 --format text
    omegaq verify fork-equivalence --order 6

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import arith
from .checks import CHECK_NAMES, CheckContext, run_check
from .dendriform import omega_q_dend_explicit, omega_q_dend_recursive
from .io import KINDS, VERSION, SeriesBundle, to_json, to_text
from .omega import (
    carlitz_oracle,
    extract_carlitz,
    extract_qlog,
    omega_classical,
    omega_infinity,
    omega_q,
    omega_q_via_forks,
    specialize,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_ORDER_CAP = 12
CACHE_ENV = "OMEGAQ_CACHE_DIR"
CACHE_FILE = "memo-tables.json"

log = logging.getLogger("omegaq")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    target: str
    order: int
    fmt: str = "text"
    jobs: int = 1
    output: Path | None = None
    force_large: bool = False
    seed: int = 0
    mode: str | None = None
    order_cap: int = DEFAULT_ORDER_CAP

    def validate(self) -> None:
        if self.order < 1:
            raise UsageError("--order must be >= 1")
        if self.order > self.order_cap and not self.force_large:
            raise UsageError(f"--order {self.order} exceeds the safety cap {self.order_cap}; pass --force-large")
        if self.jobs < 0:
            raise UsageError("--jobs must be >= 0")
        names = KINDS if self.command == "compute" else CHECK_NAMES
        if self.target not in names:
            raise UsageError(f"unknown {'series' if self.command == 'compute' else 'check'} {self.target!r}")
        if self.mode is not None and self.mode not in MODES.get(self.target, ()):
            raise UsageError(f"mode {self.mode!r} not available for {self.target}")


# modes per series; the first is the default
MODES = {
    "omega-q": ("recursion", "forks"),
    "omega-inf": ("limit", "closed_form"),
    "carlitz": ("omega-q", "oracle"),
    "dend-omega-q": ("explicit", "recursion"),
}


def compute_bundle(cfg: RunConfig) -> SeriesBundle:
    kind, n = cfg.target, cfg.order
    mode = cfg.mode or MODES.get(kind, ("recursion",))[0]
    start = time.perf_counter()
    if kind == "omega":
        build = lambda: SeriesBundle.from_series(kind, omega_classical(n).series)
    elif kind == "omega-q":
        fn = omega_q if mode == "recursion" else omega_q_via_forks
        build = lambda: SeriesBundle.from_series(kind, fn(n).series)
    elif kind == "omega-0":
        build = lambda: SeriesBundle.from_series(kind, specialize(omega_q(n), 0))
    elif kind == "omega-inf":
        build = lambda: SeriesBundle.from_series(kind, omega_infinity(n, mode))
    elif kind == "qlog":
        build = lambda: SeriesBundle.from_list(kind, extract_qlog(omega_q(n)), start=1)
    elif kind == "carlitz":
        values = (lambda: extract_carlitz(omega_q(n))) if mode == "omega-q" else (lambda: carlitz_oracle(n))
        build = lambda: SeriesBundle.from_list(kind, values(), start=0)
    else:
        if mode == "explicit":
            build = lambda: SeriesBundle.from_series(kind, omega_q_dend_explicit(n, jobs=cfg.jobs))
        else:
            build = lambda: SeriesBundle.from_series(kind, omega_q_dend_recursive(n))
    bundle = build()
    bundle.meta.update(version=VERSION, mode=mode, elapsed=round(time.perf_counter() - start, 6))
    return bundle


def _load_cache() -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    path = Path(root) / CACHE_FILE
    if path.exists():
        try:
            arith.load_memo_tables(json.loads(path.read_text()))
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache %s: %s", path, exc)
    return path


def _store_cache(path: Path | None) -> None:
    if path is None:
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(arith.memo_tables()))
        tmp.replace(path)
    except OSError as exc:
        log.warning("could not write cache %s: %s", path, exc)


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        output.write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omegaq", description="Exact rooted-tree series Omega and Omega_q.")
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--order", type=int, required=True)
        p.add_argument("--jobs", type=int, default=1, help="worker processes, 0 = one per CPU")
        p.add_argument("--output", type=Path)
        p.add_argument("--force-large", action="store_true")
        p.add_argument("--seed", type=int, default=0)

    comp = sub.add_parser("compute", help="compute a series")
    comp.add_argument("series", nargs="?", metavar="SERIES", help=", ".join(KINDS))
    comp.add_argument("--series", dest="series_flag", metavar="SERIES")
    comp.add_argument("--format", choices=("json", "text"), default="text")
    comp.add_argument("--mode")
    common(comp)

    ver = sub.add_parser("verify", help="run a named check")
    ver.add_argument("check", nargs="?", metavar="CHECK", help=", ".join(CHECK_NAMES))
    ver.add_argument("--check", dest="check_flag", metavar="CHECK")
    common(ver)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    if args.command == "compute":
        pos, flag = args.series, args.series_flag
    else:
        pos, flag = args.check, args.check_flag
    if pos and flag and pos != flag:
        raise UsageError(f"conflicting targets {pos!r} and {flag!r}")
    target = pos or flag
    if not target:
        raise UsageError(f"{args.command}: a target name is required")
    return RunConfig(
        command=args.command,
        target=target,
        order=args.order,
        fmt=getattr(args, "format", "text"),
        jobs=args.jobs,
        output=args.output,
        force_large=args.force_large,
        seed=args.seed,
        mode=getattr(args, "mode", None),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        cfg.validate()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"omegaq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    cache = _load_cache()
    if cfg.command == "compute":
        bundle = compute_bundle(cfg)
        _emit(to_json(bundle) if cfg.fmt == "json" else to_text(bundle), cfg.output)
        code = EXIT_OK
    else:
        result = run_check(cfg.target, CheckContext(order=cfg.order, seed=cfg.seed, jobs=cfg.jobs))
        _emit(result.format(), cfg.output)
        code = EXIT_OK if result.ok else EXIT_FAIL
    _store_cache(cache)
    return code


if __name__ == "__main__":
    sys.exit(main())
