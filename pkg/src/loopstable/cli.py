"""Command-line entry point for the check catalog.

Selects checks, binds an algebra (built-in or from a definition file),
and emits a deterministic text or JSON report.  Exit codes: 0 all
selected checks passed (or were skipped / reported a search status),
1 at least one check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .algebras import BUILTIN_ALGEBRAS, FinAlgebra, parse_algebra_file
from .verifier import (
    ALIASES,
    CATALOG,
    CheckConfig,
    UnknownCheckError,
    run_suite,
)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="loopstable-verify",
        description="Replay the engine's identities and homotopy "
        "certificates exactly on deterministic samples.",
    )
    p.add_argument(
        "--check", action="append", default=None, metavar="ID",
        help="check id to run (repeatable); 'all' selects the whole catalog",
    )
    p.add_argument(
        "--algebra", default="builtin:dual", metavar="SRC",
        help="'builtin:<name>' (%s) or 'file:<path>' with an algebra "
        "definition file" % ", ".join(sorted(BUILTIN_ALGEBRAS)),
    )
    p.add_argument("--samples", type=int, default=20, metavar="N",
                   help="samples per check; 0 skips every check")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--max-degree", type=int, default=2, metavar="N",
                   help="degree cap for certificate search")
    p.add_argument("--j-depth", type=int, default=2, metavar="N",
                   help="kernel-tower depth cap")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--list", action="store_true",
                   help="list catalog ids and exit")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="worker threads; report order stays catalog order")
    return p


def _load_algebra(src: str) -> tuple:
    if ":" not in src:
        raise ValueError(
            f"algebra source {src!r} must be 'builtin:<name>' or 'file:<path>'"
        )
    kind, _, rest = src.partition(":")
    if kind == "builtin":
        if rest not in BUILTIN_ALGEBRAS:
            raise ValueError(
                f"unknown builtin algebra {rest!r}; available: "
                + ", ".join(sorted(BUILTIN_ALGEBRAS))
            )
        return rest, BUILTIN_ALGEBRAS[rest]()
    if kind == "file":
        with open(rest, "r", encoding="utf-8") as fh:
            alg = parse_algebra_file(fh.read())
        return alg.name, alg
    raise ValueError(f"unknown algebra source {kind!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.list:
        for cid, entry in CATALOG.items():
            print(f"{cid:28s} {entry.description}")
        for alias, target in sorted(ALIASES.items()):
            print(f"{alias:28s} (alias for {target})")
        return 0

    try:
        name, algebra = _load_algebra(args.algebra)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.samples < 0 or args.jobs < 1:
        print("error: --samples must be >= 0 and --jobs >= 1", file=sys.stderr)
        return 2

    cfg = CheckConfig(
        algebra_name=name,
        algebra=algebra,
        samples=args.samples,
        seed=args.seed,
        max_degree=args.max_degree,
        j_depth=args.j_depth,
    )
    checks = args.check if args.check else ["all"]
    try:
        report = run_suite(checks, cfg, jobs=args.jobs)
    except UnknownCheckError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
