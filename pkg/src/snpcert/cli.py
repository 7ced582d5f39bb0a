"""Command-line entry point: ``snpcert --suite ybe --n 3 --format json``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import ConfigError, list_suites, load_config, run_suite


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="snpcert", description="Numerical certification of boundary integrability identities.")
    p.add_argument("--config", help="flat key=value file; CLI flags override it")
    p.add_argument("--suite")
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--regime", choices=("rational", "trigonometric", "both"))
    p.add_argument("--mu", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--kind")
    p.add_argument("--k-file", dest="k_file")
    p.add_argument("--format", choices=("text", "json"))
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for --suite all")
    p.add_argument("--list", action="store_true", help="list registered suites and exit")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.list:
        print(list_suites())
        return 0
    overrides = {k: getattr(args, k) for k in
                 ("suite", "n", "N", "regime", "mu", "seed", "samples", "tol", "kind", "k_file", "format")}
    try:
        cfg = load_config(args.config, **overrides)
        report = run_suite(cfg, jobs=max(1, args.jobs))
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = report.to_json() if cfg.format == "json" else report.to_text()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
