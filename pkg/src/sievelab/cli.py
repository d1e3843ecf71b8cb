"""Command-line entry point: ``sievelab <mode> [options]``.

Exit codes: 0 when every check passes, 1 when any inequality check fails,
2 on usage, configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .config import MODES, ConfigError, build_spec, load_config, parse_int
from .runner import run, write_csv


def int_list(text: str):
    return tuple(parse_int(s) for s in text.split(",") if s.strip())


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sievelab", description="Large sieve experiments over power moduli.")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--N", type=int_list, help="comma-separated N values, e.g. 2^8,2^10")
    p.add_argument("--Q", type=int_list, help="comma-separated Q (or Q0) values")
    p.add_argument("--k", type=int_list, help="comma-separated exponents k")
    p.add_argument("--eps", type=float, dest="epsilon")
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int, help="random sequences per generator")
    p.add_argument("--generator", type=lambda s: tuple(x.strip() for x in s.split(",") if x.strip()))
    p.add_argument("--M", type=int, help="index offset of the coefficient sequence")
    p.add_argument("--out", help="CSV output path (default: no CSV)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return int(exc.code or 0)
    overrides = {k: v for k, v in vars(args).items() if k not in ("mode", "config")}
    try:
        file_values = load_config(args.config) if args.config else {}
        spec = build_spec(args.mode, file_values, overrides)
        result = run(spec)
    except (ConfigError, ValueError) as exc:
        print(f"sievelab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"sievelab: I/O error: {exc}", file=sys.stderr)
        return 2
    if spec.out:
        try:
            write_csv(result, spec.out)
        except OSError as exc:
            print(f"sievelab: I/O error: {exc}", file=sys.stderr)
            return 2
    sys.stdout.write(result.summary_text())
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
