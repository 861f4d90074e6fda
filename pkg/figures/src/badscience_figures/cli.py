"""Command line front end: `badscience-figures comparison|gap`."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .render import DEFAULT_CURVES, FigureSpec, render_comparison, render_gap


def _parse(argv: Sequence[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="badscience-figures",
        description="Render figures from a `badscience sweep` CSV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("comparison", "beta versus n per construction, with reference curves"),
        ("gap", "difference between the two constructions, with stderr band"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="sweep CSV path")
        p.add_argument("--output", required=True, help="image path (.png recommended)")
        p.add_argument(
            "--curves",
            default=",".join(DEFAULT_CURVES),
            help="comma-separated reference columns (default: %(default)s)",
        )
        p.add_argument("--log-x", action="store_true", help="log-scale the n axis")
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parse(sys.argv[1:] if argv is None else argv)
    curves: List[str] = [c.strip() for c in args.curves.split(",") if c.strip()]
    spec = FigureSpec(
        input_csv=Path(args.input),
        output_image=Path(args.output),
        curves=curves,
        log_x=args.log_x,
    )
    if args.command == "comparison":
        return render_comparison(spec)
    return render_gap(spec)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
