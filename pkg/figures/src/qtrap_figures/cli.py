"""render_figure: regenerate a figure from simulator CSV tables.

Usage:
    render_figure --spec fig2a --data sweep.csv [more.csv ...] --out fig2a.png

The five figure ids are fig1 (Bloch spiral), fig2a / fig2b (trapped
population curves), fig3a (asymptotic discord) and fig3b (correlation time
series).  Exits nonzero with a column diagnostic when a table is empty or
lacks the columns the figure needs; no image is written in that case.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .figures import RENDERERS
from .io import TableError, read_table


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="render_figure", description=__doc__.splitlines()[0])
    parser.add_argument("--spec", required=True, choices=sorted(RENDERERS), help="figure id")
    parser.add_argument("--data", required=True, nargs="+", help="input CSV table(s)")
    parser.add_argument("--out", required=True, help="output image path (png/svg/pdf)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        tables = [read_table(path) for path in args.data]
        markers = RENDERERS[args.spec](tables, args.out)
    except TableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    summary = ", ".join(f"{k}={v}" for k, v in markers.items())
    print(f"{args.spec} -> {args.out} ({summary})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
