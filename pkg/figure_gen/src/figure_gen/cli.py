"""CLI: figure_gen <csv> --x {snr_db|n_s|n_antennas} --out <png/svg>."""

from __future__ import annotations

import argparse
import sys

from .plots import FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="figure_gen",
        description="Render average sum-rate figures from simulation CSV output.",
    )
    p.add_argument("csv", help="per-trial CSV produced by the tuckerhbf harness")
    p.add_argument("--x", required=True, choices=("snr_db", "n_s", "n_antennas"),
                   help="x-axis column")
    p.add_argument("--out", required=True, help="output image path (.png or .svg)")
    p.add_argument("--title", default=None, help="optional figure title")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(csv_path=args.csv, x_column=args.x, out_path=args.out, title=args.title)
    try:
        path = render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
