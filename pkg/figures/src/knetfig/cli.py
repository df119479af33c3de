"""knet-render: draw one figure from a pipeline artifact.

Usage: knet-render <kind> <input> <output> [--seed S] [--backbone PATH]
"""
from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt

from .artifacts import ArtifactError
from .render import KINDS, FigureJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knet-render", description="Render a knet artifact to SVG or PNG."
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("input", help="artifact path (JSON, or CSV for proportions)")
    parser.add_argument("output", help="output image path (.svg or .png)")
    parser.add_argument("--seed", type=int, default=0, help="layout seed")
    parser.add_argument(
        "--backbone",
        help="backbone DOT path for the network kind (default: sibling backbone.dot)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = FigureJob(
            kind=args.kind, input=args.input, output=args.output,
            seed=args.seed, backbone=args.backbone,
        )
        result = render(job)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    plt.close(result.figure)
    return 0


if __name__ == "__main__":
    sys.exit(main())
