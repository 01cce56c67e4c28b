"""Command line for the extractor.

    drivebench-extract --video PATH --outputs LIST --out DIR [--config PATH]

``--outputs`` is a comma-separated subset of the available outputs.
Exit codes: 0 every requested output produced, 1 invalid invocation,
2 one or more outputs failed (the failure is recorded per output in
``extraction.json`` and the remaining outputs are still produced).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .extract import OUTPUTS, ExtractorConfig, extract, parse_config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivebench-extract",
        description="Extract metric-engine artifact files from a video through per-output adapters.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--video", required=True, help="video to decode (directory of PGM frames)")
    parser.add_argument(
        "--outputs",
        required=True,
        help=f"comma-separated outputs to produce (available: {','.join(OUTPUTS)})",
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--config", help="key = value override file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = parse_config(args.config) if args.config else ExtractorConfig()
        outputs = [name.strip() for name in args.outputs.split(",") if name.strip()]
        result = extract(args.video, outputs, args.out, config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for name in outputs:
        if name in result.errors:
            print(f"{name}: ERROR {result.errors[name]}", file=sys.stderr)
        else:
            files = ", ".join(result.produced[name]) or "(recorded in manifest)"
            print(f"{name}: ok {files}", file=sys.stderr)
    if result.manifest_path is not None:
        print(result.manifest_path)
    return 2 if result.errors else 0


if __name__ == "__main__":
    sys.exit(main())
