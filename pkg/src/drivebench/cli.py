"""Command-line interface.

Exit codes: 0 success, 1 invalid input (manifest schema or validation
failures), 2 computation failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, fixture, manifest, pose, report
from .alignment import dtw_backend
from .config import load_config
from .model import ManifestError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILED = 2


def _parse_metrics(value: str | None) -> list[str] | None:
    if value is None:
        return None
    metrics = [m.strip() for m in value.split(",") if m.strip()]
    if not metrics:
        raise argparse.ArgumentTypeError("no metrics given")
    return metrics


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivebench",
        description="Deterministic metric engine for driving world-model video benchmarks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", required=True, type=Path, help="manifest JSON path")
    common.add_argument("--metrics", type=str, default=None, help="comma-separated metric ids (default: all applicable)")
    common.add_argument("--config", type=Path, default=None, help="key = value override file")
    common.add_argument("--seed", type=int, default=0, help="run seed (default 0)")

    p_validate = sub.add_parser("validate", parents=[common], help="pre-flight a manifest without computing")

    p_run = sub.add_parser("run", parents=[common], help="compute metrics and emit a report")
    p_run.add_argument("--out", required=True, type=Path, help="output directory")
    p_run.add_argument("--formats", type=str, default="json,markdown", help="comma-separated: json,markdown")
    p_run.add_argument("--workers", type=int, default=1, help="parallel metric workers (default 1)")
    p_run.add_argument(
        "--window-embeddings",
        type=Path,
        default=None,
        help="optional JSONL of externally computed per-window trajectory embeddings",
    )

    p_rank = sub.add_parser("rank", parents=[], help="print the leaderboard of an emitted report")
    p_rank.add_argument("--report", required=True, type=Path, help="report.json path")

    p_fix = sub.add_parser("make-fixture", help="write the synthetic benchmark fixture")
    p_fix.add_argument("--out", required=True, type=Path, help="output directory")
    p_fix.add_argument("--seed", type=int, default=7, help="fixture seed (default 7)")

    p_poses = sub.add_parser("complete-poses", help="finish a truncated pose track by constant-velocity extrapolation")
    p_poses.add_argument("--input", required=True, type=Path, help="pose JSONL (t/x/y/heading rows)")
    p_poses.add_argument("--out", required=True, type=Path, help="completed trajectory JSONL")
    p_poses.add_argument("--target-len", required=True, type=int, help="desired number of poses")
    p_poses.add_argument("--jitter-deg", type=float, default=0.5, help="heading jitter stddev in degrees (default 0.5)")
    p_poses.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    p_poses.add_argument("--video-id", type=str, default=None, help="derive the jitter seed from this id")
    return parser


def _cmd_validate(args) -> int:
    config = load_config(args.config)
    bundle = manifest.load_manifest_bundle(args.manifest, config=config, seed=args.seed)
    _, result = report.preflight(bundle, _parse_metrics(args.metrics), config)
    for issue in result.issues:
        print(issue, file=sys.stderr)
    if not result.ok:
        print(f"validation failed: {len(result.fatal)} fatal issue(s)", file=sys.stderr)
        return EXIT_INVALID
    print(f"validation clean: {len(bundle.records)} video(s), {len(bundle.models)} model(s)")
    return EXIT_OK


def _cmd_run(args) -> int:
    config = load_config(args.config)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    result = report.run(
        args.manifest,
        metrics=_parse_metrics(args.metrics),
        config=config,
        seed=args.seed,
        workers=args.workers,
        window_embeddings_path=args.window_embeddings,
    )
    written = report.emit(result, args.out, formats=formats)
    print(f"dtw backend: {dtw_backend()}", file=sys.stderr)
    for fmt, path in written.items():
        print(f"wrote {fmt}: {path}")
    return EXIT_OK


def _cmd_rank(args) -> int:
    loaded = report.load_report(args.report)
    print(report.render_markdown(loaded), end="")
    return EXIT_OK


def _cmd_make_fixture(args) -> int:
    paths = fixture.generate_fixture(args.out, seed=args.seed)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_OK


def _cmd_complete_poses(args) -> int:
    poses = manifest.read_poses(args.input)
    seed = pose.derive_seed(args.seed, args.video_id) if args.video_id else args.seed
    completed = pose.complete_trajectory(
        poses, args.target_len, jitter_deg=args.jitter_deg, seed=seed
    )
    manifest.write_jsonl(args.out, manifest.trajectory_rows(completed))
    print(f"wrote {args.out} ({len(completed)} poses, observed {len(poses)})")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "validate": _cmd_validate,
        "run": _cmd_run,
        "rank": _cmd_rank,
        "make-fixture": _cmd_make_fixture,
        "complete-poses": _cmd_complete_poses,
    }
    try:
        return handlers[args.command](args)
    except report.ValidationFailure as exc:
        for issue in exc.report.issues:
            print(issue, file=sys.stderr)
        print(f"validation failed: {len(exc.report.fatal)} fatal issue(s)", file=sys.stderr)
        return EXIT_INVALID
    except (ManifestError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except report.ComputationError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
