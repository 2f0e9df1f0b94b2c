"""Command line interface.

Stages share a working directory given by --out: `simulate` writes
frames.csv there, `detect` turns it into detections.csv, `localize`
into candidates.csv, `track` into tracks.csv plus map.svg.  `pipeline`
runs the whole chain in one go.  Exit codes: 0 success, 1 usage or
config error, 2 data error, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import fileio, plots
from .config import PipelineConfig, load_config
from .errors import ConfigError, DataError
from .pipeline import (
    run_pipeline,
    stage_detect,
    stage_localize,
    stage_simulate,
    stage_track,
)
from .selftest import run_selftest


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default; we want 1
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="biradar", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, scene=False, frames=False, tentative=False):
        p.add_argument("--config", metavar="PATH", help="key = value config file")
        p.add_argument("--out", metavar="DIR", default=".", help="output/working directory")
        p.add_argument("--seed", metavar="U64", type=int, help="override the config seed")
        if scene:
            p.add_argument("--scene", metavar="PATH", help="scene CSV (targets)")
        if frames:
            p.add_argument("--frames", metavar="PATH", help="frames file input")
        if tentative:
            p.add_argument(
                "--include-tentative",
                action="store_true",
                help="also write tentative track rows",
            )

    p = sub.add_parser("simulate", help="synthesize beat-signal frames from a scene")
    common(p, scene=True)

    p = sub.add_parser("detect", help="CFAR detection over a frames file")
    common(p, frames=True)

    p = sub.add_parser("localize", help="bilateration over detections.csv")
    common(p)

    p = sub.add_parser("track", help="multi-target tracking over candidates.csv")
    common(p, tentative=True)

    p = sub.add_parser("pipeline", help="full chain from a scene or frames file")
    common(p, scene=True, frames=True, tentative=True)
    p.add_argument(
        "--plot-profiles",
        metavar="FRAME",
        type=int,
        help="also render range-profile figures for the given frame index",
    )

    sub.add_parser("selftest", help="run the built-in invariant checks")
    return parser


def _load_config(args) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    return config


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this command")
    return value


def cmd_simulate(args) -> int:
    config = _load_config(args)
    targets = fileio.load_scene(_require(args.scene, "--scene"))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames = stage_simulate(config, targets)
    path = out_dir / "frames.csv"
    fileio.write_frames(frames, path)
    print(f"wrote {len(frames)} frame records to {path}")
    return 0


def cmd_detect(args) -> int:
    config = _load_config(args)
    out_dir = Path(args.out)
    frames_path = Path(args.frames) if args.frames else out_dir / "frames.csv"
    frames = fileio.read_frames(frames_path, config.radar)
    detections = stage_detect(frames, config)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "detections.csv"
    fileio.write_detections(detections, path)
    print(f"wrote {len(detections)} detections to {path}")
    return 0


def cmd_localize(args) -> int:
    config = _load_config(args)
    out_dir = Path(args.out)
    detections = fileio.read_detections(out_dir / "detections.csv")
    counters: dict = {}
    candidates = stage_localize(detections, config, counters=counters)
    path = out_dir / "candidates.csv"
    fileio.write_candidates(candidates, path)
    print(
        f"wrote {len(candidates)} candidates to {path} "
        f"(pairs {counters.get('pairs', 0)}, gated out {counters.get('gated_out', 0)}, "
        f"infeasible {counters.get('infeasible', 0)})"
    )
    return 0


def cmd_track(args) -> int:
    config = _load_config(args)
    out_dir = Path(args.out)
    candidates = fileio.read_candidates(out_dir / "candidates.csv")
    rows = stage_track(candidates, config, include_tentative=args.include_tentative)
    path = out_dir / "tracks.csv"
    fileio.write_tracks(rows, path)
    map_path = out_dir / "map.svg"
    plots.save_track_map(fileio.read_tracks(path), config.radar, config.geometry, map_path)
    confirmed = {s.track_id for _, s in rows if s.status == "confirmed"}
    print(f"wrote {len(rows)} track rows to {path} ({len(confirmed)} confirmed tracks)")
    print(f"wrote {map_path}")
    return 0


def cmd_pipeline(args) -> int:
    config = _load_config(args)
    if (args.scene is None) == (args.frames is None):
        raise UsageError("pipeline needs exactly one of --scene or --frames")
    outputs, stats = run_pipeline(
        config,
        args.out,
        scene_path=args.scene,
        frames_path=args.frames,
        include_tentative=args.include_tentative,
        profile_frame=args.plot_profiles,
    )
    print(
        f"frames {stats.frames}, detections {stats.detections}, "
        f"candidates {stats.candidates} "
        f"(pairs {stats.pairing.get('pairs', 0)}, "
        f"gated out {stats.pairing.get('gated_out', 0)}, "
        f"infeasible {stats.pairing.get('infeasible', 0)}), "
        f"confirmed tracks {stats.confirmed_tracks}"
    )
    for name in ("frames", "detections", "candidates", "tracks", "map"):
        if name in outputs:
            print(f"wrote {outputs[name]}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "selftest":
            return 0 if run_selftest() else 3
        handler = {
            "simulate": cmd_simulate,
            "detect": cmd_detect,
            "localize": cmd_localize,
            "track": cmd_track,
            "pipeline": cmd_pipeline,
        }[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
