"""
Command-line entry point.

    sawhorizon pipeline --config run.ini --out results/
    sawhorizon sweep --config sweep.ini --jobs 4
    sawhorizon horizon --set material.K2=1e-3 --set observer.v=1000.01

Exit status: 0 success, 1 model/runtime error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import OUTPUT_ENV, ConfigError, load_config
from .pipeline import (
    Outputs,
    PipelineError,
    run_density,
    run_horizon,
    run_pipeline,
    run_rays,
    run_speed,
    run_thermo,
    run_wave,
    sweep,
)

SUBCOMMANDS = ("density", "speed", "horizon", "wave", "rays", "thermo", "pipeline", "sweep")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sawhorizon",
        description="SAW acoustic-horizon simulator",
        epilog=f"Default output directory: ${OUTPUT_ENV} or ./sawhorizon_out",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", type=Path, help="INI config file")
    common.add_argument("--preset", default="gaas", help="base parameter set (default: gaas)")
    common.add_argument(
        "-s", "--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
        help="override a config scalar; repeatable",
    )
    common.add_argument("-o", "--out", type=Path, help="output directory")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("density", parents=[common], help="2DEG density profile")
    sub.add_parser("speed", parents=[common], help="SAW speed profiles (fixed point and piecewise)")
    sub.add_parser("horizon", parents=[common], help="horizons, surface gravity, Hawking temperature")
    sub.add_parser("wave", parents=[common], help="lab-frame wave-equation run")
    sub.add_parser("rays", parents=[common], help="comoving-frame characteristics")
    p = sub.add_parser("thermo", parents=[common], help="spin thermometer report")
    p.add_argument("--temperature", type=float, help="bath temperature in K (default: computed T_H)")
    sub.add_parser("pipeline", parents=[common], help="all stages plus manifest")
    p = sub.add_parser("sweep", parents=[common], help="pipeline over [sweep] values")
    p.add_argument("-j", "--jobs", type=int, default=1, help="concurrent runs")
    return parser


def _outputs(cfg, args) -> Outputs:
    directory = args.out or cfg.output_dir()
    try:
        out = Outputs.for_config(cfg, directory)
    except OSError as exc:
        raise ConfigError("output.directory", str(exc)) from exc
    if not os.access(out.directory, os.W_OK):
        raise ConfigError("output.directory", f"{out.directory} is not writable")
    return out


def _dispatch(args) -> int:
    cfg = load_config(args.config, args.overrides, args.preset)
    cmd = args.command
    if cmd == "sweep":
        if cfg.sweep is None:
            raise ConfigError("sweep", "config has no [sweep] section")
        root = _outputs(cfg, args).directory
        summary = sweep(cfg, root, jobs=max(1, args.jobs))
        print(summary)
        return 0
    out = _outputs(cfg, args)
    if cmd == "pipeline":
        manifest = run_pipeline(cfg, out.directory)
        for art in manifest["artifacts"]:
            print(out.directory / art["file"])
        print(out.directory / "manifest.json")
        return 0
    profile, _ = run_density(cfg, out if cmd == "density" else None)
    if cmd != "density":
        fp, pw, _ = run_speed(cfg, profile, out if cmd == "speed" else None)
        if cmd in ("horizon", "rays", "thermo"):
            reports = run_horizon(cfg, fp, pw, out if cmd == "horizon" else None)
        if cmd == "wave":
            run_wave(cfg, fp, out)
        elif cmd == "rays":
            run_rays(cfg, {"fixed_point": fp, "piecewise": pw}, reports, out)
        elif cmd == "thermo":
            T = args.temperature
            if T is None:
                hs = reports["piecewise"].horizons
                T = hs[0].T_H if hs else None
            run_thermo(cfg, T, out)
    for p in out.files:
        print(p)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PipelineError as exc:
        print(f"error in {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
