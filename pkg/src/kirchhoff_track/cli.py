"""Command-line entry point: ``kirchhoff-track <subcommand> ...``.

Exit status is 0 on success, 2 for bad configuration or input files and 3
for numerical/domain failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from .errors import ConfigError, KirchhoffTrackError, NumericError
from .forward import validate_scene
from .geometry import build_disk_grid
from .io import (fmt, read_frames, write_comparison, write_frames, write_map_csv, write_map_pgm,
                 write_metrics, write_tracks)
from .oracle import StructureParams, compare_engine_oracle
from .scenario import default_scenario, default_scenario_dict, load_scenario, run_tracking, sweep_antennas

log = logging.getLogger("kirchhoff_track")


def _scenario(args):
    return load_scenario(args.scenario) if args.scenario else default_scenario()


def _frames(args, scenario):
    if args.frames:
        return read_frames(args.frames, n_antennas=scenario.array.n)
    return scenario.synthesize()


def cmd_simulate(args) -> None:
    sc = _scenario(args)
    report = validate_scene(sc.scene, sc.medium, sc.times, sc.grid.roi_radius_m)
    if not report.ok:
        log.warning("scene validation: %s", report)
    frames = sc.synthesize()
    write_frames(args.out, frames)
    log.info("wrote %d frames to %s", len(frames), args.out)


def cmd_image(args) -> None:
    sc = _scenario(args)
    frames = _frames(args, sc)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    imager = sc.imager()
    for i, fr in enumerate(frames):
        m = imager.map(fr)
        write_map_csv(out / f"map_{i:04d}.csv", m)
        if args.pgm:
            write_map_pgm(out / f"map_{i:04d}.pgm", m)
    log.info("imaged %d frames into %s", len(frames), out)


def cmd_track(args) -> None:
    sc = _scenario(args)
    frames = _frames(args, sc) if args.frames else None
    res = run_tracking(sc, frames, keep_maps=False)
    write_tracks(args.tracks, res.tracks)
    if args.metrics:
        write_metrics(args.metrics, res.metrics)
    log.info("%d tracks over %d frames", len(res.tracks), len(res.frames))


def cmd_oracle(args) -> None:
    sc = _scenario(args)
    if not sc.scene.scatterers:
        raise ConfigError("oracle comparison needs at least one scatterer")
    roi = sc.grid.roi_radius_m
    n = args.points_per_side
    if n < 2:
        raise ConfigError("--points-per-side must be at least 2")
    grid = build_disk_grid(roi, 2.0 * roi / (n - 1))
    k = sc.medium.wavenumber.value
    params = StructureParams.for_array(sc.array, k, roi, args.truncation)
    t = sc.times[0] if args.time is None else args.time
    report = compare_engine_oracle(sc.scene, sc.array, grid, t, params, sc.form)
    write_comparison(args.out, report)
    print(f"max_rel_err={fmt(report.max_rel_err)} points={len(report.points)} S_max={params.truncation_order}")


def cmd_sweep(args) -> None:
    sc = _scenario(args)
    n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
    if not n_list:
        raise ConfigError("--n-list is empty")
    rows = sweep_antennas(sc, n_list)
    lines = ["n_antennas,n_frames,mean_offtarget_fraction,max_offtarget_fraction"]
    lines += [f"{r.n_antennas},{r.n_frames},{fmt(r.mean_offtarget)},{fmt(r.max_offtarget)}" for r in rows]
    Path(args.out).write_text("\n".join(lines) + "\n")


def cmd_default_scenario(args) -> None:
    text = json.dumps(default_scenario_dict(), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kirchhoff-track",
                                description="Born-model frame synthesis, Kirchhoff imaging and tracking.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_scenario(sp):
        sp.add_argument("--scenario", help="scenario JSON (default: built-in 16-antenna water tank)")
        return sp

    sp = with_scenario(sub.add_parser("simulate", help="scenario -> frames CSV"))
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = with_scenario(sub.add_parser("image", help="frames -> heatmap CSV (and PGM) per frame"))
    sp.add_argument("--frames", help="frames CSV (default: synthesize from the scenario)")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--pgm", action="store_true", help="also write 8-bit PGM images")
    sp.set_defaults(func=cmd_image)

    sp = with_scenario(sub.add_parser("track", help="frames -> tracks CSV and per-frame metrics"))
    sp.add_argument("--frames")
    sp.add_argument("--tracks", required=True)
    sp.add_argument("--metrics")
    sp.set_defaults(func=cmd_track)

    sp = with_scenario(sub.add_parser("oracle", help="engine vs Bessel-series comparison report"))
    sp.add_argument("--out", required=True)
    sp.add_argument("--points-per-side", type=int, default=41)
    sp.add_argument("--truncation", type=int, default=None, help="series order S (default: certified)")
    sp.add_argument("--time", type=float, default=None)
    sp.set_defaults(func=cmd_oracle)

    sp = with_scenario(sub.add_parser("sweep", help="off-target energy fraction vs antenna count"))
    sp.add_argument("--n-list", default="8,12,16,24,32")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("default-scenario", help="print the built-in scenario JSON")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_default_scenario)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    logging.captureWarnings(True)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return NumericError.exit_code
    except KirchhoffTrackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
