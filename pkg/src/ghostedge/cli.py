"""Command-line entry point: ``ghostedge <command> [options]``.

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 numerical failure.
Output files are deterministic for identical flags; wall-clock timings are
only written into them when ``--timing`` is given.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .baseline import reconstruct_cgi
from .config import RunConfig
from .core import (
    DegenerateMatrixError,
    GhostImagingError,
    Image,
    MaskError,
    ParameterError,
    UndefinedSNRError,
    minmax_normalize,
)
from .experiments import load_object, run_sweep
from .formats import (
    ensure_parent,
    load_measurements,
    load_patterns,
    read_pgm,
    save_measurements,
    save_patterns,
    write_pgm,
    write_raster_pgm,
)
from .guided_filter import DEFAULT_EPSILON, DEFAULT_RADIUS, GuidedFilterParams
from .jigi import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    JigiConfig,
    PlirSettings,
    reconstruct_jigi,
    reconstruct_plir_only,
)
from .metrics import DEFAULT_EDGE_THRESHOLD, RegionMask, ground_truth_edge, mse, psnr, snr
from .phantoms import PHANTOMS, make_phantom
from .plir import DEFAULT_OMEGA, DEFAULT_RANK_CUTOFF
from .plotting import render_line_plot
from .sensing import DEFAULT_DENSITY, NoiseModel, generate_patterns, measure

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_NUMERICAL = 0, 2, 3, 4

# reconstruction flags that only apply to the iterative methods
_ITERATIVE_FLAGS = {
    "omega": DEFAULT_OMEGA,
    "rank_cutoff": DEFAULT_RANK_CUTOFF,
    "epsilon": DEFAULT_EPSILON,
    "radius": DEFAULT_RADIUS,
    "max_iters": DEFAULT_MAX_ITERATIONS,
    "tol": DEFAULT_TOLERANCE,
    "clamp": True,
}


def fmt4(value: float | None) -> str:
    """Fixed-point with four decimals; ``inf`` and ``null`` spelled out."""
    if value is None:
        return "null"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.4f}"


def _json_number(value: float | None):
    if value is None or math.isfinite(value):
        return value
    return fmt4(value)


def _write_json(path, payload: dict) -> None:
    ensure_parent(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def cmd_phantom(args) -> int:
    img = make_phantom(args.name, args.size)
    ensure_parent(args.out)
    write_pgm(args.out, img, args.bits)
    print(f"phantom {args.name}: {img.rows}x{img.cols} -> {args.out}")
    return EXIT_OK


def cmd_gen_patterns(args) -> int:
    stack = generate_patterns(args.rows, args.cols, args.M, args.density, args.seed)
    ensure_parent(args.out)
    save_patterns(args.out, stack)
    print(f"M={stack.count} rows={stack.rows} cols={stack.cols} density={args.density}")
    return EXIT_OK


def cmd_measure(args) -> int:
    patterns = load_patterns(args.patterns)
    obj = read_pgm(args.object)
    y = measure(patterns, obj, NoiseModel.gaussian(args.noise_sigma), args.seed)
    ensure_parent(args.out)
    save_measurements(args.out, y)
    print(f"M={len(y)} measurements -> {args.out}")
    return EXIT_OK


def _write_scaled(path, arr: np.ndarray) -> dict:
    lo, hi = float(arr.min()), float(arr.max())
    ensure_parent(path)
    write_pgm(path, minmax_normalize(arr), bits=16)
    return {"min": lo, "max": hi, "bits": 16}


def cmd_reconstruct(args) -> int:
    given = {k: getattr(args, k) for k in _ITERATIVE_FLAGS if getattr(args, k) is not None}
    effective = {k: given.get(k, d) for k, d in _ITERATIVE_FLAGS.items()}
    warnings = []
    if args.method == "cgi":
        for k in given:
            warnings.append(f"--{k.replace('_', '-')} does not apply to method cgi; ignored")
        if args.out_edge:
            warnings.append("method cgi produces no edge map; --out-edge ignored")
    for w in warnings:
        _warn(w)

    patterns = load_patterns(args.patterns)
    y = load_measurements(args.measurements)

    start = time.perf_counter()
    log: dict = {"method": args.method, "patterns": args.patterns, "measurements": args.measurements,
                 "M": patterns.count, "rows": patterns.rows, "cols": patterns.cols,
                 "warnings": warnings}
    if args.method == "cgi":
        image = reconstruct_cgi(patterns, y).pixels
        edge = None
        log["parameters"] = {}
    else:
        cfg = JigiConfig(
            max_iterations=effective["max_iters"],
            tolerance=effective["tol"],
            plir=PlirSettings(effective["omega"], effective["rank_cutoff"], effective["clamp"]),
            filter=GuidedFilterParams(effective["radius"], effective["epsilon"]),
        )
        run = reconstruct_jigi if args.method == "jigi" else reconstruct_plir_only
        result = run(patterns, y, cfg)
        image, edge = result.image.pixels, result.edge.coefficients
        log["parameters"] = effective
        log.update(iterations=result.iterations_run, converged=result.converged,
                   stop_reason=result.stop_reason, residual_history=list(result.residual_history))
    elapsed = time.perf_counter() - start

    log["image_scale"] = _write_scaled(args.out_image, image)
    if edge is not None and args.out_edge:
        log["edge_scale"] = _write_scaled(args.out_edge, edge)
    if args.timing:
        log["wall_time_s"] = elapsed
    if args.out_log:
        _write_json(args.out_log, log)

    summary = f"method={args.method} M={patterns.count}"
    if "iterations" in log:
        summary += f" iterations={log['iterations']} stop={log['stop_reason']}"
    print(f"{summary} time={elapsed:.3f}s")
    return EXIT_OK


def cmd_metrics(args) -> int:
    reference = read_pgm(args.reference)
    candidate = read_pgm(args.candidate)
    if args.mask_source == "sobel":
        mask, edge_truth = ground_truth_edge(reference, args.threshold)
    else:
        edge_truth = read_pgm(args.mask_source)
        mask = RegionMask.from_edge_image(edge_truth)
    target = edge_truth if args.target == "edge" else reference

    report: dict = {"reference": args.reference, "candidate": args.candidate,
                    "target": args.target, "mask_source": args.mask_source,
                    "threshold": args.threshold, "max_val": args.max_val}
    report["mse"] = mse(target, candidate)
    psnr_value = psnr(target, candidate, args.max_val)
    report["psnr"] = _json_number(psnr_value)
    try:
        snr_value = snr(candidate, mask)
        report["snr"] = snr_value
        report["snr_note"] = None
    except UndefinedSNRError as exc:
        snr_value = None
        report["snr"] = None
        report["snr_note"] = str(exc)

    print(f"SNR: {fmt4(snr_value)}")
    print(f"PSNR: {fmt4(psnr_value)}")
    if args.out:
        _write_json(args.out, report)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = RunConfig.from_toml(args.config) if args.config else RunConfig()
    if args.phantom:
        cfg.phantom = args.phantom
    out_dir = args.out_dir or cfg.out_dir
    if not out_dir:
        raise ParameterError("an output directory is required (--out-dir or out_dir in config)")
    obj = load_object(cfg.phantom, cfg.size)
    os.makedirs(out_dir, exist_ok=True)

    points = run_sweep(obj, cfg)
    lines = ["M\timage_psnr\tedge_psnr\tedge_snr\titerations\tseconds\tstatus"]
    for p in points:
        seconds = fmt4(p.seconds) if args.timing and p.error is None else "-"
        status = "ok" if p.error is None else p.error.replace("\t", " ")
        lines.append("\t".join([str(p.m), fmt4(p.image_psnr), fmt4(p.edge_psnr), fmt4(p.edge_snr),
                                str(p.iterations), seconds, status]))
        if p.result is not None:
            point_dir = os.path.join(out_dir, f"M{p.m:05d}")
            _write_scaled(os.path.join(point_dir, "image.pgm"), p.result.image.pixels)
            _write_scaled(os.path.join(point_dir, "edge.pgm"), p.result.edge.coefficients)
        print(lines[-1])
    with open(os.path.join(out_dir, "summary.tsv"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

    raster = render_line_plot([p.m for p in points],
                              [[p.image_psnr for p in points], [p.edge_psnr for p in points]])
    write_raster_pgm(os.path.join(out_dir, "psnr_vs_m.pgm"), raster)
    _write_json(os.path.join(out_dir, "config.json"), cfg.to_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghostedge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="write a built-in test object as PGM")
    p.add_argument("--name", choices=sorted(PHANTOMS), default="aircraft")
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--bits", type=int, choices=(8, 16), default=16)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("gen-patterns", help="generate random binary speckle patterns (GIPT)")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--density", type=float, default=DEFAULT_DENSITY)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_patterns)

    p = sub.add_parser("measure", help="simulate bucket measurements (GIMS)")
    p.add_argument("--patterns", required=True)
    p.add_argument("--object", required=True)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("reconstruct", help="reconstruct image and edge map")
    p.add_argument("--method", choices=("cgi", "plir", "jigi"), default="jigi")
    p.add_argument("--patterns", required=True)
    p.add_argument("--measurements", required=True)
    p.add_argument("--omega", type=float)
    p.add_argument("--rank-cutoff", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--radius", type=int)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--clamp", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--out-image", required=True)
    p.add_argument("--out-edge")
    p.add_argument("--out-log")
    p.add_argument("--timing", action="store_true", help="record wall time in the log")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("metrics", help="SNR and PSNR of a candidate against a reference")
    p.add_argument("--reference", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--target", choices=("image", "edge"), default="image",
                   help="compare against the reference itself or its ground-truth edge image")
    p.add_argument("--mask-source", default="sobel",
                   help="'sobel' or path to a binary edge PGM")
    p.add_argument("--threshold", type=float, default=DEFAULT_EDGE_THRESHOLD)
    p.add_argument("--max-val", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("sweep", help="reconstruct and score over several measurement counts")
    p.add_argument("--config")
    p.add_argument("--phantom")
    p.add_argument("--out-dir")
    p.add_argument("--timing", action="store_true", help="record wall times in the table")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DegenerateMatrixError, UndefinedSNRError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParameterError, MaskError, GhostImagingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
