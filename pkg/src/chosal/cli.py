"""Command line entry point: ``chosal run | eval | config``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .config import PipelineConfig
from .fusion import to_u8, write_raw
from .geometry import region_hull
from .image_core import load_image, save_gray
from .evaluation import eval_dataset
from .pipeline import run_pipeline

log = logging.getLogger("chosal")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2
PALETTE_SEED = 0


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


_FLAG_TYPES = {float: float, int: int, bool: _bool}


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file; flags override its values")
    defaults = PipelineConfig()
    for f in fields(PipelineConfig):
        flag = "--" + f.name.replace("_", "-")
        if f.name == "layer_counts":
            p.add_argument(flag, type=_int_list, metavar="N,N,...", help="region count per layer, coarse to fine")
        else:
            kind = type(getattr(defaults, f.name))
            p.add_argument(flag, type=_FLAG_TYPES[kind], metavar=kind.__name__.upper())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chosal", description="Convex-hull-overlap salient region detection")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute the saliency map of one image")
    run.add_argument("image", type=Path)
    run.add_argument("--out", type=Path, required=True, help="output grayscale PNG")
    run.add_argument("--raw", type=Path, help="also write float32 values in the raw map format")
    run.add_argument("--dump-layers", type=Path, metavar="DIR", help="write color-coded segmentation layers")
    run.add_argument("--dump-cues", type=Path, metavar="DIR", help="write the CHO and contrast cue maps")
    _add_config_flags(run)

    ev = sub.add_parser("eval", help="benchmark against ground-truth masks")
    ev.add_argument("--images", type=Path, required=True)
    ev.add_argument("--masks", type=Path, required=True)
    ev.add_argument("--report", type=Path, required=True, help="prefix for <prefix>.csv and <prefix>.json")
    ev.add_argument("--maps", type=Path, help="score precomputed saliency maps instead of running the pipeline")
    _add_config_flags(ev)

    cfg = sub.add_parser("config", help="print configuration")
    cfg.add_argument("--emit", action="store_true", help="print the effective configuration as JSON")
    _add_config_flags(cfg)
    return parser


def resolve_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_json_file(args.config) if args.config else PipelineConfig()
    overrides = {f.name: getattr(args, f.name) for f in fields(PipelineConfig)}
    return cfg.replace(**overrides)


def _palette(n: int) -> np.ndarray:
    return np.random.default_rng(PALETTE_SEED).integers(0, 256, (max(n, 1), 3), dtype=np.uint8)


def dump_layers(result, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    seg = result.segmentation
    height, width = seg.shape
    Image.fromarray(_palette(seg.n_regions)[seg.labels]).save(directory / "oversegmentation.png")
    lines = [f"base_regions {seg.n_regions}"]
    splits = result.hierarchy.splits
    previous = 1
    for i, layer in enumerate(result.hierarchy.layers, start=1):
        img = Image.fromarray(_palette(layer.n_regions)[layer.labels])
        draw = ImageDraw.Draw(img)
        for stats in layer.stats:
            hull = region_hull(stats.pixels, width)
            if not hull.degenerate:
                draw.polygon([tuple(v - 0.5) for v in hull.vertices], outline=(255, 255, 255))
        img.save(directory / f"layer_{i}.png")
        ncuts = [f"{v:.6g}" for count, v in splits if previous < count <= layer.n_regions]
        lines.append(f"layer {i} regions {layer.n_regions} ncuts {' '.join(ncuts) or '-'}")
        previous = layer.n_regions
    (directory / "layers.txt").write_text("\n".join(lines) + "\n")


def _cmd_run(args, cfg) -> int:
    result = run_pipeline(load_image(args.image), cfg)
    save_gray(to_u8(result.saliency), args.out)
    if args.raw:
        write_raw(result.saliency.astype(np.float32), args.raw)
    if args.dump_layers:
        dump_layers(result, args.dump_layers)
    if args.dump_cues:
        args.dump_cues.mkdir(parents=True, exist_ok=True)
        save_gray(to_u8(result.cho), args.dump_cues / "cho.png")
        save_gray(to_u8(result.gc), args.dump_cues / "gc.png")
    log.info("wrote %s", args.out)
    return EXIT_OK


def _cmd_eval(args, cfg) -> int:
    report = eval_dataset(args.images, args.masks, cfg, maps_dir=args.maps)
    csv_path, json_path = report.write(args.report)
    for skip in report.skipped:
        print(f"skipped {skip['image']}: {skip['reason']}", file=sys.stderr)
    if not report.rows:
        print("no images evaluated", file=sys.stderr)
        return EXIT_FAILURE
    print(f"corpus best F = {report.best_f:.4f} over {len(report.rows)} images ({csv_path}, {json_path})")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
    except (OSError, ValueError, TypeError) as exc:
        print(f"chosal: configuration error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "config":
            if not args.emit:
                parser.parse_args(["config", "--help"])
            print(cfg.to_json())
            return EXIT_OK
        if args.command == "run":
            return _cmd_run(args, cfg)
        return _cmd_eval(args, cfg)
    except SystemExit as exc:
        return int(exc.code or 0)
    except Exception as exc:
        print(f"chosal: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
