"""Command-line entry point: ``entrofuse {fuse,weights,synth,metrics}``.

Exit codes: 0 success, 1 usage error, 2 I/O or decode error,
3 dimension mismatch or rejected configuration.
"""

import argparse
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .clahe import ClaheParams
from .errors import ConfigError, FusionError, ImageFormatError
from .fileio import read_image, write_image
from .imagecore import luminance
from .metrics import report
from .pipeline import COLOR_MODES, FusionConfig, fuse_exposures, mean_fusion
from .pyramid import PyramidParams
from .synth import SCENES, SceneSpec, synth_stack

log = logging.getLogger("entrofuse")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_REJECTED = 0, 1, 2, 3

CONFIG_KEYS = ("alpha", "tiles", "clip_limit", "y_min", "n_bins", "window", "levels",
               "kernel_a", "color_mode", "clahe", "clamp_output")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_tiles(text):
    parts = text.lower().split("x")
    try:
        if len(parts) == 1:
            return int(parts[0]), int(parts[0])
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise ConfigError(f"tiles must look like RxC, got {text!r}")


def _parse_levels(text):
    if str(text).strip().lower() == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"levels must be an integer or 'auto', got {text!r}") from None


def _parse_bool(text):
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _as_float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {text!r}") from None


def _as_int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {text!r}") from None


def load_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment. Returns raw strings."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def build_config(values):
    """Turn a dict of (possibly string) settings into a validated FusionConfig."""
    clahe = ClaheParams()
    kw = {}
    if "tiles" in values:
        rows, cols = values["tiles"] if isinstance(values["tiles"], tuple) else _parse_tiles(values["tiles"])
        kw["tile_rows"], kw["tile_cols"] = rows, cols
    for key in ("alpha", "clip_limit", "y_min"):
        if key in values:
            kw[key] = _as_float(key, values[key])
    if "n_bins" in values:
        kw["n_bins"] = _as_int("n_bins", values["n_bins"])
    clahe = ClaheParams(**{**clahe.__dict__, **kw})

    pyramid = PyramidParams(
        _parse_levels(values.get("levels", "auto")),
        _as_float("kernel_a", values.get("kernel_a", 0.4)),
    )
    return FusionConfig(
        clahe=clahe,
        window=_as_int("window", values.get("window", 3)),
        pyramid=pyramid,
        color_mode=str(values.get("color_mode", "shared-weight-rgb")),
        clamp_output=_parse_bool(values.get("clamp_output", True)),
        enable_clahe=_parse_bool(values.get("clahe", True)),
    )


def _config_from_args(args):
    values = load_config_file(args.config) if args.config else {}
    overrides = {
        "alpha": args.alpha, "tiles": args.tiles, "clip_limit": args.clip_limit,
        "y_min": args.y_min, "window": args.window, "levels": args.levels,
        "kernel_a": args.kernel_a, "color_mode": args.color_mode,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if args.no_clahe:
        values["clahe"] = False
    return build_config(values)


def _read_stack(paths):
    images = [read_image(p) for p in paths]
    if any(im.ndim == 3 for im in images):
        images = [im if im.ndim == 3 else np.repeat(im[..., None], 3, axis=2) for im in images]
    return images


def _add_fusion_flags(p):
    g = p.add_argument_group("fusion parameters")
    g.add_argument("--alpha", type=float, help="Rayleigh scale (default 0.4)")
    g.add_argument("--tiles", help="CLAHE tile grid RxC (default 8x8)")
    g.add_argument("--clip-limit", type=float,
                   help="clip limit as a multiple of the uniform bin height; 'inf' disables")
    g.add_argument("--y-min", type=float, help="lower output bound of the mapping (default 0)")
    g.add_argument("--window", type=int, help="local entropy window, odd (default 3)")
    g.add_argument("--levels", help="pyramid levels, integer or 'auto'")
    g.add_argument("--kernel-a", type=float, help="generating kernel parameter (default 0.4)")
    g.add_argument("--color-mode", choices=COLOR_MODES)
    g.add_argument("--no-clahe", action="store_true", help="skip CLAHE preprocessing")
    g.add_argument("--config", help="key = value configuration file; flags override it")
    g.add_argument("--jobs", type=int, default=1, help="worker threads (output is identical)")


def make_parser():
    parser = _Parser(prog="entrofuse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("fuse", help="fuse an aligned exposure stack")
    p.add_argument("inputs", nargs="*")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--baseline", choices=("mean",), help="use a plain baseline instead")
    _add_fusion_flags(p)

    p = sub.add_parser("weights", help="write each normalized entropy weight map")
    p.add_argument("inputs", nargs="*")
    p.add_argument("-o", "--output", default=".", help="output directory")
    _add_fusion_flags(p)

    p = sub.add_parser("synth", help="render a synthetic bracketed stack")
    p.add_argument("--scene", choices=SCENES, default="horizontal-gradient")
    p.add_argument("--size", default="256x256", help="WxH")
    p.add_argument("--dr", type=float, default=1000.0, help="scene dynamic range")
    p.add_argument("--times", default="2e-5,1.6e-4,1.28e-3,1.024e-2",
                   help="comma-separated exposure times")
    p.add_argument("--gamma", type=float, default=2.2)
    p.add_argument("--format", choices=("pgm", "ppm"), default="pgm")
    p.add_argument("--prefix", default="exposure")
    p.add_argument("-o", "--output", default=".", help="output directory")

    p = sub.add_parser("metrics", help="print quality metrics per image")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--kv", action="store_true", help="also print key=value lines")
    return parser


def _cmd_fuse(args):
    if not args.inputs:
        raise UsageError("fuse needs at least one input image")
    config = _config_from_args(args)
    stack = _read_stack(args.inputs)
    if args.baseline == "mean":
        fused = mean_fusion(stack)
    else:
        fused = fuse_exposures(stack, config, workers=args.jobs)
    if fused.ndim == 3 and args.output.lower().endswith(".pgm"):
        fused = luminance(fused)
    write_image(fused, args.output)
    log.info("wrote %s", args.output)


def _cmd_weights(args):
    if not args.inputs:
        raise UsageError("weights needs at least one input image")
    config = _config_from_args(args)
    stack = _read_stack(args.inputs)
    _, weights = fuse_exposures(stack, config, workers=args.jobs, return_weights=True)
    os.makedirs(args.output, exist_ok=True)
    for path, w in zip(args.inputs, weights):
        stem = os.path.splitext(os.path.basename(path))[0]
        out = os.path.join(args.output, f"{stem}.weight.pgm")
        write_image(np.clip(w, 0.0, 1.0), out)
        log.info("wrote %s", out)


def _cmd_synth(args):
    try:
        width, height = (int(v) for v in args.size.lower().split("x"))
        times = [float(t) for t in args.times.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad --size {args.size!r} or --times {args.times!r}") from None
    if not times:
        raise UsageError("--times is empty")
    scene = SceneSpec(args.scene, width, height, args.dr)
    os.makedirs(args.output, exist_ok=True)
    digits = max(2, len(str(len(times) - 1)))
    for k, image in enumerate(synth_stack(scene, times, args.gamma)):
        if args.format == "ppm":
            image = np.repeat(image[..., None], 3, axis=2)
        out = os.path.join(args.output, f"{args.prefix}_{k:0{digits}d}.{args.format}")
        write_image(image, out)
        log.info("wrote %s", out)


def _cmd_metrics(args):
    rows = []
    for path in args.inputs:
        image = read_image(path)
        plane = luminance(image) if image.ndim == 3 else image
        rows.append((path, report(plane)))
    width = max(len(p) for p, _ in rows)
    print(f"{'file':<{width}}  {'entropy':>8}  {'saturated':>9}  {'avg_grad':>8}")
    for path, r in rows:
        print(f"{path:<{width}}  {r.global_entropy:8.4f}  {r.saturation_fraction:9.4f}  "
              f"{r.average_gradient:8.5f}")
    if args.kv:
        for path, r in rows:
            print(f"{path}.global_entropy={r.global_entropy!r}")
            print(f"{path}.saturation_fraction={r.saturation_fraction!r}")
            print(f"{path}.average_gradient={r.average_gradient!r}")


COMMANDS = {"fuse": _cmd_fuse, "weights": _cmd_weights, "synth": _cmd_synth,
            "metrics": _cmd_metrics}


def run_cli(argv=None):
    """Run one invocation and return its exit code."""
    try:
        args = make_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (fuse, weights, synth, metrics)")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                             format="%(name)s: %(message)s", stream=sys.stderr)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"entrofuse: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ImageFormatError) as exc:
        print(f"entrofuse: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FusionError as exc:
        print(f"entrofuse: rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
