"""Command-line interface: verification, grid exports, plots, reports.

Subcommands: verify (property suites, JSON report), classify-grid (CSV
of one slice), slice-plot (SVG of one slice), decompose (JSON report of
a surface decomposition).  Options resolve as CLI flag over config-file
entry over built-in default.  Exit codes: 0 success, 1 suite failure,
2 usage or configuration error.
"""

import argparse
import json
import sys
from dataclasses import dataclass, fields

from . import gridplot, smoothing, surfaces, verify
from .flow import FlowSettings
from .geometry import SteinParams


@dataclass
class RunConfig:
    """Resolved options shared by every subcommand."""

    epsilon: float = 16.0
    alpha: float = 1.5
    band_tol: float = None
    grid: int = 201
    seed: int = 0
    max_time: float = 60.0
    escape_radius: float = None
    out: str = None
    smoothing: str = "pure"
    surface: str = None
    slice: str = "im:0"
    sample_scale: float = 1.0
    box: float = None


class ConfigError(ValueError):
    """Invalid option combination; maps to exit code 2."""


def _validate(config):
    if not config.alpha > 1.0:
        raise ConfigError(
            "alpha=%g is not allowed: the saddle model requires alpha > 1 "
            "(the unstable rate alpha-1 must be positive)" % config.alpha
        )
    if not config.epsilon > 0.0:
        raise ConfigError("epsilon must be positive")
    if config.smoothing not in ("pure", "cutoff"):
        raise ConfigError("smoothing must be 'pure' or 'cutoff'")
    if config.grid < 1:
        raise ConfigError("grid must be at least 1")
    if not config.sample_scale > 0.0:
        raise ConfigError("sample-scale must be positive")
    if not config.max_time > 0.0:
        raise ConfigError("max-time must be positive")
    if config.escape_radius is not None and not config.escape_radius > 0.0:
        raise ConfigError("escape-radius must be positive")
    if config.band_tol is not None and config.band_tol < 0.0:
        raise ConfigError("band-tol must be nonnegative")


def resolve_config(args):
    """RunConfig from defaults, then config file, then CLI flags."""
    config = RunConfig()
    names = {f.name for f in fields(RunConfig)}
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in data.items():
            name = key.replace("-", "_")
            if name not in names:
                raise ConfigError(f"unknown config key {key!r}")
            setattr(config, name, value)
    for name in names:
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    _validate(config)
    return config


def _write_out(config, text):
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _stein(config):
    return SteinParams(
        alpha=config.alpha, epsilon=config.epsilon, smoothing=config.smoothing
    )


def _settings(config):
    return FlowSettings(
        max_time=config.max_time, escape_radius=config.escape_radius
    )


def cmd_verify(config):
    vconf = verify.VerifyConfig(
        seed=config.seed,
        sample_scale=config.sample_scale,
        epsilon=config.epsilon,
        alpha=config.alpha,
        smoothing=config.smoothing,
    )
    report = verify.run_all(vconf)
    _write_out(config, verify.report_json(report))
    return 0 if report["passed"] else 1


def _grid_result(config):
    spec = gridplot.parse_slice(config.slice)
    return gridplot.classify_grid(
        spec,
        _stein(config),
        _settings(config),
        grid_n=config.grid,
        box=config.box,
        band_tol=config.band_tol,
    )


def cmd_classify_grid(config):
    _write_out(config, gridplot.grid_csv(_grid_result(config)))
    return 0


def cmd_slice_plot(config):
    text = gridplot.grid_svg(_grid_result(config))
    out = config.out or "slice.svg"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)
    return 0


def cmd_decompose(config):
    if not config.surface:
        raise ConfigError("decompose needs --surface <file or builtin name>")
    try:
        surf = surfaces.load_surface(config.surface)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"cannot load surface: {exc}") from exc
    violations = [
        v for v in surfaces.validate(surf) if v["severity"] == surfaces.SEV_ERROR
    ]
    if violations:
        sys.stderr.write(json.dumps({"violations": violations}, sort_keys=True,
                                    indent=2) + "\n")
        return 2
    report = surfaces.enumerate_decomposition(surf).to_report()
    _write_out(config, json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0


_COMMANDS = {
    "verify": cmd_verify,
    "classify-grid": cmd_classify_grid,
    "slice-plot": cmd_slice_plot,
    "decompose": cmd_decompose,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=float, help="smoothing scale (> 0)")
    common.add_argument("--alpha", type=float, help="saddle exponent (> 1)")
    common.add_argument("--band-tol", dest="band_tol", type=float,
                        help="hypersurface band half-width for labels")
    common.add_argument("--grid", type=int, help="grid resolution per axis")
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--max-time", dest="max_time", type=float,
                        help="flow integration time limit")
    common.add_argument("--escape-radius", dest="escape_radius", type=float,
                        help="escape detection radius")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--smoothing", choices=("pure", "cutoff"),
                        help="smoothing profile")
    common.add_argument("--surface", help="surface JSON file or builtin name "
                        "(example-5.3, p1-minus-4pts)")
    common.add_argument("--config", help="JSON file with option defaults")
    common.add_argument("--slice", help="drawing plane, e.g. im:0 or z1:-40")
    common.add_argument("--sample-scale", dest="sample_scale", type=float,
                        help="multiplier on suite sample counts")
    common.add_argument("--box", type=float, help="half-width of the grid box")

    parser = argparse.ArgumentParser(
        prog="symsector",
        description="Sectorial decompositions of the symmetric square: "
        "numerical model and combinatorial enumeration.",
    )
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("verify", parents=[common],
                   help="run every property suite and emit a JSON report")
    sub.add_parser("classify-grid", parents=[common],
                   help="classify one slice and emit CSV")
    sub.add_parser("slice-plot", parents=[common],
                   help="classify one slice and write an SVG figure")
    sub.add_parser("decompose", parents=[common],
                   help="enumerate the decomposition of a glued surface")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    try:
        config = resolve_config(args)
        return _COMMANDS[args.command](config)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except smoothing.SmoothingError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
