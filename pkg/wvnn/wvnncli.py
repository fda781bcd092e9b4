import argparse
import json
import logging
import sys
from typing import Dict, List, Optional

import numpy as np

from wvnn import wvnnhelp, wvnnverify
from wvnn.wvnncontour import boundary_curves
from wvnn.wvnnerrors import (
    DegenerateInputError,
    GridOverflowError,
    NearOrthogonalPostselectionError,
    UsageError,
    WVNNError,
)
from wvnn.wvnnmeter import MeterConfig, ProtocolConfig, ladder_records
from wvnn.wvnnpresets import RunConfig, build_table, list_presets
from wvnn.wvnnsettings import get_log_level, settings
from wvnn.wvnnstates import observable_from_spec, parse_angle, state_from_angles
from wvnn.wvnnsweep import summarize
from wvnn.wvnntable import SweepTable, list_table_files_from_path, save_curves_to_json, save_table
from wvnn.wvnnweak import VARIANTS, analyze, build_weak_operator, eigenstructure

logger = logging.getLogger(__name__)
logger.setLevel(get_log_level())

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_VERIFY_FAILED = 3

DEFAULT_LADDER = "1e-2, 5e-3, 2.5e-3"
SWEEP_OVERRIDES = ("observable", "theta_i", "theta_f", "xi_i", "xi_f", "phi", "steps", "sweep_id", "levels")


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except UsageError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_state_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--obs", required=True, help="pauli:x, gellmann:5, bloch:THETA,PHI, sum:x+y+z or matrix:PATH")
    parser.add_argument("--theta-i", type=_angle, required=True, help="polar angle of the pre-selected state")
    parser.add_argument("--theta-f", type=_angle, required=True, help="polar angle of the post-selected state")
    parser.add_argument("--xi-i", type=_angle, default=0.0, help="phase of the pre-selected state (default 0)")
    parser.add_argument("--xi-f", type=_angle, default=0.0, help="phase of the post-selected state (default 0)")
    for suffix in ("i", "f"):
        for name in ("alpha", "chi1", "chi2"):
            parser.add_argument(f"--{name}-{suffix}", type=_angle, default=0.0, help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wvnn",
        description="Weak values as expectation values of non-normal operators.",
        epilog=f"{wvnnhelp.EXIT_CODES}\n\n{wvnnhelp.CONFIG_FILES}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR or CRITICAL")
    parser.add_argument("--threads", type=int, help="worker cap for sweeps, 0 = one per CPU")
    parser.add_argument("--overlap-floor", type=float, help="smallest accepted |<psi_f|psi_i>|^2")
    parser.add_argument("--classify-tol", type=float, help="tolerance of the weak value classification")
    commands = parser.add_subparsers(dest="command", required=True)

    weak_value = commands.add_parser(
        "weak-value", description=wvnnhelp.WEAK_VALUE, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    _add_state_arguments(weak_value)
    weak_value.add_argument("--eigen", action="store_true", help="add the eigenstructure of both weak operators")

    sweep = commands.add_parser(
        "sweep",
        description="\n".join(
            [
                wvnnhelp.SWEEP,
                wvnnhelp.STATE_GRID,
                wvnnhelp.OBSERVABLE_SWEEP,
                wvnnhelp.EIGEN_SWEEP,
                wvnnhelp.FAMILY_SWEEP,
                wvnnhelp.PHASE_CURVE,
            ]
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    source = sweep.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", help=f"one of {', '.join(list_presets()) or 'the shipped presets'}")
    source.add_argument("--config", help="path of a key = value config file")
    source.add_argument("--list", action="store_true", help="list the tables and curve files already in the output folder")
    for key in SWEEP_OVERRIDES:
        sweep.add_argument(f"--{key.replace('_', '-')}", dest=key, help=f"override '{key}' of the config")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.add_argument("--out", help="output folder (default WVNN_DATA_DIR or 'data')")

    meter = commands.add_parser("meter", description=wvnnhelp.METER, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_state_arguments(meter)
    meter.add_argument("--gamma", default=DEFAULT_LADDER, help=f"strictly decreasing coupling ladder (default {DEFAULT_LADDER})")
    meter.add_argument("--grid-points", type=int, default=1024)
    meter.add_argument("--x-extent", type=float, default=20.0)
    meter.add_argument("--sigma-x", type=float, default=1.0)
    meter.add_argument("--coupling-sign", type=int, choices=(-1, 1), default=-1)

    verify = commands.add_parser("verify", description=wvnnhelp.VERIFY, formatter_class=argparse.RawDescriptionHelpFormatter)
    verify.add_argument("--seed", type=int, default=wvnnverify.DEFAULT_SEED)
    verify.add_argument("--scale", type=float, default=1.0, help="multiplies all sample counts")
    verify.add_argument("--only", action="append", help="run only this check, may be repeated")
    verify.add_argument(
        "--inject-fault",
        nargs="?",
        const="route_equivalence",
        help="make the named check fail, for testing the exit code",
    )
    verify.add_argument("--report", choices=("text", "json"), default="text")
    return parser


def _apply_settings(args):
    if args.log_level:
        settings.set_log_level(args.log_level)
    if args.threads is not None:
        settings.set_threads(args.threads)
    try:
        if args.overlap_floor is not None:
            settings.set_overlap_floor(args.overlap_floor)
        if args.classify_tol is not None:
            settings.set_classify_tol(args.classify_tol)
    except ValueError as e:
        raise UsageError(str(e))


def _states(args, dim: int):
    extra_i = {"alpha": args.alpha_i, "chi1": args.chi1_i, "chi2": args.chi2_i}
    extra_f = {"alpha": args.alpha_f, "chi1": args.chi1_f, "chi2": args.chi2_f}
    return (
        state_from_angles(args.theta_i, args.xi_i, extra_i, dim),
        state_from_angles(args.theta_f, args.xi_f, extra_f, dim),
    )


def _print_json(data):
    print(json.dumps(data, indent=2, sort_keys=False))


def cmd_weak_value(args) -> int:
    o = observable_from_spec(args.obs)
    psi_i, psi_f = _states(args, o.dim)
    report = analyze(o, psi_i, psi_f)
    data = {"observable": o.name}
    data.update(report.to_dict())
    if args.eigen:
        data["eigenstructure"] = {
            variant: eigenstructure(build_weak_operator(o, psi_i, psi_f, variant)).to_dict() for variant in VARIANTS
        }
    _print_json(data)
    return EXIT_OK


def _sweep_summary(t: SweepTable, path: str) -> Dict:
    summary = {"file": path, "sweep_id": t.sweep_id, "observable": t.observable, "shape": list(t.shape)}
    if "wv_abs" in t.fields:
        summary.update(summarize(t))
    return summary


def cmd_sweep(args) -> int:
    if args.list:
        _print_json([tf.to_dict() for tf in list_table_files_from_path(args.out or settings.data_dir())])
        return EXIT_OK
    base = RunConfig.from_preset(args.preset) if args.preset else RunConfig.from_file(args.config)
    base = base.merged({key: getattr(args, key) for key in SWEEP_OVERRIDES})
    summaries = []
    for config in base.expand_runs():
        t = build_table(config)
        path = save_table(t, args.format, args.out)
        summary = _sweep_summary(t, path)
        if config.kind == "state-grid":
            scale = float(np.nanmax(np.abs(t.meta["spectrum"])))
            curves = {str(level): boundary_curves(t, level * scale) for level in config.levels()}
            summary["boundary_curves"] = {level: len(c) for level, c in curves.items()}
            summary["curves_file"] = save_curves_to_json(
                t, {level: [c.to_dict() for c in found] for level, found in curves.items()}, args.out
            )
        summaries.append(summary)
    _print_json(summaries)
    return EXIT_OK


def _ladder(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"Cannot parse gamma ladder {text!r}")


def cmd_meter(args) -> int:
    o = observable_from_spec(args.obs)
    psi_i, psi_f = _states(args, o.dim)
    ladder = _ladder(args.gamma)
    if not ladder:
        raise UsageError("The gamma ladder is empty")
    meter = MeterConfig(args.grid_points, args.x_extent, args.sigma_x)
    c = ProtocolConfig(o, psi_i, psi_f, ladder[0], meter, args.coupling_sign)
    _print_json(ladder_records(c, ladder))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = wvnnverify.run_checks(args.seed, args.scale, args.only, args.inject_fault)
    if args.report == "json":
        _print_json(report.to_dict())
    else:
        print(report.to_text())
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


COMMANDS = {
    "weak-value": cmd_weak_value,
    "sweep": cmd_sweep,
    "meter": cmd_meter,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage, which is taken by degenerate input here
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        _apply_settings(args)
        return COMMANDS[args.command](args)
    except (NearOrthogonalPostselectionError, DegenerateInputError, GridOverflowError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_DEGENERATE
    except WVNNError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except OSError:
        logger.exception(f"{args.command}: cannot write results")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
