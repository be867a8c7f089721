import argparse
import logging
import sys
from pathlib import Path
import numpy as np

from gyrotop.checks import COMMANDS, applicable, certify_all, merged_tolerances, run_check
from gyrotop.diagnostics import completeness_family
from gyrotop.integrate import ConvergenceError, drift_report, simulate, write_drift_csv
from gyrotop.load import load_config, write_report
from gyrotop.models import ModelValidationError

logger = logging.getLogger(__name__)

COMMAND_NAMES = ["simulate", *COMMANDS, "certify-all"]


def parse_tolerance(text):
    """Reads one ``NAME=VALUE`` flag."""
    name, separator, value = text.partition("=")
    if not separator or not name:
        raise argparse.ArgumentTypeError(f"Tolerance '{text}' must have the form NAME=VALUE.")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Tolerance '{text}' needs a numeric value.")


def build_parser():
    parser = argparse.ArgumentParser(prog="gyrotop",
                                     description="Simulate and certify integrable rigid bodies with a gyroscope")
    parser.add_argument("command", choices=COMMAND_NAMES, help="what to run on the configured system")
    parser.add_argument("--config", required=True, help="path of the JSON run configuration")
    parser.add_argument("--out", default=".", help="directory for the CSV and JSON outputs")
    parser.add_argument("--seed", type=int, default=None, help="overrides the seed of the configuration")
    parser.add_argument("--tol", type=parse_tolerance, action="append", default=[], metavar="NAME=VALUE",
                        help="overrides one tolerance; repeatable")
    parser.add_argument("--quiet", action="store_true", help="only warnings on the log and no summary")
    return parser


def summarise(results):
    """Print one line per gated check."""
    for result in results:
        if result.gated:
            print("%s  %-48s %.3e" % ("PASS" if result.passed else "FAIL", result.name, result.max_residual))


def process(argv=None):
    """Set the command line arguments and run the command; exits with 0, 1, 2 or 3."""
    parser = build_parser()
    arguments = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if arguments.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        config = load_config(arguments.config)
    except ModelValidationError as error:
        print(f"gyrotop: {error}", file=sys.stderr)
        sys.exit(3)
    except (OSError, TypeError, KeyError, ValueError) as error:
        parser.error(error)
    if arguments.seed is not None:
        if arguments.seed < 0:
            parser.error("The seed must not be negative.")
        config.seed = arguments.seed
    try:
        tolerances = merged_tolerances(config.tolerances, dict(arguments.tol))
    except KeyError as error:
        parser.error(error)

    if arguments.command in COMMANDS and arguments.command not in applicable(config.spec):
        parser.error(f"{arguments.command} does not apply to {config.spec.family} n={config.spec.n}.")

    out = Path(arguments.out)
    out.mkdir(parents=True, exist_ok=True)
    if arguments.command == "simulate":
        try:
            run_simulation(config, out)
        except ConvergenceError as error:
            print(f"gyrotop: {error}", file=sys.stderr)
            sys.exit(1)
        sys.exit(0)
    if arguments.command == "certify-all":
        results = certify_all(config, tolerances, out)
    else:
        results = run_check(arguments.command, config, tolerances, out)

    write_report(out / "report.json", results)
    if not arguments.quiet:
        summarise(results)
    sys.exit(1 if any(result.passed is False for result in results) else 0)


def run_simulation(config, out):
    """Integrate the configured run and write ``trajectory.csv`` and ``drift.csv`` under ``out``."""
    x0 = config.initial_point(np.random.default_rng(config.seed))
    trajectory = simulate(config.integrator, config.spec, x0, config.dt, config.T)
    trajectory.to_csv(out / "trajectory.csv")
    write_drift_csv(drift_report(trajectory, completeness_family(config.spec)), out / "drift.csv")
    logger.info("wrote %s samples to %s", len(trajectory), out)
    return trajectory


if __name__ == "__main__":
    process()
