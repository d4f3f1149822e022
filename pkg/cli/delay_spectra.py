"""Command-line entry point.

Usage (from the repository root):
    python -m cli.delay_spectra <eig|converge|compare|oracle|check> (--config FILE | --problem NAME)
                                [--out DIR] [--seed U64] [--verbose] [--gnuplot]

Artifacts go to DIR (default: the document's ``run.out``, else ``out``),
together with a ``report.json`` of run metrics. The exit status is 0 on
success, 2 for configuration and parse errors, 3 for numerical failures and
4 when ``check`` finds a violated invariant.
"""

import argparse
import logging
import sys
from pathlib import Path

from cli.catalog import load_problem, problem_names
from cli.commands import COMMANDS, run
from cli.config import parse_config
from cli.metrics import RunMetrics
from cli.report import write_report
from common.errors import ConfigError, DelaySpectraError
from common.log import configure_logging

logger = logging.getLogger(__name__)

DEFAULT_OUT = "out"
MAX_SEED = 2 ** 64 - 1


def _seed(text):
    value = int(text)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="delay-spectra")
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=str, help="Run document (JSON)")
    source.add_argument("--problem", type=str, help=f"Built-in problem: {', '.join(problem_names())}")
    parser.add_argument("--out", type=str, default=None, help="Output directory")
    parser.add_argument("--seed", type=_seed, default=0, help="Seed for randomized checks")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--gnuplot", action="store_true", help="Also write gnuplot data files")
    return parser


def _read_document(args):
    if args.problem:
        return load_problem(args.problem)
    try:
        return Path(args.config).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {args.config}: {e.strerror}", "--config") from e


def main(args):
    """
    Run one command.

    Parameters:
        args (argparse.Namespace): Parsed arguments from build_parser().

    Returns:
        int: Process exit status.

    Side Effects:
        Writes artifacts and report.json; prints the command summary to stdout
        and errors to stderr.
    """
    configure_logging(args.verbose)
    metrics = RunMetrics()
    out = Path(args.out) if args.out else None
    try:
        spec = parse_config(_read_document(args))
        out = Path(args.out or spec.out or DEFAULT_OUT)
        result = run(args.command, spec, out, metrics, gnuplot=args.gnuplot, seed=args.seed)
    except DelaySpectraError as e:
        logger.debug("%s failed", args.command, exc_info=True)
        print(f"{args.command}: error: {e}", file=sys.stderr)
        return e.exit_code
    finally:
        if out is not None:
            write_report(out / "report.json", metrics.report())

    print(f"{result.command}: {result.summary}")
    for path in result.artifacts:
        print(f"  wrote {path}")
    return result.status


if __name__ == "__main__":
    sys.exit(main(build_parser().parse_args()))
