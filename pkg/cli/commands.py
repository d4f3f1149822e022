"""The five commands of the command-line tool.

Each handler takes a parsed RunSpec, writes its artifacts under the output
directory and returns a CommandResult carrying a one-line summary. Module
errors propagate as DelaySpectraError subclasses; the entry point turns them
into exit statuses.
"""

import cmath
import logging
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Tuple

from cli import report
from cli.checks import run_checks
from cli.config import RunSpec
from cli.metrics import RunMetrics
from common.errors import ConfigError, NumericalError, ToleranceError, TooFewPointsError
from discretize.config import Method
from discretize.reduce import build_evolution_matrix
from oracles.bruteforce import monodromy_bruteforce
from oracles.roots import char_roots
from spectra.clusters import match_dominant
from spectra.convergence import convergence_sweep, order_estimate
from spectra.eig import eig_dense, stability_summary

logger = logging.getLogger(__name__)

COMMANDS = ("eig", "converge", "compare", "oracle", "check")
COMPARE_COUNT = 4


@dataclass(frozen=True)
class CommandResult:
    """
    What a command produced.

    Attributes:
        command (str): Command name.
        artifacts (tuple[Path, ...]): Files written.
        summary (str): One line for the terminal.
        status (int): Exit status; nonzero when an artifact is partial.
    """

    command: str
    artifacts: Tuple[Path, ...]
    summary: str
    status: int = 0


def format_complex(value: complex) -> str:
    value = complex(value)
    sign = "-" if value.imag < 0 else "+"
    return f"{value.real:.17g}{sign}{abs(value.imag):.17g}i"


def resolve_reference(spec: RunSpec, metrics: RunMetrics):
    """
    Reference eigenvalue of a sweep and a description of where it came from.

    A characteristic root lambda is turned into the multiplier exp(lambda h);
    the root with the largest real part is used. A brute-force reference is
    the dominant eigenvalue of the brute-force monodromy matrix.

    Raises:
        ConfigError: If the document has no reference.
        NumericalError: If the root search finds nothing.
    """
    ref = spec.reference
    if ref is None:
        raise ConfigError("this command needs a reference", "run.reference")
    cfg = spec.disc
    if ref.kind == "value":
        return ref.value, ref.provenance
    if ref.kind == "char-roots":
        metrics.record_oracle_call()
        roots = char_roots(spec.problem, ref.region)
        if not roots:
            raise NumericalError("no characteristic root in the search region")
        return cmath.exp(roots[0] * cfg.h), f"char-roots lambda={format_complex(roots[0])}"
    metrics.record_oracle_call()
    matrix = monodromy_bruteforce(spec.problem, cfg.h, ref.M, ref.steps, cfg.s)
    metrics.record_eig()
    return eig_dense(matrix).dominant, f"bruteforce M={ref.M} steps={ref.steps}"


def run_eig(spec: RunSpec, out: Path, metrics: RunMetrics, gnuplot: bool = False, seed: int = 0) -> CommandResult:
    result = build_evolution_matrix(spec.problem, spec.disc)
    metrics.record_build()
    spectrum = eig_dense(result.data)
    metrics.record_eig()
    artifacts = [report.write_csv(out / "spectrum.csv", report.SPECTRUM_COLUMNS, report.spectrum_rows(spectrum))]
    if gnuplot:
        rows = ((row[1], row[2], row[3]) for row in report.spectrum_rows(spectrum))
        artifacts.append(report.write_gnuplot(out / "spectrum.dat", rows))
    summary = stability_summary(spectrum, spec.disc.h)
    verdict = "stable" if summary.stable else "not stable"
    text = (f"dominant multiplier {format_complex(summary.dominant)}, modulus {summary.modulus:.6g} ({verdict}), "
            f"condition estimate {result.condition_estimate:.3e}")
    return CommandResult("eig", tuple(artifacts), text)


def run_converge(spec: RunSpec, out: Path, metrics: RunMetrics, gnuplot: bool = False, seed: int = 0) -> CommandResult:
    if not spec.n_list:
        raise ConfigError("converge needs a non-empty list", "run.n_list")
    reference, provenance = resolve_reference(spec, metrics)
    cfg = spec.disc
    table = convergence_sweep(spec.problem, cfg, spec.n_list, reference, provenance,
                              refine=spec.refine, workers=spec.workers, m_offset=cfg.M - cfg.N)
    done = len(table.rows) - table.failures
    metrics.record_build(done)
    metrics.record_eig(done)
    metrics.record_failure(table.failures)

    artifacts = [report.write_csv(out / "convergence.csv", report.CONVERGENCE_COLUMNS,
                                  report.convergence_rows(table), table.failures)]
    if gnuplot:
        rows = ((row.N, row.error) for row in table.rows)
        artifacts.append(report.write_gnuplot(out / "convergence.dat", rows))
    try:
        order = f"{order_estimate(table):.3g}"
    except TooFewPointsError as e:
        logger.info("no order estimate: %s", e)
        order = "n/a"
    text = f"reference {format_complex(reference)} ({provenance}), order estimate {order}"
    if table.failures:
        text += f", {table.failures} entries failed"
        return CommandResult("converge", tuple(artifacts), text, NumericalError.exit_code)
    return CommandResult("converge", tuple(artifacts), text)


def run_compare(spec: RunSpec, out: Path, metrics: RunMetrics, gnuplot: bool = False, seed: int = 0) -> CommandResult:
    cfg = spec.disc
    spectra = []
    for method in (Method.COLLOCATION, Method.WEIGHTED_RESIDUALS):
        result = build_evolution_matrix(spec.problem, replace(cfg, method=method, pieces=None))
        metrics.record_build()
        spectra.append(eig_dense(result.data))
        metrics.record_eig()
    matches = match_dominant(spectra[0], spectra[1], COMPARE_COUNT)
    rows = [(k, m.reference.real, m.reference.imag, m.other.real, m.other.imag, m.delta)
            for k, m in enumerate(matches)]
    path = report.write_csv(out / "compare.csv", report.COMPARE_COLUMNS, rows)
    worst = max((m.delta for m in matches), default=0.0)
    return CommandResult("compare", (path,), f"max dominant delta {worst:.3e} over {len(matches)} eigenvalues")


def run_oracle(spec: RunSpec, out: Path, metrics: RunMetrics, gnuplot: bool = False, seed: int = 0) -> CommandResult:
    ref = spec.reference
    if ref is None or ref.kind == "value":
        raise ConfigError("oracle needs a char-roots or bruteforce reference", "run.reference")
    metrics.record_oracle_call()
    cfg = spec.disc
    if ref.kind == "char-roots":
        roots = char_roots(spec.problem, ref.region)
        rows = []
        for k, z in enumerate(roots):
            mu = cmath.exp(z * cfg.h)
            rows.append((k, z.real, z.imag, mu.real, mu.imag))
        path = report.write_csv(out / "roots.csv", report.ROOT_COLUMNS, rows)
        return CommandResult("oracle", (path,), f"{len(roots)} characteristic roots in the region")
    spectrum = eig_dense(monodromy_bruteforce(spec.problem, cfg.h, ref.M, ref.steps, cfg.s))
    metrics.record_eig()
    path = report.write_csv(out / "bruteforce.csv", report.SPECTRUM_COLUMNS, report.spectrum_rows(spectrum))
    return CommandResult("oracle", (path,), f"brute-force dominant multiplier {format_complex(spectrum.dominant)}")


def run_check(spec: RunSpec, out: Path, metrics: RunMetrics, gnuplot: bool = False, seed: int = 0) -> CommandResult:
    results = run_checks(spec, seed)
    metrics.record_build()
    metrics.record_eig()
    rows = [(item.name, item.status, item.value, item.tolerance) for item in results]
    path = report.write_csv(out / "checks.csv", report.CHECK_COLUMNS, rows)
    failed = [item.name for item in results if item.failed]
    if failed:
        metrics.record_failure(len(failed))
        raise ToleranceError(f"checks failed: {', '.join(failed)} (see {path})")
    passed = sum(1 for item in results if item.status == "pass")
    return CommandResult("check", (path,), f"{passed} checks passed, {len(results) - passed} skipped")


HANDLERS = {
    "eig": run_eig,
    "converge": run_converge,
    "compare": run_compare,
    "oracle": run_oracle,
    "check": run_check,
}


def run(command: str, spec: RunSpec, out: Path, metrics: RunMetrics, gnuplot: bool = False, seed: int = 0) -> CommandResult:
    """
    Dispatch one command and time it.

    Raises:
        ValueError: If the command is unknown.
        DelaySpectraError: Whatever the command's modules raise.
    """
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    started = time.perf_counter()
    try:
        return HANDLERS[command](spec, Path(out), metrics, gnuplot=gnuplot, seed=seed)
    finally:
        elapsed = time.perf_counter() - started
        metrics.record_timing(command, elapsed)
        logger.debug("%s took %.3f s", command, elapsed)
