"""Tests for the RunMetrics counters."""

from cli.metrics import RunMetrics


# Tests that a new instance starts at zero.
def test_initial_report():
    report = RunMetrics().report()
    assert (report["builds"], report["eigen_solves"], report["oracle_calls"], report["failures"]) == (0, 0, 0, 0)
    assert report["timings"] == {}


# Tests that counters and timings accumulate.
def test_record():
    metrics = RunMetrics()
    metrics.record_build()
    metrics.record_build(3)
    metrics.record_eig()
    metrics.record_oracle_call()
    metrics.record_failure(2)
    metrics.record_timing("eig", 0.5)
    report = metrics.report()
    assert report["builds"] == 4 and report["eigen_solves"] == 1
    assert report["oracle_calls"] == 1 and report["failures"] == 2
    assert report["timings"] == {"eig": 0.5}


# Tests that the report does not expose the live timing dict.
def test_report_is_a_copy():
    metrics = RunMetrics()
    metrics.report()["timings"]["x"] = 1.0
    assert metrics.report()["timings"] == {}
