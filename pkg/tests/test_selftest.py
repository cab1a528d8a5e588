import time

import pytest

from freqlens.selftest import format_report, run_selftest


def test_all_suites_pass_clean_and_quickly():
    start = time.perf_counter()
    results = run_selftest()
    elapsed = time.perf_counter() - start
    assert len(results) == 8
    assert all(r.ok for r in results)
    assert elapsed < 60.0


def test_injected_fault_fails_exactly_one_suite():
    results = run_selftest(inject_fault="mask-symmetry")
    failed = [r for r in results if not r.ok]
    assert len(failed) == 1
    assert failed[0].name == "band partitions"
    assert "symmetry" in failed[0].detail


def test_unknown_fault_mode_rejected():
    with pytest.raises(ValueError, match="unknown fault mode"):
        run_selftest(inject_fault="made-up")


def test_report_format():
    results = run_selftest()
    text = format_report(results, elapsed=1.5)
    lines = text.split("\n")
    assert len(lines) == 9
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1] == "8/8 suites passed in 1.5s"
