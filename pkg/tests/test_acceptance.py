"""Acceptance suite: every criterion at its stated tolerance.

The suite runs twice from a clean in-process state (the second run backs the
determinism criterion); each test prints the criterion's report line.
"""

from __future__ import annotations

import pytest

from sifted_mobius.acceptance import NAMES, PASS, RunConfig, report_lines, run_acceptance


@pytest.fixture(scope="module")
def report(shared_cache):
    return run_acceptance(RunConfig(cache_dir=shared_cache), determinism=True)


@pytest.mark.parametrize("cid", sorted(NAMES), ids=[f"{i:02d}-{NAMES[i].replace(' ', '_')}" for i in sorted(NAMES)])
def test_criterion(report, cid, capsys):
    entries = {c["id"]: (c, line) for c, line in zip(report["criteria"], report_lines(report))}
    crit, line = entries[cid]
    with capsys.disabled():
        print("\n" + line)
    assert crit["status"] == PASS, line


def test_exit_code_reflects_failures(report):
    failed = [c["id"] for c in report["criteria"] if c["status"] == "FAIL"]
    assert report["exit_code"] == (1 if failed else 0)
