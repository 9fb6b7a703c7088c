"""Shared fixtures and the acceptance summary lines."""

from __future__ import annotations

import re
from fractions import Fraction

import pytest

from qcplane import qspace
from qcplane.qnormal import TruncationWindow

ACCEPTANCE_LABELS = {
    1: "relation identity",
    2: "scaling covariance equivalences",
    3: "measure invariance",
    4: "crossed-product axioms",
    5: "covariant representation",
    6: "norm oracle",
    7: "z-transform roundtrip",
    8: "proof-identity checks",
    9: "bott projections",
    10: "classical limit",
}

_CRIT = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


@pytest.fixture
def dyadic_measure():
    return qspace.uniform_measure("1/2", ["1"])


@pytest.fixture
def dyadic_set():
    return qspace.make_spectral_set("1/2", ["1"])


@pytest.fixture
def kernel_measure():
    return qspace.uniform_measure("1/2", ["1"], zero_mass="1")


@pytest.fixture
def window9():
    return TruncationWindow(-4, 4)


@pytest.fixture
def half():
    return Fraction(1, 2)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results: dict[int, str] = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            m = _CRIT.search(nodeid)
            if not m:
                continue
            num = int(m.group(1))
            if outcome == "passed" and rep.when == "call":
                results.setdefault(num, "PASS")
            else:
                results[num] = "FAIL"
    if not results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(results):
        label = ACCEPTANCE_LABELS.get(num, "?")
        terminalreporter.write_line(f"criterion {num:2d} ({label}): {results[num]}")
