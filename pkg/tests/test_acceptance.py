"""Acceptance suite: every criterion at its configured tolerance.

Each criterion prints one summary line plus a line per individual check,
so ``pytest -v`` output doubles as the acceptance report.
"""

import pytest

from orthojulia import acceptance

CFG = acceptance.VerifyConfig()


@pytest.fixture(scope="module")
def cache():
    return acceptance._Cache(CFG)


@pytest.mark.slow
@pytest.mark.parametrize("number", range(1, len(acceptance.CRITERIA) + 1))
def test_criterion(number, cache, capsys):
    result = acceptance.CRITERIA[number - 1](CFG, cache)
    with capsys.disabled():
        print()
        status = "PASS" if result.passed else "FAIL"
        budget = "" if result.runtime_budget == float("inf") else f" of {result.runtime_budget:.0f}s budget"
        print(f"[{status}] criterion {number} ({result.title}): {result.runtime:.1f}s{budget}")
        for check in result.checks:
            print("    " + check.line())
    assert result.checks
    failed = [c.line() for c in result.checks if not c.passed]
    assert not failed, failed
    assert result.runtime < result.runtime_budget
