"""Shared pytest plumbing for the suite.

test_acceptance.py records one line per release criterion; echoing them
in the terminal summary keeps the checklist visible in a plain
`pytest -v` transcript, where stdout of passing tests is swallowed.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance checklist")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
