"""Shared pytest plumbing: the acceptance-criteria scoreboard.

Acceptance tests record one verdict line per criterion via
``record_verdict``; the terminal-summary hook prints them after the run,
immune to pytest's output capture.
"""

VERDICTS: list[str] = []


def record_verdict(line: str) -> None:
    VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
