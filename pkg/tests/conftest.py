"""Shared test plumbing: the acceptance checklist printed after the run."""

_CHECKLIST = []


def record_criterion(number, description, passed, elapsed, budget):
    """Log one acceptance criterion outcome for the terminal summary."""
    _CHECKLIST.append((number, description, passed, elapsed, budget))


def pytest_terminal_summary(terminalreporter):
    if not _CHECKLIST:
        return
    terminalreporter.section("acceptance checklist")
    for number, description, passed, elapsed, budget in sorted(_CHECKLIST):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(
            f"{verdict} criterion {number:>2}: {description} "
            f"[{elapsed:.1f}s, budget {budget:.0f}s]"
        )
