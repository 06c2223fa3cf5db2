"""Shared test plumbing.

The acceptance tests record one verdict per criterion; the summary hook
prints them all at the end of the run so the pass/fail roster is visible
in the terminal regardless of capture settings.
"""

ACCEPTANCE_RESULTS = []  # (criterion id, passed, detail), in record order


def record_criterion(cid: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((cid, bool(passed), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid, ok, detail in ACCEPTANCE_RESULTS:
        line = f"{'PASS' if ok else 'FAIL'}  {cid}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
