"""Collects one pass/fail line per acceptance criterion and prints them at the end."""

ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        entries = ACCEPTANCE[num]
        ok = all(passed for passed, _ in entries)
        failed = [msg for passed, msg in entries if not passed]
        passed = [msg for passed, msg in entries if passed]
        detail = "; ".join(failed + passed)
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
