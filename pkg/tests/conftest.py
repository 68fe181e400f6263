"""Print one pass/fail line per acceptance criterion at the end of the run."""


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::" not in rep.nodeid or rep.when != "call":
                continue
            props = dict(rep.user_properties)
            rows.append((props.get("criterion", 99), outcome.upper(), props.get("summary", ""),
                         rep.nodeid.split("::")[-1]))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num, outcome, summary, name in sorted(rows):
        terminalreporter.write_line(f"{outcome:6} criterion {num:>2}  {name}: {summary}")
