def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in order."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(rep.user_properties)
            if rep.when == "call" and "criterion" in props:
                lines.append((props["criterion"], outcome.upper()[:4], props.get("title", ""), props.get("tolerance", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num, mark, title, tol in sorted(lines):
        terminalreporter.write_line(f"[{mark}] criterion {num:>2}: {title} (tolerance: {tol})")
