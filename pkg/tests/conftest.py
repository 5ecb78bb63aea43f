CRITERIA = {
    1: "Deutsch golden states",
    2: "Deutsch-Jozsa n=2 golden states",
    3: "Simon n=2 golden states with printed coefficients",
    4: "Grover n=2 golden states and P(X=k)=1",
    5: "history equivalence",
    6: "50% rule table",
    7: "Grover scaling within factor 4",
    8: "Simon success rate n=3",
    9: "property suites",
    10: "CLI determinism",
}

_outcomes: dict[int, list[tuple[str, str, str]]] = {}
_criterion_of: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            _criterion_of[item.nodeid] = marker.args[0]
        elif item.path.name == "test_properties.py":
            _criterion_of[item.nodeid] = 9


def pytest_runtest_logreport(report):
    number = _criterion_of.get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        detail = "; ".join(str(v) for k, v in report.user_properties if k == "detail")
        _outcomes.setdefault(number, []).append((report.nodeid, report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title in CRITERIA.items():
        runs = _outcomes.get(number)
        if not runs:
            tr.write_line(f"NOT RUN  {number:>2}. {title}")
            continue
        failed = [r for r in runs if r[1] != "passed"]
        status = "FAIL" if failed else "PASS"
        tr.write_line(f"{status:<8} {number:>2}. {title} ({len(runs) - len(failed)}/{len(runs)} checks)")
        for nodeid, outcome, detail in runs:
            if detail or outcome != "passed":
                name = nodeid.split("::")[-1]
                tr.write_line(f"           {outcome:<7} {name}: {detail}".rstrip(": "))
