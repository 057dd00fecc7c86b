"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

from collections import defaultdict

_outcomes: dict[int, list[tuple[str, bool]]] = defaultdict(list)
_titles: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))
            _titles[mark.args[0]] = mark.args[1]


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[props["criterion"]].append((report.nodeid, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_titles):
        results = _outcomes.get(number, [])
        failed = [node.split("::")[-1] for node, ok in results if not ok]
        status = "PASS" if results and not failed else "FAIL"
        line = f"criterion {number}: {status}  {_titles[number]} ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        tr.write_line(line)
