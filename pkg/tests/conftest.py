"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""


CRITERIA = {
    1: "Betti numbers from pruning match the closed form",
    2: "minors of X and X_G are Groebner bases under <_{T,G}",
    3: "Hilbert function agreement and equal face vectors of I and I_T",
    4: "f_d is a degree-wise bijection from I onto I_T",
    5: "cofactors equal their path expansions",
    6: "codimension and degree from the Hilbert series",
    7: "height of the initial ideal",
    8: "homogenized complex properties",
    9: "exactness probes on the pruned complexes",
    10: "characteristic numbers",
    11: "principally regular matrices with the vanishing condition are diagonal",
}

_outcomes: dict[int, list[tuple[str, float]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            item.user_properties.append(("criterion", marker.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.failed or report.skipped:
        _outcomes.setdefault(crit, []).append((report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(CRITERIA):
        runs = _outcomes.get(crit)
        if runs is None:
            continue
        ok = all(outcome == "passed" for outcome, _ in runs)
        seconds = sum(d for _, d in runs)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {crit}: {CRITERIA[crit]} ({seconds:.1f}s)")
