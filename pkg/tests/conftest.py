"""Collects outcomes of tests marked ``acceptance(n)`` and prints one line per criterion."""
import pytest

TITLES = {
    1: "Hermite orthonormality",
    2: "spectral vs quadrature agreement",
    3: "semigroup law and conservativity",
    4: "kernel self-adjointness identity",
    5: "subordination identities",
    6: "Luxemburg norm",
    7: "norm equivalence window",
    8: "kernel estimates",
    9: "covering family",
    10: "boundedness of the operators",
    11: "strong continuity",
    12: "verify-all runtime",
}

_outcomes: dict[int, list[tuple[str, bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): check belonging to acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes.setdefault(int(marker.args[0]), []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_outcomes):
        results = _outcomes[n]
        ok = all(passed for _, passed in results)
        failed = [name for name, passed in results if not passed]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {TITLES.get(n, '')} ({len(results)} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
