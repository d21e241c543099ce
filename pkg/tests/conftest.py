import numpy as np
import pytest

# criterion number -> {"outcomes": [(nodeid, passed)], "details": [str]}
_ACCEPTANCE = {}


def _entry(item):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return None
    return _ACCEPTANCE.setdefault(marker.args[0], {"outcomes": [], "details": []})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    entry = _entry(item)
    if entry is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry["outcomes"].append((item.nodeid, rep.passed))


@pytest.fixture
def note(request):
    """Attach a measured value to the acceptance line of the current test."""
    entry = _entry(request.node)

    def _note(text):
        if entry is not None:
            entry["details"].append(text)

    return _note


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.write_sep("=", "acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[n]
        ok = all(passed for _, passed in entry["outcomes"])
        failed = [nid.split("::")[-1] for nid, passed in entry["outcomes"] if not passed]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({len(entry['outcomes'])} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        if entry["details"]:
            line += " | " + "; ".join(entry["details"])
        tr.write_line(line, green=ok, red=not ok)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_cs(rng, n, scale=1.0):
    A = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    return scale * (A + A.T) / 2
