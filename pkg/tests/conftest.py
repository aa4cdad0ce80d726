import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


def _backends():
    from ekr_kit import _pykernels

    out = [pytest.param(_pykernels, id="python")]
    try:
        from ekr_kit import _ckernels
    except ImportError:
        out.append(pytest.param(None, id="cython", marks=pytest.mark.skip(reason="compiled kernels not built")))
    else:
        out.append(pytest.param(_ckernels, id="cython"))
    return out


@pytest.fixture(params=_backends())
def kernels(request):
    return request.param


# -- acceptance reporting ----------------------------------------------------

_criteria: dict[str, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test checks")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    label = getattr(report, "_criterion", None)
    if label is None:
        return
    _criteria.setdefault(label, []).append((report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep._criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        results = _criteria[label]
        failed = [nid for nid, o in results if o != "passed"]
        status = "PASS" if not failed else "FAIL"
        tr.write_line(f"[{status}] criterion {label} ({len(results) - len(failed)}/{len(results)} checks)")
        for nid in failed:
            tr.write_line(f"         failed: {nid}")
