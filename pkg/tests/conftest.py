import pytest

from er3bp import SystemParams

LIBRATION = dict(sigma1=0.007, sigma2=0.002, gamma1=0.005, gamma2=0.002, e=0.01, a=0.92)

# (sigma1, sigma2, gamma1, gamma2, e, a, reference mu_c)
MU_C_TABLE = [
    (0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0385209),
    (0.006, 0.0004, 0.03, 0.002, 0.2, 0.92, 0.0443621),
    (0.006, 0.0004, 0.03, 0.002, 0.4, 0.92, 0.0401412),
    (0.006, 0.0004, 0.03, 0.002, 0.6, 0.92, 0.0132093),
    (0.003, 0.0002, 0.007, 0.0004, 0.02, 0.92, 0.0456447),
    (0.003, 0.0002, 0.007, 0.0004, 0.04, 0.92, 0.0424109),
    (0.003, 0.0002, 0.007, 0.0004, 0.07, 0.92, 0.00909276),
    (0.009, 0.002, 0.008, 0.002, 0.02, 0.92, 0.042956),
    (0.009, 0.004, 0.008, 0.002, 0.02, 0.92, 0.0425331),
    (0.009, 0.008, 0.008, 0.002, 0.02, 0.92, 0.0416678),
    (0.006, 0.001, 0.008, 0.001, 0.08, 0.92, 0.0466464),
    (0.006, 0.001, 0.008, 0.005, 0.08, 0.92, 0.0431538),
    (0.006, 0.001, 0.008, 0.008, 0.08, 0.92, 0.0427982),
]
SHAPE_KEYS = ("sigma1", "sigma2", "gamma1", "gamma2", "e", "a")

LOCATION_SET = dict(sigma1=0.0002, sigma2=0.0005, gamma1=0.003, gamma2=0.002)
SADDLE_SET = dict(sigma1=0.001, sigma2=0.004, gamma1=0.003, gamma2=0.002, e=0.01, a=1.0)


def table_params(row, mu=0.01):
    return SystemParams(mu, **dict(zip(SHAPE_KEYS, row[:6])))


def reference_sets():
    """Every reference parameter set (mu unset)."""
    sets = [dict(zip(SHAPE_KEYS, row[:6])) for row in MU_C_TABLE]
    sets.append(LIBRATION)
    sets += [dict(LOCATION_SET, e=e, a=1.0) for e in (0.01, 0.04, 0.06, 0.08, 0.1)]
    sets.append(SADDLE_SET)
    return sets


@pytest.fixture
def libration():
    return SystemParams(0.01, **LIBRATION)


@pytest.fixture
def classical():
    return SystemParams(0.01)


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed
    skipped = report.when == "setup" and report.skipped
    if report.when == "call" or failed or skipped:
        status = "FAIL" if failed else ("SKIP" if skipped else "PASS")
        previous = _ACCEPTANCE.get(number, (None, "PASS"))[1]
        if previous != "FAIL":
            _ACCEPTANCE[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} [{status}] {title}")
