import pytest
from hypothesis import HealthCheck, settings

from bsk import kernels
from bsk.specfile import builtin_environment

settings.register_profile("bsk", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow,
                                                 HealthCheck.function_scoped_fixture])
settings.load_profile("bsk")

KERNEL_NAMES = ("bfs", "first_nonassociative", "closure", "orbit_labels")


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    mod = kernels.backends()[request.param]
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


@pytest.fixture(scope="session")
def env():
    return builtin_environment()


@pytest.fixture(scope="session")
def z2z3(env):
    return env.amalgams["z2z3"]


@pytest.fixture(scope="session")
def z4z6(env):
    return env.amalgams["z4z6"]


# acceptance criteria report one line each at the end of the run
CRITERIA = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            item.user_properties.append(("criterion", m.args))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" in props and (report.when == "call" or report.failed):
        n, title = props["criterion"]
        _, ok = CRITERIA.get(n, (title, True))
        CRITERIA[n] = (title, ok and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, ok = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}  {title:<44} {'PASS' if ok else 'FAIL'}")
