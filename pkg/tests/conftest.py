from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from anchorpack.geometry import Point, PointSet

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def grid_point_sets(max_size=12, denom=16, origin=True):
    """Point sets on a coarse grid, so coordinate ties and boundary points are common."""
    coord = st.integers(min_value=0, max_value=denom)
    pairs = st.lists(st.tuples(coord, coord), min_size=0, max_size=max_size, unique=True)

    def build(raw):
        pts = {(Fraction(a, denom), Fraction(b, denom)) for a, b in raw}
        if origin:
            pts.add((Fraction(0), Fraction(0)))
        elif not pts:
            pts.add((Fraction(1, 2), Fraction(1, 2)))
        return PointSet(Point(x, y) for x, y in sorted(pts))

    return pairs.map(build)


@pytest.fixture
def three_points():
    return PointSet([(0, 0), ("0.6", "0.3"), ("0.2", "0.5")])


@pytest.fixture
def two_diagonal():
    return PointSet([(0, 0), ("1/2", "1/2")])


_criteria: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    status = "PASS" if report.passed else "FAIL"
    _criteria[props["criterion"]] = (props["title"], status, props.get("detail", ""))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m is not None:
        item.user_properties.append(("criterion", m.args[0]))
        item.user_properties.append(("title", m.args[1]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        title, status, detail = _criteria[k]
        line = f"criterion {k:>2} {status}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def detail(request):
    """Attach a one-line measurement summary to the criterion report."""

    def record(text):
        request.node.user_properties.append(("detail", text))

    return record
