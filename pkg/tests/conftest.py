import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dergen import parse_presentation

G1_TEXT = """quiver G1
vertex 1 2
arrow a : 1 -> 2
arrow b : 2 -> 1
rel b a
"""

G2_TEXT = """quiver G2
vertex 1 2 3 4
arrow a : 2 -> 1
arrow b : 4 -> 2
arrow c : 3 -> 1
arrow d : 4 -> 3
rel a b
rel c d
"""

A3_TEXT = """quiver A3
vertex 1 2 3
arrow a : 1 -> 2
arrow b : 2 -> 3
"""

A3RADSQ_TEXT = """quiver A3radsq
vertex 1 2 3
arrow a : 1 -> 2
arrow b : 2 -> 3
rel b a
"""


@pytest.fixture
def g1():
    return parse_presentation(G1_TEXT)


@pytest.fixture
def g2():
    return parse_presentation(G2_TEXT)


@pytest.fixture
def a3():
    return parse_presentation(A3_TEXT)


@pytest.fixture
def a3radsq():
    return parse_presentation(A3RADSQ_TEXT)


# ---------------------------------------------------------------------------
# acceptance criterion reporting: one PASS/FAIL line per criterion


_criteria: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(n): part of acceptance criterion n"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            _criteria.setdefault(marker.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok = all(_criteria[n])
        terminalreporter.write_line(
            f"criterion {n}: {'PASS' if ok else 'FAIL'}"
            f" ({sum(_criteria[n])}/{len(_criteria[n])} checks)"
        )
