import math

import numpy as np
import pytest

from selfaffine.carpets import carpet_to_ifs, make_carpet
from selfaffine.ifs import IFS, AffineMap, sierpinski_triangle, similarity

LOG3_LOG2 = math.log(3) / math.log(2)
CARPET_BOX = 1 + math.log(1.5) / math.log(3)


def random_similarity_system(rng, k=None, low=0.1, high=0.6):
    """Planar similarities with random ratios, rotations, reflections, shifts."""
    if k is None:
        k = int(rng.integers(2, 6))
    maps = [
        similarity(
            rng.uniform(low, high),
            rng.uniform(0, 2 * math.pi),
            rng.uniform(-1, 1, size=2),
            bool(rng.integers(0, 2)),
        )
        for _ in range(k)
    ]
    return IFS(tuple(maps))


def random_affine_system(rng, k=2, max_norm=0.6):
    maps = []
    for _ in range(k):
        while True:
            A = rng.uniform(-1, 1, size=(2, 2))
            sv = np.linalg.svd(A, compute_uv=False)
            if sv[1] > 1e-3:
                break
        A *= rng.uniform(0.1, max_norm) / sv[0]
        maps.append(AffineMap(A, rng.uniform(-1, 1, size=2)))
    return IFS(tuple(maps))


@pytest.fixture
def sierpinski():
    return sierpinski_triangle()


@pytest.fixture
def right_sierpinski():
    return carpet_to_ifs(make_carpet(2, 2, [(0, 0), (1, 0), (0, 1)]))


@pytest.fixture
def worked_carpet():
    return make_carpet(2, 3, [(0, 0), (0, 1), (1, 0)])


@pytest.fixture
def gap_carpet():
    return make_carpet(2, 3, [(0, 0), (0, 1)])


# --- acceptance summary -----------------------------------------------------

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    _ACCEPTANCE.append((number, title, "PASS" if report.passed else "FAIL"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
