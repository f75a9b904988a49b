import time

import pytest

from pllforge import paper_preset, simulate


@pytest.fixture(scope="session")
def preset_cfg():
    return paper_preset()


@pytest.fixture(scope="session")
def preset_run(preset_cfg):
    """The full 2 us / 1 ps reference-design run, shared across test modules.

    Returns (trace, report, wall_seconds); the wall time is recorded here so
    the runtime criterion can be checked no matter which test triggers the
    fixture first.
    """
    t0 = time.perf_counter()
    trace, report = simulate(preset_cfg)
    wall = time.perf_counter() - t0
    return trace, report, wall
