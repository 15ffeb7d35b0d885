import numpy as np
import pytest

from sdgabor.grids import ProductGrid, make_grid
from sdgabor.instances import make_affine, make_e2


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def affine():
    return make_affine()


@pytest.fixture(scope="session")
def e2():
    return make_e2()


def line(start, stop, count):
    return ProductGrid((make_grid("uniform", start, stop, count),))


def plane(start, stop, count):
    ax = make_grid("uniform", start, stop, count)
    return ProductGrid((ax, ax))


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for text in lines:
            terminalreporter.write_line(text)
