import numpy as np
import pytest

from ellthom.lattice import Lattice
from ellthom.theta import ThetaFunction


@pytest.fixture(params=[1j, 0.3 + 0.9j], ids=["tau=i", "tau=0.3+0.9i"])
def lattice(request):
    return Lattice(request.param, "witten")


@pytest.fixture
def sigma(lattice):
    return ThetaFunction.sigma(lattice)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def cell_samples(L, n, rng, margin=0.05):
    s = rng.uniform(margin, 1 - margin, n)
    t = rng.uniform(margin, 1 - margin, n)
    return L.from_coords(s, t)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
