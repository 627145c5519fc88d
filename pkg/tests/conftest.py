import numpy as np
import pytest

from submod_bandit.coverage import CoverageModel
from submod_bandit.oracle import NoisyOracle


def random_instance(seed, n=8, d=3, g_max=0.3):
    """Coverage model with G ~ U[0, g_max] and weights on the simplex."""
    rng = np.random.default_rng(seed)
    G = rng.uniform(0.0, g_max, size=(n, d))
    w = rng.dirichlet(np.ones(d))
    return CoverageModel(G), w


@pytest.fixture
def small_instance():
    return random_instance(0)


@pytest.fixture
def make_oracle():
    def _make(w, sigma=0.05, seed=0):
        return NoisyOracle(w, sigma=sigma, seed=seed)
    return _make


# -------------------------------------------------------------- acceptance report

_CRITERIA = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        verdict = "PASS" if report.passed else "FAIL"
        _CRITERIA[props["criterion"]] = f"{verdict}  {props['criterion']}  {props.get('detail', '')}".rstrip()


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k.split(".")[0])):
        terminalreporter.write_line(_CRITERIA[key])
