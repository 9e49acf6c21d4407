import numpy as np
import pytest

from rdsmetric import PathEnsemble
from rdsmetric.simulate import RotationSpec, simulate_rotation

_ACCEPTANCE = {}


def pytest_configure(config):
    for i in range(1, 12):
        config.addinivalue_line("markers", f"criterion_{i}: acceptance criterion {i}")


def pytest_runtest_logreport(report):
    crit = next((k for k in report.keywords if k.startswith("criterion_")), None)
    if crit is None:
        return
    if report.when == "call" or report.outcome != "passed":
        if hasattr(report, "wasxfail"):
            # a known, documented failure: still reported as FAIL
            state = "FAIL" if report.skipped else "PASS"
        else:
            state = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        _ACCEPTANCE.setdefault(crit, []).append(state)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE, key=lambda k: int(k.split("_")[1])):
        states = _ACCEPTANCE[crit]
        # one failing check fails the criterion; all-skipped reports SKIP
        verdict = "FAIL" if "FAIL" in states else ("PASS" if "PASS" in states else "SKIP")
        failed = states.count("FAIL")
        note = f", {failed} failing" if failed else ""
        terminalreporter.write_line(f"criterion {crit.split('_')[1]:>2}: {verdict}  ({len(states)} checks{note})")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_ensemble(rng, n, t_len, d=1):
    v = rng.normal(size=(n, t_len, d)) + 1j * rng.normal(size=(n, t_len, d))
    return PathEnsemble(0.7 * v)


@pytest.fixture
def small_pair(rng):
    return random_ensemble(rng, 3, 5, 2), random_ensemble(rng, 2, 5, 2)


@pytest.fixture
def noisy_rotation():
    return simulate_rotation(RotationSpec(0.9, 0.25, sigma=0.1), n_paths=4, t_len=8, seed=3)
