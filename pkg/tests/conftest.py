import numpy as np
import pytest

from bniep.core import is_exactly_bisymmetric

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def oracle_eigvals(M):
    """Independent reference spectrum (LAPACK), ascending -> descending."""
    return np.linalg.eigvalsh(np.asarray(M, dtype=float))[::-1]


def spectrum_gap(M, target):
    return float(np.abs(oracle_eigvals(M) - np.sort(np.asarray(target, float))[::-1]).max())


def assert_bisym_exact(M):
    a = np.asarray(M, dtype=float)
    assert is_exactly_bisymmetric(a), "output is not bit-exactly bisymmetric"


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
