import math

import numpy as np
import pytest

from bniep.certificate import replay
from bniep.core import is_exactly_bisymmetric
from bniep.diagonal import (DiagonalSpec, check_diag3, check_diag_even, check_diag_odd,
                            construct_diag3, construct_diag_even, construct_diag_odd,
                            construct_diagonal, layer_reversal)
from bniep.errors import InfeasibleError, ParameterError

from tests.conftest import spectrum_gap


def check_diagonal_output(Q, spec, tol=1e-9):
    a = np.asarray(Q)
    assert is_exactly_bisymmetric(a)
    assert a.min() >= 0
    assert np.allclose(np.diag(a), spec.diagonal(), atol=1e-12)
    assert spectrum_gap(a, spec.spectrum) <= tol * max(1.0, abs(spec.spectrum[0]))


def test_diagonal_layout():
    assert DiagonalSpec([5, 1, 0], [4, 1]).diagonal() == [1, 4, 1]
    assert DiagonalSpec([5, 1, -2, -2], [0, 1]).diagonal() == [1, 0, 0, 1]
    assert DiagonalSpec([6, 2, 1, 0, -1], [2, 2, 1]).diagonal() == [1, 2, 2, 2, 1]
    with pytest.raises(ParameterError):
        DiagonalSpec([1, 2, 3], [1, 1, 1])
    with pytest.raises(ParameterError):
        DiagonalSpec([1, 2, 3], [-1, 1])


def test_order_three_fixture():
    r2 = math.sqrt(2)
    Q = construct_diag3([5, 1, 0], 4, 1)
    assert np.abs(np.asarray(Q) - [[1, r2, 0], [r2, 4, r2], [0, r2, 1]]).max() <= 1e-12
    assert check_diag3([5, 1, 0], 4, 1).holds
    assert not check_diag3([5, 1, 0], 1, 2).holds


@pytest.mark.parametrize("lam,a,js", [
    ([6, 2, 1, 0, -1], [2, 2, 1], [1, 3]),
    ([6, 2, 1, 0, -1], [3, 1.5, 1], [2, 3]),
])
def test_odd_fixtures(lam, a, js):
    spec = DiagonalSpec(lam, a)
    v = check_diag_odd(spec)
    assert v.holds and v.witness == js
    Q, cert = construct_diag_odd(spec)
    check_diagonal_output(Q, spec)
    assert replay(cert) == Q


def test_even_fixture():
    r3 = math.sqrt(3)
    spec = DiagonalSpec([5, 1, -2, -2], [0, 1])
    Q, cert = construct_diag_even(spec)
    expect = [[1, r3, r3, 0], [r3, 0, 2, r3], [r3, 2, 0, r3], [0, r3, r3, 1]]
    assert np.abs(np.asarray(Q) - expect).max() <= 1e-12
    assert replay(cert) == Q


def test_even_rejections():
    assert not check_diag_even(DiagonalSpec([5, 1, -2, -2], [1, 0])).holds
    with pytest.raises(InfeasibleError):
        construct_diag_even(DiagonalSpec([5, 1, -2, -2], [2, 1]))  # trace
    bad = check_diag_even(DiagonalSpec([8, 1, 0, 0, -1, -2], [0.5, 1, 1.5]))
    assert "a_1 >= a_2" in bad.failed_clause


def test_layer_reversal_commutes_with_reflection():
    for n in range(1, 12):
        for layers in range(0, n // 2 + 1):
            perm = layer_reversal(n, layers)
            P = np.eye(n)[perm]
            J = np.eye(n)[::-1]
            assert np.array_equal(P @ J, J @ P)


def random_instances(parity, count, seed):
    """Random (spectrum, diagonal) pairs that satisfy the matching condition."""
    rng = np.random.default_rng(seed)
    found = 0
    tries = 0
    while found < count and tries < 50000:
        tries += 1
        m = int(rng.integers(1, 4))
        n = 2 * m + 1 if parity == "odd" else 2 * m + 2
        lam = sorted(rng.integers(-4, 6, n).astype(float), reverse=True)
        lam[0] += float(rng.integers(0, 8))
        a = sorted(rng.integers(0, 5, m).astype(float), reverse=True)
        rest = math.fsum(lam) - 2 * math.fsum(a)
        a0 = rest if parity == "odd" else rest / 2
        if a0 < 0:
            continue
        spec = DiagonalSpec(lam, [a0] + a)
        check = check_diag_odd if parity == "odd" else check_diag_even
        if check(spec).holds:
            found += 1
            yield spec


@pytest.mark.parametrize("parity", ["odd", "even"])
def test_random_feasible_instances(parity):
    count = 0
    for spec in random_instances(parity, 60, seed=len(parity)):
        Q, cert = construct_diagonal(spec.spectrum, spec.diag_half)
        check_diagonal_output(Q, spec, tol=1e-8)
        assert replay(cert) == Q
        count += 1
    assert count >= 30
