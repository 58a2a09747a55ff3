import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bniep.core import (BisymMatrix, CantoniButlerForm, Spectrum, cb_compose, cb_parts,
                        cb_split, irreducible_components, is_exactly_bisymmetric,
                        lift_plus_vector, mirror, perron_pair, symmetric_eigen,
                        symmetric_eigenvalues, top_eigvec_2x2, verify_realization)
from bniep.errors import ParameterError, StructuralError

from tests.conftest import oracle_eigvals


def square(max_n=9, lo=0.0, hi=5.0):
    return st.integers(1, max_n).flatmap(
        lambda n: arrays(np.float64, (n, n), elements=st.floats(lo, hi, allow_nan=False)))


def random_bisym(rng, n, density=0.7):
    a = rng.uniform(0, 4, (n, n)) * (rng.random((n, n)) < density)
    return BisymMatrix.mirrored(a)


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

def test_spectrum_sorted_descending():
    s = Spectrum([1, -2, 5, 0])
    assert s.values == (5.0, 1.0, 0.0, -2.0)
    assert s.perron == 5.0
    assert s.total == 4.0
    assert len(s) == 4


@pytest.mark.parametrize("bad", [[], [float("nan")], [1.0, float("inf")]])
def test_spectrum_rejects_bad_input(bad):
    with pytest.raises(ParameterError):
        Spectrum(bad)


def test_spectrum_coerce_is_identity_on_spectrum():
    s = Spectrum([3, 1])
    assert Spectrum.coerce(s) is s
    assert Spectrum.coerce([1, 3]) == s


# ---------------------------------------------------------------------------
# Exact structure
# ---------------------------------------------------------------------------

@given(square(lo=-3, hi=3))
def test_mirror_is_exactly_bisymmetric(a):
    m = mirror(a)
    assert is_exactly_bisymmetric(m)
    # idempotent
    assert np.array_equal(mirror(m), m)


def test_bisym_rejects_asymmetric_and_negative():
    with pytest.raises(StructuralError, match="symmetric"):
        BisymMatrix([[1, 2], [3, 1]])
    with pytest.raises(StructuralError, match="persymmetric"):
        BisymMatrix([[1, 2], [2, 3]])
    with pytest.raises(StructuralError, match="negative"):
        BisymMatrix([[-1, 0], [0, -1]])
    with pytest.raises(StructuralError):
        BisymMatrix(np.zeros((2, 3)))


def test_bisym_from_array_tolerates_rounding():
    a = np.array([[1.0, 2.0], [2.0 + 1e-12, 1.0 - 1e-13]])
    Q = BisymMatrix.from_array(a)
    assert is_exactly_bisymmetric(Q.entries)
    with pytest.raises(StructuralError):
        BisymMatrix.from_array(a, tol=1e-14)


def test_bisym_entries_are_read_only():
    Q = BisymMatrix([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(ValueError):
        Q.entries[0, 0] = 5.0


# ---------------------------------------------------------------------------
# Block form
# ---------------------------------------------------------------------------

@settings(max_examples=60)
@given(square(max_n=10))
def test_cb_roundtrip_is_exact(a):
    Q = BisymMatrix.mirrored(a)
    assert cb_compose(cb_parts(Q.entries)) == Q


@settings(max_examples=60)
@given(square(max_n=10))
def test_cb_blocks_partition_spectrum(a):
    Q = BisymMatrix.mirrored(a)
    if Q.order == 1:
        return
    minus, plus = cb_split(Q.entries)
    halves = np.sort(np.concatenate([np.linalg.eigvalsh(minus), np.linalg.eigvalsh(plus)]))
    assert np.allclose(halves, np.linalg.eigvalsh(Q.entries), atol=1e-9)


def test_cb_compose_checks_blocks():
    with pytest.raises(StructuralError):
        cb_compose(CantoniButlerForm(np.array([[0, 1], [2, 0]]), np.zeros((2, 2))))
    with pytest.raises(StructuralError):
        cb_compose(CantoniButlerForm(np.eye(2), np.array([[1.0, 0], [0, 0]])))


def test_lift_plus_vector_is_unit_and_j_symmetric():
    for n in (4, 5):
        y = np.arange(1, n // 2 + 1 + n % 2, dtype=float)
        y /= np.linalg.norm(y)
        v = lift_plus_vector(y, n)
        assert np.isclose(np.linalg.norm(v), 1.0)
        assert np.array_equal(v, v[::-1])


# ---------------------------------------------------------------------------
# Eigensolver against LAPACK
# ---------------------------------------------------------------------------

@settings(max_examples=80)
@given(square(max_n=12, lo=-4, hi=4))
def test_jacobi_matches_reference(a):
    s = np.triu(a) + np.triu(a, 1).T
    dec = symmetric_eigen(s)
    ref = oracle_eigvals(s)
    scale = max(1.0, np.abs(ref).max())
    assert np.allclose(dec.eigenvalues, ref, atol=1e-10 * scale)
    V = dec.eigenvectors
    assert np.allclose(V.T @ V, np.eye(len(s)), atol=1e-10)
    assert np.allclose(s @ V, V * dec.eigenvalues, atol=1e-9 * scale)


def test_jacobi_rejects_asymmetric():
    with pytest.raises(StructuralError):
        symmetric_eigen([[1.0, 2.0], [0.0, 1.0]])


def test_bisym_eigenvalues_via_halves(rng):
    for n in range(1, 12):
        Q = random_bisym(rng, n)
        assert np.allclose(symmetric_eigenvalues(Q.entries), oracle_eigvals(Q), atol=1e-10)


# ---------------------------------------------------------------------------
# Perron pairs
# ---------------------------------------------------------------------------

def test_perron_pair_properties(rng):
    for n in range(1, 13):
        for density in (0.2, 0.6, 1.0):
            Q = random_bisym(rng, n, density)
            root, v = perron_pair(Q)
            assert np.isclose(root, oracle_eigvals(Q)[0], atol=1e-10)
            assert v.min() >= 0
            assert np.isclose(np.linalg.norm(v), 1.0)
            assert np.array_equal(v, v[::-1])
            assert np.allclose(Q.entries @ v, root * v, atol=1e-9 * max(1, root))


def test_perron_pair_reducible_degenerate():
    # two equal blocks: the top eigenspace is two-dimensional
    Q = BisymMatrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    root, v = perron_pair(Q)
    assert root == pytest.approx(1.0)
    assert v.min() >= 0
    assert np.allclose(Q.entries @ v, v)


def test_perron_pair_zero_matrix():
    root, v = perron_pair(BisymMatrix.zeros(3))
    assert root == 0.0
    assert np.allclose(v, 1 / math.sqrt(3))


def test_irreducible_components():
    S = np.array([[1, 0, 1], [0, 2, 0], [1, 0, 1]])
    comps = irreducible_components(S)
    assert [c.tolist() for c in comps] == [[0, 2], [1]]


@given(st.floats(-5, 5), st.floats(0, 5), st.floats(-5, 5))
def test_top_eigvec_2x2(p, q, r):
    lam, v = top_eigvec_2x2(p, q, r)
    M = np.array([[p, q], [q, r]])
    assert lam == pytest.approx(np.linalg.eigvalsh(M)[-1], abs=1e-9)
    assert v.min() >= 0
    assert np.allclose(M @ v, lam * v, atol=1e-8)


# ---------------------------------------------------------------------------
# Verification report
# ---------------------------------------------------------------------------

def test_verify_realization_pass_and_fail():
    rep = verify_realization([[2, 1], [1, 2]], [3, 1])
    assert rep.passed and rep.spectrum_deviation < 1e-15
    assert rep.as_dict()["pass"] is True
    assert not verify_realization([[2, 1], [1, 2]], [3, 0.5]).passed
    bad = verify_realization([[1, 2], [2, 3]], np.linalg.eigvalsh([[1, 2], [2, 3]]))
    assert not bad.is_persymmetric and not bad.passed
    assert bad.spectrum_deviation < 1e-12


def test_verify_realization_length_mismatch():
    with pytest.raises(ParameterError):
        verify_realization(np.eye(2), [1, 1, 1])
