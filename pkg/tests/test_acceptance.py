"""Acceptance gate: one test per criterion, each recording a pass/fail line.

The lines are printed in the pytest terminal summary, and also when this file
is run directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import json
import math
import time

import sys
from pathlib import Path

import numpy as np
import pytest

from bniep import (BisymMatrix, StructuralError, construct_auto, construct_small,
                   construct_soto, construct_suleimanova, positify, verify_realization)
from bniep.cli import main
from bniep.core import is_exactly_bisymmetric, perron_pair
from bniep.diagonal import DiagonalSpec, construct_diag3, construct_diag_even
from bniep.errors import InfeasibleError
from bniep.glue import nest, rado_update

if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from tests.conftest import ACCEPTANCE, oracle_eigvals, spectrum_gap

# every matrix produced by a constructor in this module, for criterion 8
PRODUCED = []


def record(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


def keep(Q):
    PRODUCED.append(np.array(Q, dtype=float))
    return Q


# ---------------------------------------------------------------------------
# 1. Six-by-six odd-partition example through the CLI
# ---------------------------------------------------------------------------

SQRT75 = math.sqrt(7.5)
EXAMPLE_6 = np.array([
    [0.5, 0, 0, 0, 0, 1.5],
    [0, 0, SQRT75, SQRT75, 3, 0],
    [0, SQRT75, 0, 4, SQRT75, 0],
    [0, SQRT75, 4, 0, SQRT75, 0],
    [0, 3, SQRT75, SQRT75, 0, 0],
    [1.5, 0, 0, 0, 0, 0.5],
])


def test_criterion_1_odd_partition_example(tmp_path):
    out = tmp_path / "q.json"
    t0 = time.perf_counter()
    code = main(["construct", "--spectrum", "9,2,-1,-2,-3,-4", "--strategy", "borobia",
                 "--partition", "-2,-3,-4|-1", "--format", "json", "--output", str(out)])
    elapsed = time.perf_counter() - t0
    payload = json.loads(out.read_text())
    Q = np.array(payload["matrix"]["entries"]).reshape(6, 6)
    keep(Q)
    err = float(np.abs(Q - EXAMPLE_6).max())
    rep = verify_realization(Q, [9, 2, -1, -2, -3, -4], 1e-9)
    ok = code == 0 and err <= 1e-10 and rep.passed and elapsed < 1.0
    record(1, ok, f"max entry error {err:.1e}, deviation {rep.spectrum_deviation:.1e}, "
                  f"{elapsed:.3f} s")
    assert code == 0
    assert err <= 1e-10
    assert rep.passed
    assert elapsed < 1.0


# ---------------------------------------------------------------------------
# 2. Seven-by-seven example with prescribed Perron roots per block
# ---------------------------------------------------------------------------

G, H = (3 + math.sqrt(5)) / 2, (3 - math.sqrt(5)) / 2
A1 = [[0, 8], [8, 0]]
A2 = [[0, G, H, H, G],
      [G, 0, G, H, H],
      [H, G, 0, G, H],
      [H, H, G, 0, G],
      [G, H, H, G, 0]]
BLOCKS_7 = [([9, -8], 8, A1), ([5, 1, 1, -4, -4], 6, A2)]
SPEC_7 = [9, 5, 1, 1, -4, -4, -8]


def printed_qhat():
    Q = np.zeros((7, 7))
    Q[0, 6] = Q[6, 0] = 8
    Q[1:6, 1:6] = A2
    return Q


def printed_x():
    X = np.zeros((7, 2))
    X[1:6, 0] = math.sqrt(5) / 5
    X[0, 1] = X[6, 1] = math.sqrt(2) / 2
    return X


def test_criterion_2_block_perron_example():
    qhat = nest(BisymMatrix(A1), BisymMatrix.from_array(A2))
    qhat_err = float(np.abs(np.asarray(qhat) - printed_qhat()).max())
    X = np.column_stack([perron_pair(BisymMatrix.from_array(A2))[1], np.zeros(5)])
    X = np.vstack([np.zeros((1, 2)), X, np.zeros((1, 2))])
    X[[0, 6], 1] = perron_pair(BisymMatrix(A1))[1]
    x_err = float(np.abs(X - printed_x()).max())

    Q, cert = construct_soto(SPEC_7, BLOCKS_7)
    keep(Q)
    B = cert.params["B"]
    b_err = float(np.abs(np.array(B) - [[8, math.sqrt(3)], [math.sqrt(3), 6]]).max())
    rep = verify_realization(Q, SPEC_7, 1e-9)
    gap = spectrum_gap(Q, SPEC_7)

    # the printed coupling matrix has the wrong spectrum
    printed_B = np.array([[8.0, 2.0], [2.0, 6.0]])
    b_eigs = oracle_eigvals(printed_B)
    b_dev = float(np.abs(b_eigs - [9, 5]).max())
    with pytest.raises(Exception):
        construct_soto(SPEC_7, BLOCKS_7, B=printed_B)
    forced = rado_update(qhat, printed_x(), printed_B[::-1, ::-1], np.array([6.0, 8.0]))
    forced_dev = spectrum_gap(forced, SPEC_7)

    ok = (qhat_err <= 1e-15 and x_err <= 1e-15 and b_err <= 1e-12 and rep.passed
          and gap <= 1e-9 and b_dev > 0.23 and forced_dev > 0.23)
    record(2, ok, f"Qhat err {qhat_err:.1e}, X err {x_err:.1e}, solved B off-diagonal "
                  f"{B[0][1]:.6f}, deviation {rep.spectrum_deviation:.1e}; printed B eigenvalues "
                  f"{b_eigs[0]:.4f}, {b_eigs[1]:.4f} (known fail, deviation {b_dev:.3f})")
    assert qhat_err <= 1e-15 and x_err <= 1e-15
    assert b_err <= 1e-12
    assert rep.passed and gap <= 1e-9
    assert np.allclose(b_eigs, [7 + math.sqrt(5), 7 - math.sqrt(5)], atol=1e-12)
    assert b_dev > 0.23 and forced_dev > 0.23


# ---------------------------------------------------------------------------
# 3. A symmetric-realizable list with no bisymmetric realization
# ---------------------------------------------------------------------------

def sniep_witness():
    r6 = math.sqrt(6)
    W = np.zeros((6, 6))
    W[:3, :3] = [[0, 3, 3], [3, 0, 3], [3, 3, 0]]
    W[3:, 3:] = [[0, r6, 4], [r6, 0, r6], [4, r6, 0]]
    return W


def test_criterion_3_counterexample_gate():
    spec = [6, 6, -2, -3, -3, -4]
    with pytest.raises(InfeasibleError) as info:
        construct_auto(spec)
    verdicts_false = not any(v.holds for v in info.value.verdicts)
    code = main(["construct", "--spectrum", "6,6,-2,-3,-3,-4"])

    W = sniep_witness()
    sym_ok = np.array_equal(W, W.T) and W.min() >= 0
    gap = spectrum_gap(W, spec)
    with pytest.raises(StructuralError):
        BisymMatrix(W)
    with pytest.raises(StructuralError):
        BisymMatrix.from_array(W)
    rejected = not verify_realization(W, spec, 1e-8).passed

    ok = verdicts_false and code == 2 and sym_ok and gap <= 1e-8 and rejected
    record(3, ok, f"infeasible (exit {code}); witness symmetric spectrum gap {gap:.1e}, "
                  f"rejected as bisymmetric")
    assert verdicts_false and code == 2
    assert sym_ok and gap <= 1e-8 and rejected


# ---------------------------------------------------------------------------
# 4. Random lists with one nonnegative entry
# ---------------------------------------------------------------------------

def suleimanova_lists(count, seed=4):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 41))
        tail = -rng.uniform(0, 10, n - 1)
        if n > 1 and rng.random() < 0.2:
            tail[rng.integers(0, n - 1)] = 0.0
        slack = rng.uniform(0, 5) if rng.random() < 0.8 else 0.0
        yield [float(-tail.sum() + slack)] + tail.tolist()


def test_criterion_4_suleimanova_suite():
    t0 = time.perf_counter()
    good = 0
    worst = 0.0
    lists = list(suleimanova_lists(1000))
    for spec in lists:
        Q, _ = construct_suleimanova(spec)
        keep(Q)
        rep = verify_realization(Q, spec, 1e-8)
        worst = max(worst, spectrum_gap(Q, spec))
        good += rep.passed and worst <= 1e-8
    elapsed = time.perf_counter() - t0
    ok = good == len(lists) and elapsed < 30
    record(4, ok, f"{good}/{len(lists)} verified, worst oracle gap {worst:.1e}, {elapsed:.1f} s")
    assert good == len(lists)
    assert elapsed < 30


# ---------------------------------------------------------------------------
# 5. Exhaustive integer grid, order four
# ---------------------------------------------------------------------------

def small_grid():
    seen = set()
    for combo in itertools.product(range(-3, 4), repeat=4):
        lam = tuple(sorted(combo, reverse=True))
        if lam in seen:
            continue
        seen.add(lam)
        if lam[0] >= abs(lam[3]) and sum(lam) >= 0:
            yield list(lam)


def test_criterion_5_small_grid():
    cases = list(small_grid())
    good, worst = 0, 0.0
    for spec in cases:
        Q, _ = construct_small(spec)
        keep(Q)
        rep = verify_realization(Q, spec, 1e-9)
        gap = spectrum_gap(Q, spec)
        worst = max(worst, gap)
        good += rep.passed and gap <= 1e-9
    ok = good == len(cases)
    record(5, ok, f"{good}/{len(cases)} grid lists verified, worst oracle gap {worst:.1e}")
    assert ok


# ---------------------------------------------------------------------------
# 6. Positive perturbation of arbitrary nonnegative bisymmetric matrices
# ---------------------------------------------------------------------------

def random_bisym(rng):
    n = int(rng.integers(1, 11))
    a = rng.uniform(0, 3, (n, n))
    mask = rng.random((n, n)) < rng.uniform(0.2, 1.0)
    a = np.where(mask, a, 0.0)
    if n > 1 and rng.random() < 0.3:
        # decouple the outer layer from the rest: reducible by construction
        a[0, 1:n - 1] = 0
        a[1:n - 1, 0] = 0
    if rng.random() < 0.1:
        a = np.zeros((n, n))
    return BisymMatrix.mirrored(a)


def test_criterion_6_positive_suite():
    rng = np.random.default_rng(6)
    good, worst, min_seen = 0, 0.0, math.inf
    for _ in range(300):
        Q = random_bisym(rng)
        eps = float(rng.uniform(1e-3, 2.0))
        lam = oracle_eigvals(Q)
        target = np.concatenate([[lam[0] + eps], lam[1:]])
        P, _ = positify(Q, eps)
        keep(P)
        gap = spectrum_gap(P, target)
        mn = float(np.asarray(P).min())
        worst, min_seen = max(worst, gap), min(min_seen, mn)
        good += mn > 0 and gap <= 1e-8
    ok = good == 300
    record(6, ok, f"{good}/300 positive with shifted spectrum, worst gap {worst:.1e}, "
                  f"smallest entry {min_seen:.1e}")
    assert ok


# ---------------------------------------------------------------------------
# 7. Prescribed-diagonal fixtures
# ---------------------------------------------------------------------------

R2, R3 = math.sqrt(2), math.sqrt(3)
DIAG3 = np.array([[1, R2, 0], [R2, 4, R2], [0, R2, 1]])
DIAG4 = np.array([[1, R3, R3, 0], [R3, 0, 2, R3], [R3, 2, 0, R3], [0, R3, R3, 1]])


def test_criterion_7_diagonal_fixtures():
    Q3 = keep(construct_diag3([5, 1, 0], 4, 1))
    Q4, _ = construct_diag_even(DiagonalSpec([5, 1, -2, -2], [0, 1]))
    keep(Q4)
    e3 = float(np.abs(np.asarray(Q3) - DIAG3).max())
    e4 = float(np.abs(np.asarray(Q4) - DIAG4).max())
    r3 = verify_realization(Q3, [5, 1, 0], 1e-9)
    r4 = verify_realization(Q4, [5, 1, -2, -2], 1e-9)
    g = max(spectrum_gap(Q3, [5, 1, 0]), spectrum_gap(Q4, [5, 1, -2, -2]))
    ok = e3 <= 1e-12 and e4 <= 1e-12 and r3.passed and r4.passed and g <= 1e-9
    record(7, ok, f"order 3 err {e3:.1e}, order 4 err {e4:.1e}, oracle gap {g:.1e}")
    assert ok


# ---------------------------------------------------------------------------
# 8. Bit-exact structure of everything above
# ---------------------------------------------------------------------------

def test_criterion_8_exact_structure():
    assert PRODUCED, "criterion 8 runs after the others"
    exact = sum(is_exactly_bisymmetric(a) for a in PRODUCED)
    ok = exact == len(PRODUCED)
    record(8, ok, f"{exact}/{len(PRODUCED)} outputs exactly symmetric and persymmetric")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "--rootdir", str(Path(__file__).parents[1])]))
