"""Spectrum to matrix constructors, each returning ``(BisymMatrix, Certificate)``.

The builders follow the inductive proofs: small orders are written down
directly, Suleimanova lists peel two negatives per glue, and partition lists
are assembled from Suleimanova pieces by nests, centre insertions and
Perron transfers.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from . import conditions as cond
from . import glue
from .certificate import Certificate, leaf, wrap
from .core import BisymMatrix, Spectrum, perron_pair, verify_realization
from .errors import (CapabilityError, CapacityError, InfeasibleError, NumericalError,
                     ParameterError)

CONSTRUCT_TOL = 1e-8


def _scaled_tol(s: Spectrum, tol: float) -> float:
    return tol * max(1.0, max((abs(v) for v in s), default=0.0))


def _verified(Q: BisymMatrix, s: Spectrum, tol: float = CONSTRUCT_TOL) -> BisymMatrix:
    rep = verify_realization(Q, s, _scaled_tol(s, tol))
    if not rep.passed:
        raise NumericalError(f"constructed matrix failed verification: spectrum deviation "
                             f"{rep.spectrum_deviation:.3e}, min entry {rep.min_entry:.3e}")
    return Q


def _nonneg(x: float, s) -> float:
    """Clamp a value that should be nonnegative but picked up rounding error."""
    if x < 0 and x >= -cond.sum_tol(s):
        return 0.0
    return x


def _scalar(x: float) -> tuple:
    Q = BisymMatrix([[x]])
    return Q, leaf(Q)


def _pair(li: float, lj: float) -> tuple:
    return glue.pair_shell(li, lj), Certificate("pair-shell", {"lam_i": li, "lam_j": lj})


def _glue_ab(A, B, a, b) -> tuple:
    (QA, cA), (QB, cB) = A, B
    Q = glue.glue_ab(QA, QB, a, b)
    p = glue.glue_ab_params(perron_pair(QA)[0], perron_pair(QB)[0], a, b)
    return Q, Certificate("glue-ab", {"a": a, "b": b, "rho": p.rho, "xi": p.xi}, (cA, cB))


def _nest(outer, inner) -> tuple:
    (Qo, co), (Qi, ci) = outer, inner
    return glue.nest(Qo, Qi), Certificate("nest", {}, (co, ci))


def _pad(li: float, lj: float, inner) -> tuple:
    Qi, ci = inner
    Q = glue.nest(glue.pair_shell(li, lj), Qi)
    return Q, Certificate("diag-pad", {"lam_i": li, "lam_j": lj}, (ci,))


# ---------------------------------------------------------------------------
# Orders up to four
# ---------------------------------------------------------------------------

def _small(s: Spectrum) -> tuple:
    lam = [_nonneg(v, s) if i == 0 else v for i, v in enumerate(s.values)]
    n = len(lam)
    if n == 1:
        return _scalar(lam[0])
    if n == 2:
        return _pair(lam[0], lam[1])
    if n == 3:
        if lam[1] >= 0:
            return _nest(_pair(lam[0], lam[2]), _scalar(lam[1]))
        top = _nonneg(lam[0] + lam[1] + lam[2], s)
        return _glue_ab(_scalar(top), _scalar(0.0), lam[1], lam[2])
    if lam[1] + lam[2] >= 0:
        return _nest(_pair(lam[0], lam[3]), _pair(lam[1], lam[2]))
    top = _nonneg(lam[0] + lam[1] + lam[2], s)
    return _glue_ab(_pair(top, lam[3]), _scalar(0.0), lam[1], lam[2])


def construct_small(s, check: bool = True) -> tuple:
    """Explicit realization for orders 1 to 4.

    Requires ``lambda_0 >= |lambda_last|`` and a nonnegative sum, which are
    also necessary.
    """
    s = Spectrum.coerce(s)
    v = cond.check_small(s)
    if not v.holds:
        raise InfeasibleError(f"small-order conditions fail: {v.failed_clause}", [v])
    Q, c = _small(s)
    if check:
        _verified(Q, s)
    return Q, wrap("small-n", c, spectrum=list(s.values))


# ---------------------------------------------------------------------------
# Suleimanova lists
# ---------------------------------------------------------------------------

def _suleimanova(s: Spectrum) -> tuple:
    """Unchecked builder; ``s`` must satisfy the Suleimanova condition."""
    if len(s) <= 4:
        return _small(s)
    lam = s.values
    if lam[0] <= 0:
        Q = BisymMatrix.zeros(len(s))
        return Q, Certificate("zero", {"order": len(s)})
    # peel (lambda_1, lambda_2) off iteratively, then glue back innermost first
    steps = []
    head, rest = lam[0], list(lam[1:])
    while len(rest) + 1 > 4:
        a, b = rest[0], rest[1]
        steps.append((a, b))
        head = _nonneg(head + a + b, s)
        rest = rest[2:]
    built = _small(Spectrum([head] + rest))
    zero = _scalar(0.0)
    for a, b in reversed(steps):
        built = _glue_ab(built, zero, a, b)
    return built


def construct_suleimanova(s, check: bool = True) -> tuple:
    """Realize ``lambda_0 >= 0 >= lambda_1 >= ... `` with nonnegative sum."""
    s = Spectrum.coerce(s)
    v = cond.check_suleimanova(s)
    if not v.holds:
        raise InfeasibleError(f"Suleimanova condition fails: {v.failed_clause}", [v])
    Q, c = _suleimanova(s)
    if check:
        _verified(Q, s)
    return Q, wrap("suleimanova", c, spectrum=list(s.values))


def _sul_of(head: float, blocks) -> tuple:
    vals = [head] + [x for b in blocks for x in b]
    s = Spectrum(vals)
    if not cond.check_suleimanova(s).holds:
        raise NumericalError(f"internal Suleimanova piece {list(s.values)} fails its condition")
    return _suleimanova(s)


# ---------------------------------------------------------------------------
# Partition lists
# ---------------------------------------------------------------------------

def _merge(head: float, lam1: float, T1: float, block, reduced, notes: list) -> tuple:
    """Merge the reduced matrix with ``Sul({-T1} + block)`` so Perron roots become (head, lam1)."""
    Q1, c1 = reduced
    Q2, c2 = _sul_of(-T1, [block])
    eps_a = -(lam1 + T1)
    eps_b = head + T1
    a0 = perron_pair(Q1)[0]
    if a0 >= -T1:
        eps, first, second, choice = eps_a, (Q1, c1), (Q2, c2), "-(lambda_1+T_1)"
        alt = eps_b
    else:
        eps, first, second, choice = eps_b, (Q2, c2), (Q1, c1), "lambda_0+T_1"
        alt = eps_a
    eps = max(eps, 0.0)
    (Qa, ca), (Qb, cb) = first, second
    Q = glue.merge_transfer(Qa, Qb, eps)
    notes.append(choice)
    return Q, Certificate("merge-transfer", {"epsilon": eps, "rule": choice,
                                             "alternative_epsilon": alt}, (ca, cb))


def _borobia_le(head: float, lams: list, blocks: list, notes: list) -> tuple:
    """Regime with ``M <= S``; ``blocks`` ascending by sum, first ``M`` of odd size."""
    M, S = len(lams), len(blocks)
    if M == 0:
        return _sul_of(head, blocks)
    sums = [math.fsum(b) for b in blocks]
    if M == 1:
        lam1, T1 = lams[0], sums[0]
        if S == 1:
            Q, c = _sul_of(head, blocks)
            return glue.center_insert(Q, lam1), Certificate("center-insert", {"value": lam1}, (c,))
        if lam1 + T1 >= 0:
            return _nest(_sul_of(lam1, [blocks[0]]), _sul_of(head, blocks[1:]))
        reduced = _sul_of(head + lam1 + T1, blocks[1:])
        return _merge(head, lam1, T1, blocks[0], reduced, notes)
    for j in range(M):
        if lams[j] + sums[j] >= 0:
            inner = _borobia_le(head, lams[:j] + lams[j + 1:], blocks[:j] + blocks[j + 1:], notes)
            return _nest(_sul_of(lams[j], [blocks[j]]), inner)
    lam1, T1 = lams[0], sums[0]
    reduced = _borobia_le(head + lam1 + T1, lams[1:], blocks[1:], notes)
    return _merge(head, lam1, T1, blocks[0], reduced, notes)


def _borobia_one_less(head: float, lams: list, blocks: list, notes: list) -> tuple:
    """Regime with ``S == M - 1``; the last nonnegative entry has no partner block."""
    M, S = len(lams), len(blocks)
    if M == 1:
        return _pair(head, lams[0])
    sums = [math.fsum(b) for b in blocks]
    if M == 2:
        return _pad(lams[0], lams[1], _sul_of(head, blocks))
    for j in range(S):
        if lams[j] + sums[j] >= 0:
            inner = _borobia_one_less(head, lams[:j] + lams[j + 1:],
                                      blocks[:j] + blocks[j + 1:], notes)
            return _nest(_sul_of(lams[j], [blocks[j]]), inner)
    lam1, T1 = lams[0], sums[0]
    reduced = _borobia_one_less(head + lam1 + T1, lams[1:], blocks[1:], notes)
    return _merge(head, lam1, T1, blocks[0], reduced, notes)


def _borobia(s: Spectrum, plan: cond.PartitionPlan, notes: list) -> tuple:
    lam = s.values
    M, S = plan.M, plan.S
    head = lam[0]
    lams = list(lam[1:M + 1])
    blocks = [list(b) for b in plan.blocks]
    regime = cond.regime_of(M, S)
    if regime == "3.4":
        return regime, _borobia_le(head, lams, blocks, notes)
    if regime == "3.5":
        return regime, _borobia_one_less(head, lams, blocks, notes)
    # M > S + 1: set aside nonnegative pairs and wrap them around the core
    keep = S if (M - S) % 2 == 0 else S + 1
    core_lams, spare = lams[:keep], lams[keep:]
    if keep == S:
        built = _borobia_le(head, core_lams, blocks, notes)
    else:
        built = _borobia_one_less(head, core_lams, blocks, notes)
    for i in range(0, len(spare), 2):
        built = _pad(spare[i], spare[i + 1], built)
    return regime, built


def construct_borobia(s, p=None, check: bool = True) -> tuple:
    """Realize a list satisfying the odd-partition condition for partition ``p``.

    ``p`` may be a :class:`PartitionPlan`, a list of blocks, or ``None`` to
    search for a witness.
    """
    s = Spectrum.coerce(s)
    if p is None:
        plan = cond.search_partition(s)
        if plan is None:
            v = cond.ConditionVerdict("borobia-bisym", False,
                                      failed_clause="no partition satisfies the clauses")
            raise InfeasibleError("no odd-partition witness found", [v])
    else:
        plan = cond.make_plan(s, p.blocks if isinstance(p, cond.PartitionPlan) else p)
    v = cond.check_borobia_bisym(s, plan)
    if not v.holds:
        raise InfeasibleError(f"partition condition fails: {v.failed_clause}", [v])
    notes: list = []
    regime, (Q, c) = _borobia(s, plan, notes)
    if check:
        _verified(Q, s)
    return Q, wrap(f"borobia-{regime}", c, spectrum=list(s.values),
                   partition=plan.as_lists(), M=plan.M, K=list(plan.K))


# ---------------------------------------------------------------------------
# Prescribed Perron roots per block plus a rank-S update
# ---------------------------------------------------------------------------

def _parse_soto_block(entry):
    if isinstance(entry, dict):
        return list(entry["values"]), float(entry["omega"]), entry.get("matrix")
    if len(entry) == 2:
        return list(entry[0]), float(entry[1]), None
    return list(entry[0]), float(entry[1]), entry[2]


def soto_b_matrix(leads: Sequence[float], omegas: Sequence[float]) -> np.ndarray:
    """Nonnegative symmetric ``B`` with eigenvalues ``leads`` and diagonal ``omegas`` (S <= 2)."""
    S = len(leads)
    if S == 1:
        if abs(leads[0] - omegas[0]) > cond.sum_tol([leads[0], omegas[0]]):
            raise InfeasibleError(f"single block needs omega = {leads[0]} (got {omegas[0]})")
        return np.array([[float(omegas[0])]])
    if S == 2:
        return glue.solve_2x2_diag(leads[0], leads[1], omegas[0], omegas[1])
    raise CapabilityError(f"cannot synthesise a {S}x{S} matrix with prescribed diagonal "
                          "and spectrum; pass B explicitly")


def construct_soto(s, blocks, B=None, check: bool = True) -> tuple:
    """Realize ``s`` from blocks with prescribed Perron roots and a coupling matrix ``B``.

    ``blocks`` is a list of ``(values, omega)`` or ``(values, omega, matrix)``:
    ``values`` is the part ``Lambda_j`` of ``s`` and ``omega`` replaces its
    largest entry to give the block spectrum ``Gamma_j``.  ``B`` must be
    symmetric nonnegative, with eigenvalues the largest entries of the parts
    and diagonal ``omega_1..omega_S``; it is solved for when ``S <= 2``.
    The odd-order block, if any, sits at the centre, and the others wrap it in
    index order.
    """
    s = Spectrum.coerce(s)
    parsed = [_parse_soto_block(b) for b in blocks]
    S = len(parsed)
    if S == 0:
        raise ParameterError("need at least one block")
    flat = sorted((x for vals, _, _ in parsed for x in vals), reverse=True)
    if flat != list(s.values):
        raise ParameterError(f"blocks {[p[0] for p in parsed]} do not partition {list(s.values)}")
    odd = [j for j, (vals, _, _) in enumerate(parsed) if len(vals) % 2]
    if len(odd) > 1:
        raise ParameterError(f"at most one block may have odd size (got {len(odd)})")
    tol = cond.sum_tol(s)
    leads = [max(vals) for vals, _, _ in parsed]
    omegas = [om for _, om, _ in parsed]
    if abs(math.fsum(omegas) - math.fsum(leads)) > tol * max(1, S):
        raise InfeasibleError(f"trace law fails: sum of omegas {math.fsum(omegas):.6g} != sum of "
                              f"block leads {math.fsum(leads):.6g}")
    mats = []
    for j, (vals, om, mat) in enumerate(parsed):
        vals = sorted(vals, reverse=True)
        if vals[0] < 0:
            raise ParameterError(f"block {j + 1} has no nonnegative entry")
        if not (0 <= om <= s[0] + cond.sum_tol(s)):
            raise ParameterError(f"omega_{j + 1} = {om} must lie in [0, lambda_0]")
        gamma = Spectrum([om] + vals[1:])
        if gamma[0] > om + cond.sum_tol(gamma):
            raise ParameterError(f"omega_{j + 1} = {om} is not the largest entry of its block "
                                 f"spectrum {list(gamma.values)}")
        if mat is not None:
            Q = BisymMatrix.from_array(mat)
            rep = verify_realization(Q, gamma, _scaled_tol(gamma, CONSTRUCT_TOL))
            if not rep.passed:
                raise ParameterError(f"supplied matrix for block {j + 1} does not realize "
                                     f"{list(gamma.values)} (deviation {rep.spectrum_deviation:.3e})")
            c = leaf(Q)
        else:
            Q, c = construct_auto(gamma)
        mats.append((Q, c))
    if B is None:
        Bm = soto_b_matrix(leads, omegas)
    else:
        Bm = np.asarray(B, dtype=float)
        if Bm.shape != (S, S):
            raise ParameterError(f"B must be {S}x{S}")
        if np.abs(np.diag(Bm) - omegas).max() > tol:
            raise ParameterError(f"diagonal of B {np.diag(Bm).tolist()} != omegas {omegas}")
        if Bm.min() < 0:
            raise ParameterError("B must be nonnegative")
    order = odd + [j for j in range(S) if j not in odd]
    Q, c = mats[order[0]]
    pos = {order[0]: np.arange(Q.order)}
    for j in order[1:]:
        Qo, co = mats[j]
        h = Qo.order // 2
        k = Q.order
        for key in pos:
            pos[key] = pos[key] + h
        pos[j] = np.concatenate([np.arange(h), np.arange(h + k, 2 * h + k)])
        Q, c = glue.nest(Qo, Q), Certificate("nest", {}, (co, c))
    N = Q.order
    # columns x_S .. x_1 with Omega = diag(omega_S .. omega_1) and B reversed to match
    X = np.zeros((N, S))
    for col, j in enumerate(reversed(range(S))):
        X[pos[j], col] = perron_pair(mats[j][0])[1]
    omega_rev = np.array(omegas[::-1])
    B_rev = Bm[::-1, ::-1]
    out = glue.rado_update(Q, X, B_rev, omega_rev)
    cert = Certificate("rado-update", {"X": X, "B": B_rev, "omega": omega_rev}, (c,))
    if check:
        _verified(out, s)
    return out, wrap("soto-3.8", cert, spectrum=list(s.values),
                     blocks=[[list(v), om] for v, om, _ in parsed], B=Bm)


# ---------------------------------------------------------------------------
# Strategy cascade
# ---------------------------------------------------------------------------

STRATEGIES = ("auto", "small", "suleimanova", "borobia")


def construct_auto(s, max_negatives: int = cond.MAX_NEGATIVES) -> tuple:
    """Try small orders, then Suleimanova, then a partition search; always verifies."""
    s = Spectrum.coerce(s)
    tried = []
    if len(s) <= 4:
        v = cond.check_small(s)
        tried.append(v)
        if v.holds:
            return construct_small(s)
    v = cond.check_suleimanova(s)
    tried.append(v)
    if v.holds:
        return construct_suleimanova(s)
    try:
        plan = cond.search_partition(s, max_negatives)
    except CapacityError as exc:
        tried.append(cond.ConditionVerdict("borobia-bisym", False, failed_clause=str(exc)))
        plan = None
    else:
        if plan is not None:
            return construct_borobia(s, plan)
    names = {t.name for t in tried}
    extra = [x for x in cond.evaluate_all(s, max_negatives) if x.name not in names]
    report = tried + [x for x in extra if x.name not in cond.REFERENCE_ONLY]
    reference = [x for x in extra if x.name in cond.REFERENCE_ONLY]
    raise InfeasibleError(f"no supported sufficient condition holds for {list(s.values)}",
                          report, reference)


def construct(s, strategy: str = "auto", partition=None) -> tuple:
    """Dispatch on a strategy name (``auto``, ``small``, ``suleimanova``, ``borobia``)."""
    if strategy == "auto":
        if partition is not None:
            return construct_borobia(s, partition)
        return construct_auto(s)
    if strategy == "small":
        return construct_small(s)
    if strategy == "suleimanova":
        return construct_suleimanova(s)
    if strategy == "borobia":
        return construct_borobia(s, partition)
    raise ParameterError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
