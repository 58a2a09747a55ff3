"""Sufficient conditions on a real list, and witness search for the partition-based ones.

Index conventions.  A spectrum is stored sorted, ``s[0] >= s[1] >= ...``;
``s[0]`` is the would-be Perron root ``lambda_0``.  ``M`` counts the entries
after ``s[0]`` that are ``>= 0`` (zeros count as nonnegative), so the
nonnegative prefix is ``s[1..M]`` and the negative tail is ``s[M+1:]``.
Partition blocks ``Lambda_1..Lambda_S`` of the tail are kept with their sums
ascending, ``T_1 <= T_2 <= ... <= T_S``; ``lambda_i`` is paired with ``T_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .core import Spectrum
from .errors import CapacityError, ParameterError

SUM_TOL = 1e-12
MAX_NEGATIVES = 12
# conditions for symmetric realizability that do not imply a bisymmetric one
REFERENCE_ONLY = frozenset({"kellogg", "borobia"})

SOTO_ODD_READING = ("at most one block of the partition has odd size "
                    "(that block sits at the centre of the nest)")


def sum_tol(values) -> float:
    """Absolute slack for ``>= 0`` tests on sums of ``values``."""
    scale = max((abs(v) for v in values), default=0.0)
    return SUM_TOL * max(1.0, scale)


def nonnegative_count(s: Spectrum) -> int:
    return sum(1 for v in s.values[1:] if v >= 0)


@dataclass(frozen=True)
class PartitionPlan:
    """An ordered partition of a spectrum's negative tail.

    ``blocks[k]`` is ``Lambda_{k+1}``; ``sums`` are ascending.  ``M`` and
    ``K`` (1-based indices ``i <= min(M, S)`` with ``lambda_i + T_i < 0``)
    are filled in against the spectrum the plan was built for.
    """

    blocks: tuple
    sums: tuple
    M: int
    K: tuple

    @property
    def S(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple:
        return tuple(len(b) for b in self.blocks)

    def as_lists(self) -> list:
        return [list(b) for b in self.blocks]


def canonical_blocks(blocks) -> tuple:
    """Sort each block descending and order blocks by (sum, even size, contents)."""
    norm = [tuple(sorted((float(v) for v in b), reverse=True)) for b in blocks]
    if any(len(b) == 0 for b in norm):
        raise ParameterError("partition blocks must be non-empty")
    norm.sort(key=lambda b: (math.fsum(b), len(b) % 2 == 0, b))
    return tuple(norm)


def make_plan(s, blocks) -> PartitionPlan:
    """Validate ``blocks`` against the negative tail of ``s`` and fix their order."""
    s = Spectrum.coerce(s)
    M = nonnegative_count(s)
    tail = sorted(s.values[M + 1:], reverse=True)
    norm = canonical_blocks(blocks)
    flat = sorted((v for b in norm for v in b), reverse=True)
    if flat != tail:
        raise ParameterError(f"partition {[list(b) for b in norm]} is not a partition of "
                             f"the negative tail {tail}")
    sums = tuple(math.fsum(b) for b in norm)
    K = tuple(i for i in range(1, min(M, len(norm)) + 1)
              if s[i] + sums[i - 1] < 0)
    return PartitionPlan(norm, sums, M, K)


@dataclass
class ConditionVerdict:
    name: str
    holds: bool
    witness: object = None
    failed_clause: Optional[str] = None
    regime: Optional[str] = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        w = self.witness
        if isinstance(w, PartitionPlan):
            w = {"blocks": w.as_lists(), "sums": list(w.sums), "M": w.M, "K": list(w.K)}
        return {"name": self.name, "holds": self.holds, "witness": w,
                "failed_clause": self.failed_clause, "regime": self.regime,
                "details": self.details}


# ---------------------------------------------------------------------------
# Classical conditions
# ---------------------------------------------------------------------------

def check_small(s) -> ConditionVerdict:
    """Orders up to 4: ``lambda_0 >= |lambda_last|`` and a nonnegative sum suffice."""
    s = Spectrum.coerce(s)
    tol = sum_tol(s)
    if len(s) > 4:
        return ConditionVerdict("small-n", False, failed_clause=f"order {len(s)} > 4")
    if s[0] < abs(s[-1]) - tol:
        return ConditionVerdict("small-n", False, failed_clause="lambda_0 < |lambda_last|")
    if s.total < -tol:
        return ConditionVerdict("small-n", False, failed_clause=f"sum {s.total:.6g} < 0")
    return ConditionVerdict("small-n", True, details={"sum": s.total})


def check_suleimanova(s) -> ConditionVerdict:
    """``lambda_0 >= 0 >= lambda_1 >= ...`` and a nonnegative total."""
    s = Spectrum.coerce(s)
    tol = sum_tol(s)
    if len(s) > 1 and s[1] > 0:
        return ConditionVerdict("suleimanova", False,
                                failed_clause=f"second entry {s[1]:.6g} is positive")
    if s.total < -tol:
        return ConditionVerdict("suleimanova", False, failed_clause=f"sum {s.total:.6g} < 0",
                                details={"sum": s.total})
    return ConditionVerdict("suleimanova", True, details={"sum": s.total})


def kellogg_clauses(s: Spectrum):
    """``(M, K, [(k, value) per first clause], second clause value)``; K is 1-based."""
    n = len(s) - 1
    M = nonnegative_count(s)
    lam = s.values
    K = [i for i in range(1, min(M, n - M) + 1) if lam[i] + lam[n - i + 1] < 0]
    first = []
    for k in K:
        acc = lam[0] + math.fsum(lam[i] + lam[n - i + 1] for i in K if i < k)
        first.append((k, acc + lam[n - k + 1]))
    second = (lam[0] + math.fsum(lam[i] + lam[n - i + 1] for i in K)
              + math.fsum(lam[M + 1:n - M + 1]))
    return M, K, first, second


def check_kellogg(s) -> ConditionVerdict:
    """Kellogg's two inequality families (reference condition for real/symmetric realizability)."""
    s = Spectrum.coerce(s)
    tol = sum_tol(s)
    M, K, first, second = kellogg_clauses(s)
    details = {"M": M, "K": K, "first": [v for _, v in first], "second": second}
    for k, v in first:
        if v < -tol:
            return ConditionVerdict("kellogg", False, failed_clause=f"first clause k={k}: {v:.6g} < 0",
                                    details=details)
    if second < -tol:
        return ConditionVerdict("kellogg", False, failed_clause=f"second clause {second:.6g} < 0",
                                details=details)
    return ConditionVerdict("kellogg", True, witness={"M": M, "K": K}, details=details)


# ---------------------------------------------------------------------------
# Partition conditions
# ---------------------------------------------------------------------------

def borobia_bisym_values(lam0: float, lams: Sequence[float], sums: Sequence[float]):
    """Clause values for the odd-partition family.

    ``lams`` are ``lambda_1..lambda_M``, ``sums`` the ascending ``T_1..T_S``.
    Returns ``(K, [(k, clause1_k)], clause2)`` with 1-based ``K``.
    """
    M, S = len(lams), len(sums)
    m = min(M, S)
    K = [i for i in range(1, m + 1) if lams[i - 1] + sums[i - 1] < 0]
    first = []
    for k in K:
        acc = lam0 + math.fsum(lams[i - 1] + sums[i - 1] for i in K if i < k)
        first.append((k, acc + sums[k - 1]))
    second = (lam0 + math.fsum(lams[i - 1] + sums[i - 1] for i in K)
              + math.fsum(sums[M:]))
    return K, first, second


def regime_of(M: int, S: int) -> str:
    if M <= S:
        return "3.4"
    if S == M - 1:
        return "3.5"
    return "3.6"


def _evaluate_bisym(s: Spectrum, plan: PartitionPlan, strict: bool) -> ConditionVerdict:
    M, S = plan.M, plan.S
    regime = regime_of(M, S)
    name = "borobia-bisym-strict" if strict else "borobia-bisym"
    m = min(M, S)
    for j in range(1, m + 1):
        if plan.sizes[j - 1] % 2 == 0:
            return ConditionVerdict(name, False, regime=regime,
                                    failed_clause=f"|Lambda_{j}| = {plan.sizes[j - 1]} is even "
                                                  f"(must be odd for j <= min(M, S) = {m})")
    K, first, second = borobia_bisym_values(s[0], s.values[1:M + 1], plan.sums)
    tol = sum_tol(s)
    details = {"M": M, "S": S, "K": K, "first": [v for _, v in first], "second": second}

    def bad(v):
        return v <= tol if strict else v < -tol

    for k, v in first:
        if bad(v):
            return ConditionVerdict(name, False, regime=regime, details=details,
                                    failed_clause=f"clause (1) at k={k}: {v:.6g}")
    if bad(second):
        return ConditionVerdict(name, False, regime=regime, details=details,
                                failed_clause=f"clause (2): {second:.6g}")
    return ConditionVerdict(name, True, witness=plan, regime=regime, details=details)


def check_borobia_bisym(s, p, strict: bool = False) -> ConditionVerdict:
    """Odd-partition Borobia condition for bisymmetric realizability.

    ``p`` is a :class:`PartitionPlan` or a plain list of blocks.  The verdict
    names the regime: ``"3.4"`` (``M <= S``), ``"3.5"`` (``S == M - 1``) or
    ``"3.6"`` (``S < M - 1``).  ``strict=True`` asks for the strict
    inequalities needed by the positive variant.
    """
    s = Spectrum.coerce(s)
    plan = p if isinstance(p, PartitionPlan) else make_plan(s, p)
    if isinstance(p, PartitionPlan):
        plan = make_plan(s, p.blocks)
    return _evaluate_bisym(s, plan, strict)


def check_borobia(s, p) -> ConditionVerdict:
    """Borobia's original condition: Kellogg applied to ``lambda_0..lambda_M, T_S..T_1``.

    Reported for reference only; it does not imply bisymmetric realizability.
    """
    s = Spectrum.coerce(s)
    plan = make_plan(s, p.blocks if isinstance(p, PartitionPlan) else p)
    M = plan.M
    if plan.S and M >= 1 and not s[M] > plan.sums[-1]:
        return ConditionVerdict("borobia", False, failed_clause="lambda_M <= T_S")
    merged = Spectrum(list(s.values[:M + 1]) + list(plan.sums))
    kv = check_kellogg(merged)
    return ConditionVerdict("borobia", kv.holds, witness=plan if kv.holds else None,
                            failed_clause=kv.failed_clause, details=kv.details)


def set_partitions(n: int) -> Iterator[list]:
    """Restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield []
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i])
    while True:
        yield a
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        nb = max(b[i], a[i] + 1)
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = nb


def _blocks_from_rgs(values, rgs):
    blocks = [[] for _ in range(max(rgs) + 1)] if rgs else []
    for v, k in zip(values, rgs):
        blocks[k].append(v)
    return blocks


def search_partition(s, max_negatives: int = MAX_NEGATIVES, strict: bool = False,
                     condition=None) -> Optional[PartitionPlan]:
    """First partition (restricted-growth-string order over the tail) passing ``condition``.

    ``condition`` defaults to the odd-partition Borobia check.  Deterministic.
    """
    s = Spectrum.coerce(s)
    M = nonnegative_count(s)
    tail = list(s.values[M + 1:])
    if len(tail) > max_negatives:
        raise CapacityError(f"{len(tail)} negative entries exceed the search cap of "
                            f"{max_negatives}; supply a partition explicitly")
    need_odd = condition is None
    if condition is None:
        def condition(plan):
            return _evaluate_bisym(s, plan, strict).holds
    lam = s.values
    for rgs in set_partitions(len(tail)):
        blocks = _blocks_from_rgs(tail, rgs)
        # cheap necessary test before sorting: enough odd blocks for the low indices
        if need_odd and M and sum(len(b) % 2 for b in blocks) < min(M, len(blocks)):
            continue
        norm = canonical_blocks(blocks)
        sums = tuple(math.fsum(b) for b in norm)
        K = tuple(i for i in range(1, min(M, len(norm)) + 1) if lam[i] + sums[i - 1] < 0)
        plan = PartitionPlan(norm, sums, M, K)
        if condition(plan):
            return plan
    return None


def search_borobia(s, max_negatives: int = MAX_NEGATIVES) -> Optional[PartitionPlan]:
    s = Spectrum.coerce(s)
    return search_partition(s, max_negatives,
                            condition=lambda plan: check_borobia(s, plan).holds)


def evaluate_all(s, max_negatives: int = MAX_NEGATIVES) -> list:
    """Every condition this library knows, evaluated on ``s`` (partition ones via search)."""
    s = Spectrum.coerce(s)
    out = [check_small(s), check_suleimanova(s), check_kellogg(s)]
    M = nonnegative_count(s)
    n_neg = len(s) - 1 - M
    if n_neg > max_negatives:
        out.append(ConditionVerdict("borobia-bisym", False,
                                    failed_clause=f"search skipped: {n_neg} negatives > cap"))
        return out
    plan = search_partition(s, max_negatives)
    out.append(ConditionVerdict("borobia-bisym", plan is not None, witness=plan,
                                regime=regime_of(M, plan.S) if plan else None,
                                failed_clause=None if plan else "no partition satisfies the clauses"))
    ref = search_borobia(s, max_negatives)
    out.append(ConditionVerdict("borobia", ref is not None, witness=ref,
                                failed_clause=None if ref else "no partition satisfies Kellogg",
                                details={"note": "reference only; not sufficient for bisymmetric"}))
    return out
