"""Strictly positive realizations: raise the Perron root by a positive symmetric perturbation.

:func:`fiedler_perturb` builds a positive symmetric ``R`` with
``eig(S + R) = {lambda_0 + eps} + tail(S)`` by merging the irreducible
components of ``S`` pairwise.  :func:`positify` applies it to the plus block
of a bisymmetric matrix, which leaves the minus block and hence the rest of
the spectrum alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import conditions as cond
from .certificate import Certificate, leaf, register
from .constructors import CONSTRUCT_TOL, _borobia, _verified
from .core import (SQRT2, BisymMatrix, CantoniButlerForm, Spectrum, cb_compose, cb_parts,
                   irreducible_components, mirror_lower, symmetric_eigen, top_eigvec_2x2)
from .errors import InfeasibleError, NumericalError, ParameterError


@dataclass(frozen=True)
class MergeStep:
    component: tuple
    root: float
    delta: float
    rho: float


@dataclass(frozen=True)
class PerturbationPlan:
    epsilon: float
    components: tuple   # index tuples, merge order
    roots: tuple        # Perron roots, descending
    steps: tuple        # MergeStep per merge after the first component

    @property
    def step_epsilon(self) -> float:
        k = len(self.components)
        return self.epsilon if k == 1 else self.epsilon / (k - 1)


def _components_by_root(S: np.ndarray):
    comps = []
    for idx in irreducible_components(S):
        dec = symmetric_eigen(S[np.ix_(idx, idx)])
        y = dec.eigenvectors[:, 0]
        y = -y if y.sum() < 0 else y
        if y.min() <= 0:
            raise NumericalError("Perron vector of an irreducible component is not strictly positive")
        v = np.zeros(S.shape[0])
        v[idx] = y
        comps.append((float(dec.eigenvalues[0]), int(idx[0]), tuple(int(i) for i in idx), v))
    comps.sort(key=lambda c: (-c[0], c[1]))
    return comps


def perturbation_plan(S, epsilon: float):
    """The plan and the matrix ``R`` for :func:`fiedler_perturb`."""
    S = np.asarray(S, dtype=float)
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive (got {epsilon})")
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ParameterError("S must be square")
    if not np.array_equal(S, S.T):
        raise ParameterError("S must be exactly symmetric")
    if S.min() < 0:
        raise ParameterError("S must be nonnegative")
    comps = _components_by_root(S)
    root, _, idx, u = comps[0]
    if len(comps) == 1:
        R = epsilon * np.outer(u, u)
        return PerturbationPlan(epsilon, (idx,), (root,), ()), mirror_lower(R)
    step = epsilon / (len(comps) - 1)
    delta = step / 2.0
    R = np.zeros_like(S)
    steps = []
    mu = root
    for mu2, _, idx2, v in comps[1:]:
        rho = math.sqrt(delta * (mu + step - mu2 - delta))
        R += (step - delta) * np.outer(u, u) + delta * np.outer(v, v) \
            + rho * (np.outer(u, v) + np.outer(v, u))
        _, (cu, cv) = top_eigvec_2x2(mu + step - delta, rho, mu2 + delta)
        u = cu * u + cv * v
        mu = mu + step
        steps.append(MergeStep(idx2, mu2, delta, rho))
    plan = PerturbationPlan(epsilon, tuple(c[2] for c in comps), tuple(c[0] for c in comps),
                            tuple(steps))
    return plan, mirror_lower(R)


def fiedler_perturb(S, epsilon: float) -> np.ndarray:
    """Positive symmetric ``R`` such that ``S + R`` has Perron root raised by ``epsilon``.

    The remaining eigenvalues of ``S`` are unchanged.
    """
    R = perturbation_plan(S, epsilon)[1]
    if R.min() <= 0:
        raise NumericalError(f"perturbation has a non-positive entry {R.min():.3e}")
    return R


def positify(Q, epsilon: float, source: Certificate = None) -> tuple:
    """Strictly positive bisymmetric matrix with the Perron root of ``Q`` raised by ``epsilon``.

    Returns ``(matrix, certificate)``; the certificate records the added
    positive part ``P`` so that ``Q + P`` is the result.  ``source`` is the
    certificate of ``Q`` if it has one.
    """
    Q = Q if isinstance(Q, BisymMatrix) else BisymMatrix(Q)
    Qp = _positify(Q, epsilon)
    P = Qp.entries - Q.entries
    cert = Certificate("positive", {"epsilon": epsilon, "P": P}, (source or leaf(Q),))
    return Qp, cert


def _positify(Q: BisymMatrix, epsilon: float) -> BisymMatrix:
    f = cb_parts(Q.entries)
    R = fiedler_perturb(f.plus_block, epsilon)
    if f.x is None:
        A = f.A + 0.5 * R
        JC = f.C[::-1, :] + 0.5 * R
        out = cb_compose(CantoniButlerForm(A, JC[::-1, :]))
    else:
        c, y, R1 = R[0, 0], R[1:, 0], R[1:, 1:]
        A = f.A + 0.5 * R1
        JC = f.C[::-1, :] + 0.5 * R1
        x = f.x + y / SQRT2
        out = cb_compose(CantoniButlerForm(A, JC[::-1, :], x, f.p + c))
    if out.entries.min() <= 0:
        raise NumericalError(f"positified matrix has a non-positive entry {out.entries.min():.3e}")
    return out


@register("positive")
def _replay_positive(params, kids):
    return _positify(kids[0], params["epsilon"])


def positive_epsilon(s, plan: cond.PartitionPlan) -> float:
    """Largest shift the strict clauses allow, capped by the gap ``lambda_0 - lambda_1``."""
    s = Spectrum.coerce(s)
    K, first, second = cond.borobia_bisym_values(s[0], s.values[1:plan.M + 1], plan.sums)
    eps = min([v for _, v in first] + [second])
    if len(s) > 1:
        eps = min(eps, s[0] - s[1])
    return eps


def construct_positive_borobia(s, p=None, check: bool = True) -> tuple:
    """Strictly positive realization under the strict odd-partition clauses.

    Builds the nonnegative realization of ``(lambda_0 - eps, lambda_1, ...)``
    and raises its Perron root back by ``eps``.  ``p`` may be ``None`` to
    search for a strict witness.
    """
    s = Spectrum.coerce(s)
    if p is None:
        plan = cond.search_partition(s, strict=True)
        if plan is None:
            v = cond.ConditionVerdict("borobia-bisym-strict", False,
                                      failed_clause="no partition satisfies the strict clauses")
            raise InfeasibleError("no strict odd-partition witness found", [v])
    else:
        plan = cond.make_plan(s, p.blocks if isinstance(p, cond.PartitionPlan) else p)
    v = cond.check_borobia_bisym(s, plan, strict=True)
    if not v.holds:
        raise InfeasibleError(f"strict partition condition fails: {v.failed_clause}", [v])
    if len(s) > 1 and not s[0] > s[1]:
        v = cond.ConditionVerdict("borobia-bisym-strict", False,
                                  failed_clause="lambda_0 = lambda_1; a positive matrix has a "
                                                "simple Perron root")
        raise InfeasibleError(v.failed_clause, [v])
    eps = positive_epsilon(s, plan)
    shifted = Spectrum([s[0] - eps] + list(s.values[1:]))
    shifted_plan = cond.make_plan(shifted, plan.blocks)
    notes: list = []
    regime, (Q0, c0) = _borobia(shifted, shifted_plan, notes)
    Q = _positify(Q0, eps)
    if check:
        _verified(Q, s, CONSTRUCT_TOL)
    cert = Certificate("positive", {"epsilon": eps, "P": Q.entries - Q0.entries},
                       (Certificate(f"borobia-{regime}", {"spectrum": list(shifted.values),
                                                           "partition": plan.as_lists()}, (c0,)),))
    return Q, cert
