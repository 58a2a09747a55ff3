"""Realizations with a prescribed palindromic diagonal.

The diagonal is given centre-outward as ``a_0, a_1, ..., a_m``.  Odd order
``2m+1`` puts ``a_0`` once at the centre and even order ``2m+2`` puts it
twice; in both cases ``a_m`` ends up in the corners.  Builders write the
diagonal entries directly, so they appear bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import conditions as cond
from . import glue
from .certificate import Certificate, register, wrap
from .constructors import CONSTRUCT_TOL, _verified
from .core import BisymMatrix, Spectrum
from .errors import InfeasibleError, NumericalError, ParameterError


@dataclass(frozen=True)
class DiagonalSpec:
    spectrum: Spectrum
    diag_half: tuple   # a_0, a_1, ..., a_m

    def __post_init__(self):
        object.__setattr__(self, "spectrum", Spectrum.coerce(self.spectrum))
        object.__setattr__(self, "diag_half", tuple(float(a) for a in self.diag_half))
        n, m = len(self.spectrum), len(self.diag_half) - 1
        if m < 0 or n not in (2 * m + 1, 2 * m + 2):
            raise ParameterError(f"{m + 1} diagonal values do not fit a spectrum of length {n}")
        if min(self.diag_half) < 0:
            raise ParameterError("diagonal entries must be nonnegative")

    @property
    def m(self) -> int:
        return len(self.diag_half) - 1

    @property
    def parity(self) -> str:
        return "odd" if len(self.spectrum) % 2 else "even"

    def diagonal(self) -> list:
        """The full diagonal, corner to corner."""
        a = list(self.diag_half)
        centre = [a[0]] if self.parity == "odd" else [a[0], a[0]]
        return a[:0:-1] + centre + a[1:]


def _tol(*values) -> float:
    return cond.SUM_TOL * max(1.0, *(abs(v) for v in values))


# ---------------------------------------------------------------------------
# Order three
# ---------------------------------------------------------------------------

def check_diag3(alphas, a0: float, a1: float) -> cond.ConditionVerdict:
    """Whether a 3x3 nonnegative bisymmetric matrix has spectrum ``alphas`` and diagonal ``(a1, a0, a1)``.

    Holds iff some ``j`` in ``{1, 2}`` has ``a1 >= alpha_j``,
    ``alpha_0 + alpha_j >= 2 a1``, ``alpha_1 + alpha_2 <= 2 a1`` and the
    trace matches; the witness is the smallest such ``j``.
    """
    al = sorted((float(x) for x in alphas), reverse=True)
    if len(al) != 3:
        raise ParameterError("need exactly three eigenvalues")
    tol = _tol(*al, a0, a1)
    details = {"alphas": al, "a0": a0, "a1": a1}
    if min(a0, a1) < 0:
        return cond.ConditionVerdict("diag3", False, failed_clause="negative diagonal entry",
                                     details=details)
    if abs(math.fsum(al) - (a0 + 2 * a1)) > tol:
        return cond.ConditionVerdict("diag3", False, details=details,
                                     failed_clause=f"trace: sum of eigenvalues {math.fsum(al):.6g} "
                                                   f"!= a0 + 2 a1 = {a0 + 2 * a1:.6g}")
    if al[1] + al[2] > 2 * a1 + tol:
        return cond.ConditionVerdict("diag3", False, details=details,
                                     failed_clause="alpha_1 + alpha_2 > 2 a1")
    failures = []
    for j in (1, 2):
        if a1 < al[j] - tol:
            failures.append(f"j={j}: a1 < alpha_{j}")
        elif al[0] + al[j] < 2 * a1 - tol:
            failures.append(f"j={j}: alpha_0 + alpha_{j} < 2 a1")
        else:
            return cond.ConditionVerdict("diag3", True, witness=j, details=details)
    return cond.ConditionVerdict("diag3", False, failed_clause="; ".join(failures), details=details)


def _diag3_entries(alphas, a0: float, a1: float, j: int) -> np.ndarray:
    al = sorted(alphas, reverse=True)
    rho = math.sqrt(max((al[0] - a0) * (al[0] + al[j] - 2 * a1) / 2.0, 0.0))
    xi = max(a1 - al[j], 0.0)
    return np.array([[a1, rho, xi], [rho, a0, rho], [xi, rho, a1]])


def construct_diag3(alphas, a0: float, a1: float) -> BisymMatrix:
    """``[[a1, r, a1 - alpha_j], [r, a0, r], [a1 - alpha_j, r, a1]]`` for the witness ``j``."""
    v = check_diag3(alphas, a0, a1)
    if not v.holds:
        raise InfeasibleError(f"no 3x3 realization with diagonal ({a1}, {a0}, {a1}): "
                              f"{v.failed_clause}", [v])
    return BisymMatrix(_diag3_entries(alphas, a0, a1, v.witness))


@register("diag3")
def _replay_diag3(params, kids):
    return BisymMatrix(_diag3_entries(params["alphas"], params["a0"], params["a1"], params["j"]))


# ---------------------------------------------------------------------------
# Layer reordering
# ---------------------------------------------------------------------------

def layer_reversal(n: int, layers: int) -> np.ndarray:
    """Permutation reversing the outer ``layers`` rows of each half; it commutes with J."""
    perm = np.arange(n)
    perm[:layers] = perm[:layers][::-1]
    perm[n - layers:] = perm[n - layers:][::-1]
    return perm


def reorder_layers(Q, layers: int) -> BisymMatrix:
    Q = Q if isinstance(Q, BisymMatrix) else BisymMatrix(Q)
    perm = layer_reversal(Q.order, layers)
    return BisymMatrix(Q.entries[np.ix_(perm, perm)])


@register("layer-reversal")
def _replay_reversal(params, kids):
    return reorder_layers(kids[0], params["layers"])


# ---------------------------------------------------------------------------
# Odd order
# ---------------------------------------------------------------------------

def odd_witnesses(lam, a) -> tuple:
    """Per-layer witnesses ``j_k`` in ``{2k-1, 2k}`` for the odd-order conditions, or a failure text."""
    m = len(a) - 1
    tol = _tol(*lam, *a)
    js = []
    for k in range(1, m + 1):
        head = math.fsum(lam[:2 * k - 1])
        need = 2 * math.fsum(a[1:k + 1])
        for j in (2 * k - 1, 2 * k):
            if a[k] >= lam[j] - tol and head + lam[j] >= need - tol:
                js.append(j)
                break
        else:
            return None, f"condition (1) fails at k={k}"
        if 2 * a[k] < lam[2 * k - 1] + lam[2 * k] - tol:
            return None, f"condition (2) fails at k={k}: 2 a_{k} < lambda_{2 * k - 1} + lambda_{2 * k}"
    if abs(math.fsum(lam) - (a[0] + 2 * math.fsum(a[1:]))) > tol * len(lam):
        return None, "condition (3) fails: trace mismatch"
    return tuple(js), None


def check_diag_odd(spec: DiagonalSpec) -> cond.ConditionVerdict:
    js, why = odd_witnesses(spec.spectrum.values, spec.diag_half)
    return cond.ConditionVerdict("diag-odd", js is not None, witness=list(js) if js else None,
                                 failed_clause=why)


def _peel(lam, a):
    """One layer: reduced spectrum and diagonal, plus the layer's glue parameters."""
    lam0p = lam[0] + lam[1] + lam[2] - 2 * a[1]
    return lam0p, [lam0p] + list(lam[3:]), [a[0]] + list(a[2:])


def _layer(inner, a1: float, lam, j: int):
    """Glue ``[[a1]]`` around ``inner``; the new layer carries ``lam[0], lam[1], lam[2]``."""
    Qi, ci = inner
    rho = math.sqrt(max((2 * a1 - lam[1] - lam[2]) * (lam[0] + lam[j] - 2 * a1) / 2.0, 0.0))
    xi = max(a1 - lam[j], 0.0)
    B = BisymMatrix([[a1]])
    Q = glue.glue_three(Qi, B, rho, xi)
    return Q, Certificate("glue-three", {"rho": rho, "xi": xi, "j": j},
                          (ci, Certificate("matrix", {"entries": [[a1]]})))


def _build_odd(lam, a, js):
    m = len(a) - 1
    if m == 0:
        Q = BisymMatrix([[a[0]]])
        return Q, Certificate("matrix", {"entries": [[a[0]]]})
    if m == 1:
        params = {"alphas": list(lam), "a0": a[0], "a1": a[1], "j": js[0]}
        return BisymMatrix(_diag3_entries(lam, a[0], a[1], js[0])), Certificate("diag3", params)
    lam0p, lam_r, a_r = _peel(lam, a)
    if lam0p < lam[3] - _tol(lam0p, lam[3]):
        raise NumericalError(f"reduced Perron root {lam0p:.6g} < lambda_3 = {lam[3]:.6g}")
    inner = _build_odd(lam_r, a_r, tuple(j - 2 for j in js[1:]))
    return _layer(inner, a[1], lam, js[0])


def construct_diag_odd(spec, check: bool = True) -> tuple:
    """Order ``2m+1`` with diagonal ``a_m, ..., a_1, a_0, a_1, ..., a_m``."""
    spec = spec if isinstance(spec, DiagonalSpec) else DiagonalSpec(*spec)
    if spec.parity != "odd":
        raise ParameterError("construct_diag_odd needs an odd-length spectrum")
    lam, a = list(spec.spectrum.values), list(spec.diag_half)
    js, why = odd_witnesses(lam, a)
    if js is None:
        v = cond.ConditionVerdict("diag-odd", False, failed_clause=why)
        raise InfeasibleError(f"prescribed diagonal not reachable: {why}", [v])
    Q, c = _build_odd(lam, a, js)
    Q = reorder_layers(Q, spec.m)
    c = Certificate("layer-reversal", {"layers": spec.m}, (c,))
    if check:
        _verified(Q, spec.spectrum, CONSTRUCT_TOL)
    return Q, wrap("diagonal", c, spectrum=list(spec.spectrum.values), diag_half=list(a),
                   witnesses=list(js))


# ---------------------------------------------------------------------------
# Even order
# ---------------------------------------------------------------------------

def even_failures(lam, a) -> list:
    """Failed conditions of the even-order condition, in clause order."""
    m = len(a) - 1
    tol = _tol(*lam, *a)
    out = []
    if any(a[i] < a[i + 1] - tol for i in range(1, m)):
        out.append("hypothesis a_1 >= a_2 >= ... >= a_m fails")
    for i in range(1, m + 1):
        if a[i] < lam[2 * i - 1] - tol:
            out.append(f"condition (1) fails at i={i}: a_{i} < lambda_{2 * i - 1}")
    for k in range(1, 2 * m):
        lhs = math.fsum(lam[:k + 1])
        rhs = math.fsum(a[1:(k + 2) // 2 + 1]) + math.fsum(a[1:(k + 1) // 2 + 1])
        if lhs < rhs - tol:
            out.append(f"condition (2) fails at k={k}: {lhs:.6g} < {rhs:.6g}")
    if abs(math.fsum(lam) - 2 * math.fsum(a)) > tol * len(lam):
        out.append("condition (3) fails: trace mismatch")
    return out


def check_diag_even(spec: DiagonalSpec) -> cond.ConditionVerdict:
    bad = even_failures(spec.spectrum.values, spec.diag_half)
    return cond.ConditionVerdict("diag-even", not bad, failed_clause="; ".join(bad) or None)


def _diag4_entries(lam, a0: float, a1: float) -> np.ndarray:
    rho = math.sqrt(max((lam[0] - 2 * a0 + lam[3]) * (lam[0] + lam[1] - 2 * a1), 0.0)) / 2.0
    outer = max(a1 - lam[1], 0.0)
    inner = max(a0 - lam[3], 0.0)
    return np.array([[a1, rho, rho, outer],
                     [rho, a0, inner, rho],
                     [rho, inner, a0, rho],
                     [outer, rho, rho, a1]])


@register("diag4")
def _replay_diag4(params, kids):
    return BisymMatrix(_diag4_entries(params["lams"], params["a0"], params["a1"]))


def _build_even(lam, a):
    m = len(a) - 1
    if m == 0:
        off = 0.5 * (lam[0] - lam[1])
        Q = BisymMatrix([[a[0], off], [off, a[0]]])
        return Q, Certificate("matrix", {"entries": Q.tolist()})
    if m == 1:
        return (BisymMatrix(_diag4_entries(lam, a[0], a[1])),
                Certificate("diag4", {"lams": list(lam), "a0": a[0], "a1": a[1]}))
    lam0p, lam_r, a_r = _peel(lam, a)
    if lam0p < lam[3] - _tol(lam0p, lam[3]):
        raise NumericalError(f"reduced Perron root {lam0p:.6g} < lambda_3 = {lam[3]:.6g}")
    inner = _build_even(lam_r, a_r)
    return _layer(inner, a[1], lam, 1)


def construct_diag_even(spec, check: bool = True) -> tuple:
    """Order ``2m+2`` with diagonal ``a_m, ..., a_0, a_0, ..., a_m``."""
    spec = spec if isinstance(spec, DiagonalSpec) else DiagonalSpec(*spec)
    if spec.parity != "even":
        raise ParameterError("construct_diag_even needs an even-length spectrum")
    lam, a = list(spec.spectrum.values), list(spec.diag_half)
    bad = even_failures(lam, a)
    if bad:
        v = cond.ConditionVerdict("diag-even", False, failed_clause="; ".join(bad))
        raise InfeasibleError(f"prescribed diagonal not reachable: {bad[0]}", [v])
    Q, c = _build_even(lam, a)
    Q = reorder_layers(Q, spec.m)
    c = Certificate("layer-reversal", {"layers": spec.m}, (c,))
    if check:
        _verified(Q, spec.spectrum, CONSTRUCT_TOL)
    return Q, wrap("diagonal", c, spectrum=list(spec.spectrum.values), diag_half=list(a))


def construct_diagonal(spectrum, diag_half, check: bool = True) -> tuple:
    """Dispatch on parity."""
    spec = DiagonalSpec(spectrum, diag_half)
    if spec.parity == "odd":
        return construct_diag_odd(spec, check)
    return construct_diag_even(spec, check)
