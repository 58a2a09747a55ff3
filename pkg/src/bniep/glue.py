"""Assembly primitives: bordered three-block glue, Perron transfer merge, nests and rank-S updates.

Every builder returns a :class:`BisymMatrix`.  Where the new Perron pair is
known in closed form it is cached on the result, so chains of glues never
need a fresh eigensolve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (SQRT2, BisymMatrix, CantoniButlerForm, cb_compose, cb_parts,
                   perron_pair, top_eigvec_2x2)
from .errors import InfeasibleError, NumericalError, ParameterError

GLUE_TOL = 1e-12
RADO_TOL = 1e-9


@dataclass(frozen=True)
class GlueParams:
    rho: float = 0.0
    xi: float = 0.0
    a: float = 0.0
    b: float = 0.0
    epsilon: float = 0.0


def _as_bisym(Q) -> BisymMatrix:
    return Q if isinstance(Q, BisymMatrix) else BisymMatrix(Q)


def _slack(*values) -> float:
    return GLUE_TOL * max(1.0, *(abs(v) for v in values))


def half_vector(v: np.ndarray) -> tuple:
    """Split a J-symmetric vector into ``(top half, centre entry or None)``."""
    n = v.shape[0]
    m = n // 2
    return v[:m], (float(v[m]) if n % 2 else None)


# ---------------------------------------------------------------------------
# Three-block glue
# ---------------------------------------------------------------------------

def glue_three(A, B, rho: float, xi: float) -> BisymMatrix:
    """``[[B, r v u^T, x v v^T], [r u v^T, A, r u v^T], [x v v^T, r v u^T, B]]``.

    ``u`` and ``v`` are the J-symmetric Perron vectors of ``A`` and ``B``.
    The spectrum is that of ``[[b1, r, x], [r, a1, r], [x, r, b1]]`` plus the
    non-Perron eigenvalues of ``A`` once and of ``B`` twice.
    """
    if rho < 0 or xi < 0:
        raise ParameterError(f"rho and xi must be nonnegative (got rho={rho}, xi={xi})")
    A, B = _as_bisym(A), _as_bisym(B)
    alpha, u = perron_pair(A)
    beta, v = perron_pair(B)
    m, n = A.order, B.order
    N = m + 2 * n
    out = np.zeros((N, N))
    vu = rho * np.outer(v, u)
    vv = xi * np.outer(v, v)
    lo, hi = n, n + m
    out[:n, :n] = B.entries
    out[hi:, hi:] = B.entries
    out[lo:hi, lo:hi] = A.entries
    out[:n, lo:hi] = vu
    out[lo:hi, :n] = vu.T
    out[hi:, lo:hi] = vu
    out[lo:hi, hi:] = vu.T
    out[:n, hi:] = vv
    out[hi:, :n] = vv
    Q = BisymMatrix.mirrored(out)
    # Perron pair from the symmetric sector of the 3x3 core
    lam, (r, s) = top_eigvec_2x2(beta + xi, SQRT2 * rho, alpha)
    vec = np.concatenate([r * v / SQRT2, s * u, r * v / SQRT2])
    return Q._with_perron(lam, vec)


def glue_ab_params(alpha1: float, beta1: float, a: float, b: float) -> GlueParams:
    """Coupling ``rho`` and corner ``xi`` that move the glue spectrum to ``{a1-(a+b), b1+a, b1+b}``."""
    tol = _slack(alpha1, beta1, a, b)
    if alpha1 < beta1 - tol:
        raise ParameterError(f"need alpha1 >= beta1 (got {alpha1:.6g} < {beta1:.6g})")
    if alpha1 - beta1 < a - tol:
        raise ParameterError(f"need alpha1 - beta1 >= a (got {alpha1 - beta1:.6g} < {a:.6g})")
    if a < b - tol:
        raise ParameterError(f"need a >= b (got {a:.6g} < {b:.6g})")
    if a + b > tol:
        raise ParameterError(f"need a + b <= 0 (got {a + b:.6g})")
    if b > tol:
        raise ParameterError(f"need b <= 0 (got {b:.6g})")
    rad = -(alpha1 - beta1 - a) * (a + b) / 2.0
    rho = math.sqrt(max(rad, 0.0))
    return GlueParams(rho=rho, xi=max(-b, 0.0), a=a, b=b)


def glue_ab(A, B, a: float, b: float) -> BisymMatrix:
    """Glue with the coupling chosen so the spectrum is ``{a1-(a+b), b1+a, b1+b}`` plus tails."""
    A, B = _as_bisym(A), _as_bisym(B)
    params = glue_ab_params(perron_pair(A)[0], perron_pair(B)[0], a, b)
    return glue_three(A, B, params.rho, params.xi)


# ---------------------------------------------------------------------------
# Nests and shells
# ---------------------------------------------------------------------------

def nest(outer, inner) -> BisymMatrix:
    """Place ``inner`` in the middle of the even-order ``outer``, split at its halves.

    The result is block diagonal up to a permutation commuting with J, so its
    spectrum is the union of the two spectra.
    """
    outer, inner = _as_bisym(outer), _as_bisym(inner)
    if outer.order % 2:
        raise ParameterError(f"the outer matrix of a nest must have even order (got {outer.order})")
    h, k = outer.order // 2, inner.order
    N = 2 * h + k
    out = np.zeros((N, N))
    O = outer.entries
    out[:h, :h] = O[:h, :h]
    out[:h, h + k:] = O[:h, h:]
    out[h + k:, :h] = O[h:, :h]
    out[h + k:, h + k:] = O[h:, h:]
    out[h:h + k, h:h + k] = inner.entries
    return BisymMatrix(out)


def pair_shell(lam_i: float, lam_j: float) -> BisymMatrix:
    """2x2 ``[[(li+lj)/2, (li-lj)/2], [(li-lj)/2, (li+lj)/2]]`` with spectrum ``{li, lj}``."""
    hi, lo = max(lam_i, lam_j), min(lam_i, lam_j)
    d = 0.5 * (hi + lo)
    if d < -_slack(hi, lo):
        raise ParameterError(f"pair ({hi}, {lo}) has negative sum")
    d = max(d, 0.0)
    o = 0.5 * (hi - lo)
    return BisymMatrix([[d, o], [o, d]])


def center_insert(Q, value: float) -> BisymMatrix:
    """Insert a zero row and column carrying ``value`` at the centre of an even-order ``Q``."""
    Q = _as_bisym(Q)
    if Q.order % 2:
        raise ParameterError(f"center_insert needs an even-order matrix (got {Q.order})")
    if value < 0:
        raise ParameterError(f"centre value must be nonnegative (got {value})")
    f = cb_parts(Q.entries)
    m = f.half
    return cb_compose(CantoniButlerForm(f.A, f.C, np.zeros(m), float(value)))


# ---------------------------------------------------------------------------
# Perron transfer
# ---------------------------------------------------------------------------

def transfer_coupling(alpha0: float, beta0: float, epsilon: float) -> float:
    """``rho`` with ``[[a0, rho], [rho, b0]]`` having eigenvalues ``a0 + eps`` and ``b0 - eps``."""
    return math.sqrt(max(epsilon * (alpha0 - beta0 + epsilon), 0.0))


def merge_layout(order1: int, order2: int) -> str:
    """Which matrix forms the outer shell: ``"second-outer"`` or ``"first-outer"``."""
    if order1 % 2 and order2 % 2:
        raise ParameterError(f"cannot merge two odd-order matrices ({order1}, {order2})")
    return "second-outer" if order2 % 2 == 0 else "first-outer"


def merge_transfer(Q1, Q2, epsilon: float) -> BisymMatrix:
    """Merge two matrices, moving ``epsilon`` from the Perron root of ``Q2`` to that of ``Q1``.

    The spectrum of the result is ``{a0 + eps, b0 - eps}`` together with the
    non-Perron eigenvalues of both inputs, where ``a0 >= b0`` are the Perron
    roots.  The even-order input becomes the outer shell (``Q2`` when both
    are even).
    """
    Q1, Q2 = _as_bisym(Q1), _as_bisym(Q2)
    if epsilon < 0:
        raise ParameterError(f"epsilon must be nonnegative (got {epsilon})")
    alpha0, z1 = perron_pair(Q1)
    beta0, z2 = perron_pair(Q2)
    if alpha0 < beta0 - _slack(alpha0, beta0):
        raise ParameterError(f"need Perron(Q1) >= Perron(Q2) (got {alpha0:.6g} < {beta0:.6g})")
    rho = transfer_coupling(alpha0, beta0, epsilon)
    if merge_layout(Q1.order, Q2.order) == "second-outer":
        Qo, zo, Qi, zi = Q2, z2, Q1, z1
    else:
        Qo, zo, Qi, zi = Q1, z1, Q2, z2
    fo, fi = cb_parts(Qo.entries), cb_parts(Qi.entries)
    uo, _ = half_vector(zo)
    ui, ci = half_vector(zi)
    ho, hi = fo.half, fi.half
    H = ho + hi
    R = np.outer(rho * uo, ui)
    A = np.zeros((H, H))
    A[:ho, :ho] = fo.A
    A[ho:, ho:] = fi.A
    A[:ho, ho:] = R
    A[ho:, :ho] = R.T
    JC = np.zeros((H, H))
    JC[:ho, :ho] = fo.C[::-1, :]
    JC[ho:, ho:] = fi.C[::-1, :]
    JC[:ho, ho:] = R
    JC[ho:, :ho] = R.T
    if fi.x is None:
        parts = CantoniButlerForm(A, JC[::-1, :])
    else:
        x = np.concatenate([rho * ci * uo, fi.x])
        parts = CantoniButlerForm(A, JC[::-1, :], x, fi.p)
    Q = cb_compose(parts)
    if Q.entries.min() < 0:
        raise NumericalError(f"merge produced a negative entry {Q.entries.min():.3e}")
    # Perron pair: top eigenvector of the 2x2 coupling of the two Perron vectors
    lam, (c1, c2) = top_eigvec_2x2(alpha0, rho, beta0)
    emb1, emb2 = _embed(Q1, Q2, Qo is Q2)
    vec = c1 * emb1(z1) + c2 * emb2(z2)
    return Q._with_perron(lam, vec)


def _embed(Q1, Q2, second_outer: bool):
    """Functions placing vectors of Q1 and Q2 at their positions in the merged matrix."""
    outer, inner = (Q2, Q1) if second_outer else (Q1, Q2)
    h, k = outer.order // 2, inner.order
    N = outer.order + k

    def place_outer(z):
        out = np.zeros(N)
        out[:h] = z[:h]
        out[h + k:] = z[h:]
        return out

    def place_inner(z):
        out = np.zeros(N)
        out[h:h + k] = z
        return out

    return (place_inner, place_outer) if second_outer else (place_outer, place_inner)


# ---------------------------------------------------------------------------
# Rank-S symmetric update
# ---------------------------------------------------------------------------

def rado_update(Qhat, X, B, Omega, tol: float = RADO_TOL) -> BisymMatrix:
    """``Qhat + X (B - Omega) X^T`` for J-symmetric orthonormal eigenvector columns ``X``.

    The eigenvalues ``diag(Omega)`` of ``Qhat`` are replaced by those of ``B``.
    """
    Qhat = _as_bisym(Qhat)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] != Qhat.order:
        X = X.T if X.shape[1] == Qhat.order else X
    B = np.atleast_2d(np.asarray(B, dtype=float))
    Om = np.asarray(Omega, dtype=float)
    omega = np.diag(Om) if Om.ndim == 2 else Om
    S = X.shape[1]
    if X.shape[0] != Qhat.order or B.shape != (S, S) or omega.shape != (S,):
        raise ParameterError(f"shape mismatch: Qhat {Qhat.order}, X {X.shape}, B {B.shape}, "
                             f"Omega {omega.shape}")
    scale = max(1.0, float(np.abs(Qhat.entries).max()))
    if np.abs(B - B.T).max() > tol * scale:
        raise ParameterError("B is not symmetric")
    if np.abs(X.T @ X - np.eye(S)).max() > tol:
        raise ParameterError("columns of X are not orthonormal")
    if np.abs(X - X[::-1]).max() > tol:
        raise ParameterError("columns of X are not J-symmetric")
    resid = np.abs(Qhat.entries @ X - X * omega).max()
    if resid > tol * scale:
        raise ParameterError(f"columns of X are not eigenvectors of Qhat for Omega "
                             f"(residual {resid:.3e})")
    out = Qhat.entries + X @ (B - np.diag(omega)) @ X.T
    if out.min() < -tol * scale:
        raise NumericalError(f"update produced a negative entry {out.min():.3e}")
    return BisymMatrix.mirrored(out, clamp=tol * scale)


def solve_2x2_diag(lam1: float, lam2: float, w1: float, w2: float,
                   tol: float = GLUE_TOL) -> np.ndarray:
    """Nonnegative symmetric 2x2 with eigenvalues ``{lam1, lam2}`` and diagonal ``(w1, w2)``."""
    slack = tol * max(1.0, abs(lam1), abs(lam2), abs(w1), abs(w2))
    if abs((w1 + w2) - (lam1 + lam2)) > slack:
        raise InfeasibleError(f"trace mismatch: w1 + w2 = {w1 + w2:.6g} but "
                              f"lam1 + lam2 = {lam1 + lam2:.6g}")
    if min(w1, w2) < -slack:
        raise InfeasibleError(f"diagonal entries must be nonnegative (got {w1}, {w2})")
    disc = w1 * w2 - lam1 * lam2
    if disc < -slack * max(1.0, abs(w1), abs(w2)):
        raise InfeasibleError(f"no real off-diagonal: w1*w2 - lam1*lam2 = {disc:.6g} < 0")
    c = math.sqrt(max(disc, 0.0))
    return np.array([[w1, c], [c, w2]])
