"""Spectra, bisymmetric matrices and the linear algebra underneath them.

A bisymmetric matrix is symmetric about both diagonals: ``Q == Q.T`` and
``J Q J == Q`` with ``J`` the reverse identity.  Every such matrix splits
orthogonally into two half-size symmetric blocks,

    even order 2m:   A - JC  and  A + JC
    odd order 2m+1:  A - JC  and  [[p, sqrt(2) x^T], [sqrt(2) x, A + JC]]

where ``A`` is the leading ``m x m`` block, ``C`` the lower-left block, and
``x``/``p`` the centre column and centre entry.  The second ("plus") block
always carries the Perron root of a nonnegative ``Q``.  Most routines here
work on that reduction because it halves the eigenproblem and makes
J-symmetric eigenvectors come out exactly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import ConvergenceError, NumericalError, ParameterError, StructuralError

EIGEN_TOL = 1e-12
MAX_SWEEPS = 100
PERRON_TOL = 1e-10
VERIFY_TOL = 1e-9

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """A finite multiset of reals held in non-increasing order."""

    values: tuple

    def __init__(self, values: Iterable[float]):
        vals = [float(v) for v in values]
        if not vals:
            raise ParameterError("a spectrum needs at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError("spectrum values must be finite")
        object.__setattr__(self, "values", tuple(sorted(vals, reverse=True)))

    @classmethod
    def coerce(cls, obj) -> "Spectrum":
        return obj if isinstance(obj, Spectrum) else cls(obj)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def perron(self) -> float:
        return self.values[0]

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    def __repr__(self):
        return f"Spectrum({list(self.values)!r})"


# ---------------------------------------------------------------------------
# Bisymmetric matrices
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=256)
def _fundamental_index(n: int):
    # Representative of each orbit {(i,j), (j,i), (n-1-j,n-1-i), (n-1-i,n-1-j)}
    # inside the domain i <= j, i + j <= n - 1.
    i, j = np.indices((n, n))
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    flip = lo + hi > n - 1
    ri = np.where(flip, n - 1 - hi, lo)
    rj = np.where(flip, n - 1 - lo, hi)
    ri.setflags(write=False)
    rj.setflags(write=False)
    return ri, rj


def mirror(M) -> np.ndarray:
    """Rebuild a square array from its fundamental domain so it is exactly bisymmetric."""
    M = np.asarray(M, dtype=float)
    ri, rj = _fundamental_index(M.shape[0])
    return M[ri, rj]


def is_exactly_bisymmetric(M: np.ndarray) -> bool:
    return bool(np.array_equal(M, M.T) and np.array_equal(M, M[::-1, ::-1].T))


class BisymMatrix:
    """An immutable, exactly bisymmetric, entrywise nonnegative square matrix.

    The constructor validates bit-exactly.  Builders that compute entries in
    floating point should go through :meth:`mirrored`, which writes only the
    fundamental domain and copies it across both diagonals.
    """

    __slots__ = ("_entries", "_perron")

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise StructuralError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise StructuralError("matrix has non-finite entries")
        if not np.array_equal(a, a.T):
            raise StructuralError("matrix is not symmetric")
        if not np.array_equal(a, a[::-1, ::-1].T):
            raise StructuralError("matrix is not persymmetric (JQJ != Q)")
        if a.min() < 0:
            raise StructuralError(f"matrix has a negative entry ({a.min():.3e})")
        a.setflags(write=False)
        self._entries = a
        self._perron = None

    @classmethod
    def mirrored(cls, M, clamp: float = 0.0) -> "BisymMatrix":
        """Mirror ``M`` from its fundamental domain; entries in ``[-clamp, 0)`` become 0."""
        a = mirror(M)
        if clamp > 0:
            a = np.where((a < 0) & (a >= -clamp), 0.0, a)
        return cls(a)

    @classmethod
    def from_array(cls, M, tol: float = VERIFY_TOL) -> "BisymMatrix":
        """Accept a matrix that is bisymmetric and nonnegative up to ``tol``."""
        findings = matrix_findings(M, tol)
        if findings:
            raise StructuralError("; ".join(findings))
        return cls.mirrored(M, clamp=tol)

    @classmethod
    def zeros(cls, n: int) -> "BisymMatrix":
        return cls(np.zeros((n, n)))

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def order(self) -> int:
        return self._entries.shape[0]

    n = order

    @property
    def is_positive(self) -> bool:
        return bool(self._entries.min() > 0)

    @property
    def trace(self) -> float:
        return float(np.trace(self._entries))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries.copy() if copy else self._entries
        return self._entries.astype(dtype)

    def __eq__(self, other):
        if isinstance(other, BisymMatrix):
            return np.array_equal(self._entries, other._entries)
        return NotImplemented

    def __hash__(self):
        return hash(self._entries.tobytes())

    def __repr__(self):
        return f"BisymMatrix(order={self.order})\n{self._entries}"

    def tolist(self):
        return self._entries.tolist()

    def _with_perron(self, root: float, vector: np.ndarray) -> "BisymMatrix":
        v = np.array(vector, dtype=float)
        v.setflags(write=False)
        self._perron = (float(root), v)
        return self


def matrix_findings(M, tol: float) -> list:
    """Human-readable list of the bisymmetric-nonnegative invariants ``M`` breaks."""
    a = np.asarray(M, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        return [f"not a non-empty square matrix (shape {a.shape})"]
    if not np.all(np.isfinite(a)):
        return ["non-finite entries"]
    out = []
    sym = float(np.abs(a - a.T).max())
    per = float(np.abs(a - a[::-1, ::-1].T).max())
    if sym > tol:
        out.append(f"not symmetric (max |Q - Q^T| = {sym:.3e})")
    if per > tol:
        out.append(f"not persymmetric (max |Q - JQ^TJ| = {per:.3e})")
    if a.min() < -tol:
        out.append(f"negative entry {a.min():.6g}")
    return out


# ---------------------------------------------------------------------------
# Cantoni-Butler block form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CantoniButlerForm:
    """Blocks ``(A, C[, x, p])`` of a bisymmetric matrix of order ``2m`` or ``2m+1``."""

    A: np.ndarray
    C: np.ndarray
    x: Optional[np.ndarray] = None
    p: Optional[float] = None

    @property
    def parity(self) -> str:
        return "even" if self.x is None else "odd"

    @property
    def half(self) -> int:
        return self.A.shape[0]

    @property
    def order(self) -> int:
        return 2 * self.half + (self.x is not None)

    @property
    def minus_block(self) -> np.ndarray:
        return self.A - self.C[::-1, :]

    @property
    def plus_block(self) -> np.ndarray:
        s = self.A + self.C[::-1, :]
        if self.x is None:
            return s
        m = self.half
        out = np.empty((m + 1, m + 1))
        out[0, 0] = self.p
        out[0, 1:] = SQRT2 * self.x
        out[1:, 0] = SQRT2 * self.x
        out[1:, 1:] = s
        return out


def cb_parts(Q) -> CantoniButlerForm:
    """Read the block form straight out of ``Q`` (pure slicing, exact)."""
    a = np.asarray(Q, dtype=float)
    n = a.shape[0]
    m = n // 2
    if n % 2 == 0:
        return CantoniButlerForm(a[:m, :m].copy(), a[m:, :m].copy())
    return CantoniButlerForm(a[:m, :m].copy(), a[m + 1:, :m].copy(),
                             a[:m, m].copy(), float(a[m, m]))


def cb_compose(parts: CantoniButlerForm) -> BisymMatrix:
    """Place the blocks of ``parts`` into a bisymmetric matrix."""
    A = np.asarray(parts.A, dtype=float)
    C = np.asarray(parts.C, dtype=float)
    m = A.shape[0]
    if A.shape != (m, m) or C.shape != (m, m):
        raise StructuralError("A and C must be square blocks of the same size")
    if not np.array_equal(A, A.T):
        raise StructuralError("block A is not symmetric")
    if not np.array_equal(C.T, C[::-1, ::-1]):
        raise StructuralError("block C violates C^T = JCJ")
    if parts.x is None:
        out = np.empty((2 * m, 2 * m))
        out[:m, :m] = A
        out[:m, m:] = C[::-1, ::-1]
        out[m:, :m] = C
        out[m:, m:] = A[::-1, ::-1]
        return BisymMatrix(out)
    x = np.asarray(parts.x, dtype=float).reshape(m)
    n = 2 * m + 1
    out = np.empty((n, n))
    out[:m, :m] = A
    out[:m, m] = x
    out[:m, m + 1:] = C[::-1, ::-1]
    out[m, :m] = x
    out[m, m] = float(parts.p)
    out[m, m + 1:] = x[::-1]
    out[m + 1:, :m] = C
    out[m + 1:, m] = x[::-1]
    out[m + 1:, m + 1:] = A[::-1, ::-1]
    return BisymMatrix(out)


def cb_split(Q):
    """Return ``(minus_block, plus_block)``; their spectra partition the spectrum of ``Q``."""
    a = np.asarray(Q, dtype=float)
    if not is_exactly_bisymmetric(a):
        raise StructuralError("cb_split needs an exactly bisymmetric matrix")
    f = cb_parts(a)
    return f.minus_block, f.plus_block


def lift_plus_vector(y: np.ndarray, n: int) -> np.ndarray:
    """Map an eigenvector of the plus block to the J-symmetric eigenvector of the order-n matrix."""
    y = np.asarray(y, dtype=float)
    if n % 2 == 0:
        h = y / SQRT2
        return np.concatenate([h, h[::-1]])
    h = y[1:] / SQRT2
    return np.concatenate([h, y[:1], h[::-1]])


# ---------------------------------------------------------------------------
# Symmetric eigensolver: cyclic Jacobi, round-robin ordering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = field(default=0, compare=False)


@functools.lru_cache(maxsize=128)
def _round_robin(n: int):
    # n/2 disjoint pairs per round, n-1 rounds: every (p, q) exactly once per sweep.
    size = n + (n % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for k in range(size // 2):
            p, q = players[k], players[size - 1 - k]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def symmetric_eigen(M, tol: float = EIGEN_TOL, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Eigen-decompose an exactly symmetric matrix with cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * ||M||_F``.  Eigenvalues are returned in non-increasing order;
    each eigenvector is signed so its largest-magnitude entry is positive.
    """
    a = np.array(M, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StructuralError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise StructuralError("symmetric_eigen needs an exactly symmetric matrix")
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    sweeps = 0
    if n > 1 and scale > 0:
        limit = tol * scale
        rounds = _round_robin(n)
        polish = 1  # one sweep past the threshold; convergence is quadratic there
        while True:
            off = _off_norm(a)
            if off <= limit:
                if polish == 0 or off == 0:
                    break
                polish -= 1
            elif sweeps >= max_sweeps:
                raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", off)
            sweeps += 1
            for ps, qs in rounds:
                apq = a[ps, qs]
                live = apq != 0
                if not live.any():
                    continue
                p, q, apq = ps[live], qs[live], apq[live]
                # a subnormal apq overflows tau to inf, giving t = 0: the identity rotation
                with np.errstate(over="ignore"):
                    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                cp, cq = a[:, p], a[:, q]
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :], a[q, :]
                a[p, :] = c[:, None] * rp - s[:, None] * rq
                a[q, :] = s[:, None] * rp + c[:, None] * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp, vq = v[:, p], v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    if n:
        lead = np.abs(v).argmax(axis=0)
        signs = np.where(v[lead, np.arange(n)] < 0, -1.0, 1.0)
        v = v * signs
    return EigenDecomposition(w, v, sweeps)


def symmetric_eigenvalues(M, tol: float = EIGEN_TOL) -> np.ndarray:
    """Eigenvalues in non-increasing order; bisymmetric input is split in half first."""
    a = np.asarray(M, dtype=float)
    if a.shape[0] > 1 and is_exactly_bisymmetric(a):
        minus, plus = cb_split(a)
        parts = [symmetric_eigen(b, tol).eigenvalues for b in (minus, plus) if b.size]
        return np.sort(np.concatenate(parts))[::-1]
    return symmetric_eigen(a, tol).eigenvalues


# ---------------------------------------------------------------------------
# Perron pairs
# ---------------------------------------------------------------------------

def irreducible_components(S) -> list:
    """Index arrays of the connected components of the nonzero pattern of ``S``."""
    a = np.asarray(S)
    count, labels = connected_components(a != 0, directed=False)
    comps = [np.flatnonzero(labels == k) for k in range(count)]
    comps.sort(key=lambda idx: idx[0])
    return comps


def _component_perron(S: np.ndarray, tol: float):
    best = None
    for idx in irreducible_components(S):
        dec = symmetric_eigen(S[np.ix_(idx, idx)])
        root = dec.eigenvalues[0]
        if best is None or root > best[0] + tol * max(1.0, abs(root)):
            y = np.zeros(S.shape[0])
            y[idx] = dec.eigenvectors[:, 0]
            best = (root, y)
    return best


def perron_pair(Q: BisymMatrix, tol: float = PERRON_TOL):
    """Perron root and a unit, nonnegative, exactly J-symmetric Perron vector.

    The vector is taken from the plus block and lifted, which is the same
    vector the averaging ``(v1 + J v2) / 2`` produces from any nonnegative
    Perron vector of ``Q``.  If the top eigenspace is degenerate and the
    solver hands back a mixed-sign vector, the plus block is split into its
    irreducible components and the dominant one supplies the vector.  The
    zero matrix gets the uniform vector.
    """
    if not isinstance(Q, BisymMatrix):
        Q = BisymMatrix(Q)
    if Q._perron is not None:
        return Q._perron
    n = Q.order
    if not Q.entries.any():
        v = np.full(n, 1.0 / math.sqrt(n))
        Q._with_perron(0.0, v)
        return Q._perron
    plus = cb_parts(Q.entries).plus_block
    dec = symmetric_eigen(plus)
    root, y = dec.eigenvalues[0], dec.eigenvectors[:, 0]
    if y.sum() < 0:
        y = -y
    if y.min() < -tol:
        root, y = _component_perron(plus, tol)
        if y.sum() < 0:
            y = -y
    if y.min() < -tol:
        raise NumericalError(f"Perron vector has entry {y.min():.3e} below -tol; "
                             "matrix is probably not nonnegative")
    y = np.where(y < 0, 0.0, y)
    y = y / np.linalg.norm(y)
    Q._with_perron(root, lift_plus_vector(y, n))
    return Q._perron


def top_eigvec_2x2(p: float, q: float, r: float):
    """Largest eigenvalue of ``[[p, q], [q, r]]`` (``q >= 0``) and a nonnegative unit eigenvector."""
    half = 0.5 * (p - r)
    lam = 0.5 * (p + r) + math.hypot(half, q)
    if q == 0:
        vec = (1.0, 0.0) if p >= r else (0.0, 1.0)
        return lam, np.array(vec)
    # hypot rather than a sum of squares, so tiny couplings do not underflow
    v1 = (q, lam - p)
    v2 = (lam - r, q)
    vec = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
    return lam, np.array(vec) / math.hypot(*vec)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    is_symmetric: bool
    is_persymmetric: bool
    min_entry: float
    spectrum_deviation: float
    passed: bool
    tol_used: float
    eigenvalues: tuple = ()

    @property
    def pass_(self) -> bool:
        return self.passed

    def as_dict(self) -> dict:
        return {
            "is_symmetric": self.is_symmetric,
            "is_persymmetric": self.is_persymmetric,
            "min_entry": self.min_entry,
            "spectrum_deviation": self.spectrum_deviation,
            "pass": self.passed,
            "tol_used": self.tol_used,
            "eigenvalues": list(self.eigenvalues),
        }


def verify_realization(Q, target, tol: float = VERIFY_TOL) -> VerificationReport:
    """Check structure, sign and spectrum of ``Q`` against ``target``.

    Eigenvalues are paired with the target after sorting both lists.
    """
    a = np.asarray(Q, dtype=float)
    target = Spectrum.coerce(target)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] != len(target):
        raise ParameterError(f"matrix order {a.shape[0]} != spectrum length {len(target)}")
    sym = float(np.abs(a - a.T).max())
    per = float(np.abs(a - a[::-1, ::-1].T).max())
    if is_exactly_bisymmetric(a):
        eig = symmetric_eigenvalues(a)
    else:
        sa = 0.5 * (a + a.T)
        eig = symmetric_eigen(mirror_lower(sa)).eigenvalues
    dev = float(np.abs(eig - target.as_array()).max())
    min_entry = float(a.min())
    is_sym, is_per = sym <= tol, per <= tol
    ok = is_sym and is_per and min_entry >= -tol and dev <= tol
    return VerificationReport(is_sym, is_per, min_entry, dev, ok, tol, tuple(float(e) for e in eig))


def mirror_lower(a: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one so the result is exactly symmetric."""
    return np.triu(a) + np.triu(a, 1).T


def reverse_identity(n: int) -> np.ndarray:
    return np.eye(n)[::-1].copy()


def as_spectrum_list(values: Sequence[float]) -> list:
    return list(Spectrum(values).values)
