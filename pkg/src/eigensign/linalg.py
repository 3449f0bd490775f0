"""Dense symmetric numerics: row means, population covariance, Jacobi eigensolver.

Data matrices are oriented with one *variable per row* and one
*observation per column*; a 50x50 crop therefore gives a 50x50 covariance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List

import numpy as np

from .errors import NoConvergence, NotSymmetric

__all__ = [
    "EigenPair",
    "EigenDecomposition",
    "mean_vector",
    "covariance",
    "eigen_symmetric",
    "canonical_sign",
]

SWEEP_CAP = 100
DEFAULT_TOL = 1e-12
SYMMETRY_TOL = 1e-10


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def mean_vector(data) -> np.ndarray:
    """Arithmetic mean of every row (variable) across its columns."""
    return _as_matrix(data).mean(axis=1)


def covariance(data) -> np.ndarray:
    """Population covariance ``(1/N) (X - M)(X - M)^T`` over the N columns.

    Only the upper triangle is trusted; it is mirrored so the result is
    exactly symmetric.
    """
    x = _as_matrix(data)
    centered = x - mean_vector(x)[:, None]
    c = (centered @ centered.T) / x.shape[1]
    upper = np.triu(c)
    return upper + np.triu(c, 1).T


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray


@dataclass(frozen=True)
class EigenDecomposition:
    pairs: List[EigenPair]

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.pairs])

    @property
    def vectors(self) -> np.ndarray:
        """Eigenvectors as rows, in the same order as :attr:`values`."""
        return np.array([p.vector for p in self.pairs])

    def __len__(self):
        return len(self.pairs)


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so its largest-magnitude component (first on ties) is positive."""
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


@dataclass(frozen=True)
class _Round:
    p: np.ndarray
    q: np.ndarray
    # flat offsets of the (p,p), (q,q), (p,q), (q,p) entries of an n x n array
    pp: np.ndarray
    qq: np.ndarray
    pq: np.ndarray
    qp: np.ndarray


@lru_cache(maxsize=None)
def _round_robin(n: int):
    """Round-robin pairing of ``0..n-1``: every pair (p<q) exactly once per sweep.

    Each round is a set of disjoint pairs, so its rotations commute and can
    be applied together.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        p = np.array(ps, dtype=np.intp)
        q = np.array(qs, dtype=np.intp)
        rounds.append(_Round(p, q, p * n + p, q * n + q, p * n + q, q * n + p))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _rotate(a: np.ndarray, v: np.ndarray, rnd: _Round, eye: np.ndarray):
    """Apply one round of disjoint rotations; returns the updated ``(a, v)``."""
    flat = a.ravel()
    apq = flat[rnd.pq]
    if not apq.any():
        return a, v
    app = flat[rnd.pp]
    aqq = flat[rnd.qq]

    # symmetric Schur step: choose t = tan(theta) of smaller magnitude;
    # a vanishing pivot gives tau = +-inf (t = 0) or nan (masked to 0)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        tau = (aqq - app) / (2.0 * apq)
        t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
    t = np.where(apq == 0.0, 0.0, t)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    # the round's rotations are disjoint, so they assemble into one
    # orthogonal matrix J and the update is a = J^T a J, v = v J
    j = eye.copy()
    jf = j.ravel()
    jf[rnd.pp] = c
    jf[rnd.qq] = c
    jf[rnd.pq] = s
    jf[rnd.qp] = -s
    a = j.T @ a @ j
    af = a.ravel()
    af[rnd.pq] = 0.0
    af[rnd.qp] = 0.0
    return a, v @ j


def eigen_symmetric(a, tol: float = DEFAULT_TOL, max_sweeps: int = SWEEP_CAP) -> EigenDecomposition:
    """All eigenpairs of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps visit every off-diagonal pair once (round-robin order) and stop
    when the off-diagonal Frobenius norm drops to ``tol * ||a||_F``.
    Eigenvalues come back non-increasing (stable on ties), eigenvectors are
    unit length and sign-canonical.

    Raises NotSymmetric for asymmetric input and NoConvergence when
    ``max_sweeps`` is exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = _as_matrix(a)
    n, m = a.shape
    if n != m:
        raise NotSymmetric(f"matrix must be square, got {n}x{m}")
    scale = float(np.max(np.abs(a)))
    asym = float(np.max(np.abs(a - a.T)))
    if asym > SYMMETRY_TOL * scale:
        raise NotSymmetric(f"matrix is not symmetric (max |a_ij - a_ji| = {asym:.3e})")

    work = (a + a.T) / 2.0
    eye = np.eye(n)
    vecs = eye.copy()
    target = tol * float(np.linalg.norm(a))
    rounds = _round_robin(n)

    sweeps = 0
    while _off_norm(work) > target:
        if sweeps == max_sweeps:
            raise NoConvergence(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {_off_norm(work):.3e})"
            )
        for rnd in rounds:
            work, vecs = _rotate(work, vecs, rnd, eye)
        sweeps += 1

    values = np.diag(work).copy()
    order = np.argsort(-values, kind="stable")
    pairs = []
    for k in order:
        vec = vecs[:, k]
        vec = canonical_sign(vec / np.linalg.norm(vec))
        vec.setflags(write=False)
        pairs.append(EigenPair(float(values[k]), vec))
    return EigenDecomposition(pairs)
