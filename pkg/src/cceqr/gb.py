"""Golub-Businger column-pivoted QR and the GB-form verifier.

``gb_qr`` is the production path: greedy max-residual-norm pivoting with
recursively downdated column norms. ``gb_qr_naive`` is the correctness
oracle: the same pivot rule, but every residual norm is recomputed from
scratch at every step, so it cannot suffer downdating drift. The two must
select identical pivots whenever the running norms are free of ties.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import kernels as _kn
from .matrix_io import as_matrix
from .reflectors import HouseholderSet, householder

# After gamma[j] -= R[i, j]^2, recompute ||R[i+1:, j]||^2 from scratch once
# the downdated value falls below this fraction of the column's original
# squared norm; guards against catastrophic cancellation.
DOWNDATE_GUARD = 1e-8


@dataclass
class GbFactorization:
    """Q^T A[:, p] = R with the first k columns of R in GB(k) form."""

    p: np.ndarray  # (n,) int64 permutation; column j of R came from A[:, p[j]]
    hs: HouseholderSet  # implicit Q as k reflectors
    R: np.ndarray  # (m, n) float64
    k: int


@dataclass
class GbFormCheck:
    ok: bool
    message: str = ""

    def __bool__(self):
        return self.ok


def _check_k(k, m, n):
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k={k} out of range for a {m} x {n} matrix")


def gb_qr(A, k, guard=DOWNDATE_GUARD):
    """Column-pivoted QR selecting k pivots, with downdated column norms.

    At step i the column of largest residual norm among columns i..n-1 is
    swapped to position i (ties break to the lowest index) and a
    Householder reflector zeroes it below the diagonal. Norms are
    maintained by the recursive downdate ``gamma[j] -= R[i, j]^2`` with a
    from-scratch recomputation when cancellation makes the downdated
    value untrustworthy (see ``guard``).
    """
    A = as_matrix(A, "A")
    m, n = A.shape
    _check_k(k, m, n)
    R = A.copy(order="F")
    V = np.zeros((m, k), order="F")
    tau = np.zeros(k)
    piv = np.arange(n, dtype=np.int64)
    _kn.geqp3_inplace(R, V, tau, piv, k, guard)
    return GbFactorization(p=piv, hs=HouseholderSet(V, tau), R=R, k=k)


def gb_qr_naive(A, k):
    """The oracle: identical pivot rule, norms recomputed every step."""
    fact, _ = _naive_qr(A, k)
    return fact


def _naive_qr(A, k):
    """Naive pivoted QR; also reports the smallest relative pivot gap.

    The gap is min over steps of (g1 - g2) / g1 where g1 >= g2 are the two
    largest squared residual norms considered at that step; a small gap
    means the pivot choice was decided by a near-tie.
    """
    A = as_matrix(A, "A")
    m, n = A.shape
    _check_k(k, m, n)
    R = A.copy(order="F")
    V = np.zeros((m, k), order="F")
    tau = np.zeros(k)
    piv = np.arange(n, dtype=np.int64)
    min_gap = np.inf
    for i in range(k):
        block = R[i:, i:]
        norms2 = np.einsum("ij,ij->j", block, block)
        j = int(np.argmax(norms2))
        if norms2.shape[0] > 1:
            top2 = np.partition(norms2, norms2.shape[0] - 2)[-2:]
            if top2[1] > 0.0:
                min_gap = min(min_gap, (top2[1] - top2[0]) / top2[1])
        j += i
        if j != i:
            R[:, [i, j]] = R[:, [j, i]]
            piv[[i, j]] = piv[[j, i]]
        v, t, mu = householder(R[:, i], i)
        V[:, i] = v
        tau[i] = t
        if t != 0.0 and i + 1 < n:
            vi = v[i:]
            w = t * (vi @ R[i:, i + 1:])
            R[i:, i + 1:] -= np.outer(vi, w)
        R[i, i] = mu
        R[i + 1:, i] = 0.0
    return GbFactorization(p=piv, hs=HouseholderSet(V, tau), R=R, k=k), float(min_gap)


def check_gb_form(R, k, tol):
    """Verify that the first k columns of R are in GB(k) form.

    Checks (1) upper-triangularity: below-diagonal entries of the first k
    columns have magnitude at most ``tol * ||R||_F``, and (2) diagonal
    dominance: ``|R[i, i]| >= (1 - tol) * max_j ||R[i:, j]||`` over
    ``j >= i``. Residual norms are recomputed exactly. Returns a
    :class:`GbFormCheck` describing the first violation, if any.
    """
    R = as_matrix(R, "R")
    m, n = R.shape
    if not 0 <= k <= min(m, n):
        raise ValueError(f"k={k} out of range for a {m} x {n} matrix")
    fro = float(np.linalg.norm(R))
    for j in range(k):
        below = np.abs(R[j + 1:, j])
        if below.size and below.max() > tol * fro:
            i = j + 1 + int(np.argmax(below))
            return GbFormCheck(
                False,
                f"R[{i},{j}] = {R[i, j]:.6e} exceeds {tol:.1e} * ||R||_F "
                f"below the diagonal",
            )
    for i in range(k):
        block = R[i:, i:]
        norms2 = np.einsum("ij,ij->j", block, block)
        jrel = int(np.argmax(norms2))
        rhs = float(np.sqrt(norms2[jrel]))
        lhs = abs(float(R[i, i]))
        if lhs < (1.0 - tol) * rhs:
            return GbFormCheck(
                False,
                f"|R[{i},{i}]| = {lhs:.6e} is dominated by residual norm "
                f"{rhs:.6e} of column {i + jrel}",
            )
    return GbFormCheck(True)
