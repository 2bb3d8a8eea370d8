"""Householder reflectors and compact WY blocks.

A reflector is the pair (v, tau) representing the involution
``I - tau v v^T``. A run of reflectors aggregates into the blocked form
``Q = I - V T V^T`` (V unit lower triangular, T upper triangular), which
lets many reflectors be applied with matrix-matrix products instead of a
sequence of rank-1 updates.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import blas as _blas

from ._backend import kernels as _kn


@dataclass
class HouseholderSet:
    """Ordered reflectors; column i of ``vectors`` holds v_i.

    Each v_i is zero above its pivot row and 1 on it; for reflectors that
    come out of a QR sweep the pivot rows are 0, 1, 2, ..., making
    ``vectors`` unit lower triangular.
    """

    vectors: np.ndarray  # (m, r) float64
    scalars: np.ndarray  # (r,) float64, each tau >= 0

    def __len__(self):
        return int(self.scalars.shape[0])


@dataclass
class CompactWY:
    """Blocked reflector product Q = I - V T V^T with spare capacity.

    ``V`` and ``T`` may be allocated larger than the current reflector
    count ``r``; only ``V[:, :r]`` and ``T[:r, :r]`` are meaningful and
    the padding stays zero.
    """

    V: np.ndarray  # (m, cap) float64, Fortran order
    T: np.ndarray  # (cap, cap) float64, Fortran order
    r: int

    @property
    def capacity(self):
        return int(self.V.shape[1])


def householder(x, i):
    """Build a reflector that zeroes x below position i (0-based pivot).

    Returns ``(v, tau, mu)`` with ``v[:i] = 0``, ``v[i] = 1`` and
    ``(I - tau v v^T) x = [x[0], ..., x[i-1], mu, 0, ..., 0]`` where
    ``|mu| = ||x[i:]||``. The sign convention is
    ``mu = -sign(x[i]) ||x[i:]||`` with ``sign(0) = +1``, except that a
    vector with no mass below the pivot returns the identity reflector
    (``tau = 0``) and leaves ``mu = x[i]`` unchanged.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("householder expects a 1-D vector")
    m = x.shape[0]
    if not 0 <= i < m:
        raise ValueError(f"pivot index {i} out of range for length-{m} vector")
    v = np.zeros(m)
    v[i] = 1.0
    tail = x[i + 1:]
    sigma = float(tail @ tail)
    if sigma == 0.0:
        return v, 0.0, float(x[i])
    nrm = np.sqrt(x[i] * x[i] + sigma)
    beta = -nrm if x[i] >= 0.0 else nrm
    v[i + 1:] = tail / (x[i] - beta)
    tau = (beta - x[i]) / beta
    return v, float(tau), float(beta)


def apply_reflector(M, v, tau):
    """Overwrite M with (I - tau v v^T) M via a rank-1 update."""
    if M.ndim != 2:
        raise ValueError("apply_reflector expects a matrix")
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != M.shape[0]:
        raise ValueError(
            f"reflector length {v.shape[0]} does not match {M.shape[0]} rows"
        )
    if tau != 0.0:
        _kn.apply_reflector_inplace(M, v, tau)
    return M


def apply_qt_serial(M, hs):
    """Apply Q^T to M one reflector at a time (the rank-1 reference path)."""
    for i in range(len(hs)):
        apply_reflector(M, hs.vectors[:, i], float(hs.scalars[i]))
    return M


def compact_wy(hs, capacity=None):
    """Aggregate reflectors into compact WY form by forward accumulation.

    The result satisfies
    ``I - V T V^T = (I - tau_1 v_1 v_1^T) ... (I - tau_r v_r v_r^T)``
    with T upper triangular. ``capacity`` pads V and T with zero columns
    and rows for later in-place growth via :func:`update_wy`.
    """
    V0 = np.asarray(hs.vectors, dtype=np.float64)
    tau = np.asarray(hs.scalars, dtype=np.float64)
    if V0.ndim != 2 or tau.ndim != 1 or V0.shape[1] != tau.shape[0]:
        raise ValueError("vectors/scalars shapes are inconsistent")
    m, r = V0.shape
    cap = r if capacity is None else int(capacity)
    if cap < r:
        raise ValueError(f"capacity {cap} below reflector count {r}")
    V = np.zeros((m, cap), order="F")
    V[:, :r] = V0
    T = np.zeros((cap, cap), order="F")
    for j in range(r):
        T[j, j] = tau[j]
        if j and tau[j] != 0.0:
            z = V[:, :j].T @ V[:, j]
            T[:j, j] = -tau[j] * (T[:j, :j] @ z)
    return CompactWY(V=V, T=T, r=r)


def _apply_wy_transpose(B, V, T):
    """B <- (I - V T V^T)^T B = B - V T^T (V^T B), blocked.

    The leading r x r block of V is unit lower triangular and T is upper
    triangular; those pieces go through BLAS trmm, the rest through gemm.
    """
    r = T.shape[0]
    V1 = V[:r]
    V2 = V[r:]
    W = _blas.dtrmm(1.0, V1, B[:r], lower=1, trans_a=1, diag=1)
    if V2.shape[0]:
        W += V2.T @ B[r:]
    W = _blas.dtrmm(1.0, T, W, trans_a=1)
    B[:r] -= _blas.dtrmm(1.0, V1, W, lower=1, diag=1)
    if V2.shape[0]:
        B[r:] -= V2 @ W


def apply_qt_block(M, wy, rows, cols):
    """Apply (I - V T V^T)^T to the (rows, cols) block of M, in place.

    ``rows`` and ``cols`` are half-open ``(start, stop)`` ranges; the rest
    of M is untouched. The V factor must span exactly the row range.
    """
    r0, r1 = rows
    c0, c1 = cols
    m, n = M.shape
    if not (0 <= r0 <= r1 <= m and 0 <= c0 <= c1 <= n):
        raise ValueError(f"block ({rows}, {cols}) out of range for {m} x {n}")
    r = wy.r
    if r == 0 or c0 == c1:
        return M
    if wy.V.shape[0] != r1 - r0:
        raise ValueError(
            f"WY factor height {wy.V.shape[0]} does not match row range {rows}"
        )
    _apply_wy_transpose(M[r0:r1, c0:c1], wy.V[:, :r], np.asfortranarray(wy.T[:r, :r]))
    return M


def update_wy(wy, new):
    """Fold the reflectors of ``new`` into ``wy``, in place.

    Implements the block product update: for Q2 = Q1 * Qhat the combined
    T factor is ``[[T1, -T1 V1^T Vhat That], [0, That]]`` and Vhat's
    columns are appended to V1. ``new.V`` must be zero-padded to full
    height, with column i of the new block pivoting on row ``wy.r + i``
    so the combined V stays unit lower triangular.
    """
    s, c = wy.r, new.r
    if c == 0:
        return wy
    m = wy.V.shape[0]
    if new.V.shape[0] != m:
        raise ValueError("new WY factor is not padded to full height")
    if s + c > wy.capacity:
        raise ValueError(
            f"cannot hold {s + c} reflectors in capacity {wy.capacity}"
        )
    Vh = new.V[:, :c]
    Th = new.T[:c, :c]
    for i in range(c):
        if Vh[s + i, i] != 1.0 or np.any(Vh[: s + i, i] != 0.0):
            raise ValueError(
                "update would break the unit lower-triangular reflector pattern"
            )
    if s:
        X = wy.V[:, :s].T @ Vh
        wy.T[:s, s:s + c] = -(wy.T[:s, :s] @ X) @ Th
    wy.T[s:s + c, s:s + c] = Th
    wy.V[:, s:s + c] = Vh
    wy.r = s + c
    return wy
