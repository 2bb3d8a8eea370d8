"""Pure-numpy implementations of the hot factorization kernels.

These mirror ``cceqr._kernels_numba`` and are used when numba is
unavailable or when ``CCEQR_BACKEND=numpy`` is set. They lean on BLAS
through numpy, at the cost of a temporary per rank-1 update.
"""

import numpy as np


def geqp3_inplace(R, V, tau, piv, k, guard):
    """Column-pivoted Householder QR of R, in place.

    Reduces the first ``k`` columns of ``R`` to upper-triangular form with
    greedy max-residual-norm pivoting. Reflector vectors land in the first
    ``k`` columns of ``V`` (unit diagonal, zero above the pivot row),
    scalars in ``tau``, and column swaps are recorded in ``piv``. Residual
    squared column norms are maintained by recursive downdating; a column
    is recomputed from scratch whenever its downdated value drops below
    ``guard`` times its original squared norm.
    """
    m, n = R.shape
    gamma = np.einsum("ij,ij->j", R, R)
    gamma0 = gamma.copy()
    for i in range(k):
        j = i + int(np.argmax(gamma[i:]))
        if j != i:
            R[:, [i, j]] = R[:, [j, i]]
            gamma[[i, j]] = gamma[[j, i]]
            gamma0[[i, j]] = gamma0[[j, i]]
            piv[[i, j]] = piv[[j, i]]
        x0 = R[i, i]
        sigma = float(R[i + 1:, i] @ R[i + 1:, i])
        V[i, i] = 1.0
        if sigma == 0.0:
            tau[i] = 0.0
        else:
            nrm = np.sqrt(x0 * x0 + sigma)
            beta = -nrm if x0 >= 0.0 else nrm
            tau[i] = (beta - x0) / beta
            V[i + 1:, i] = R[i + 1:, i] / (x0 - beta)
            R[i, i] = beta
            R[i + 1:, i] = 0.0
            if i + 1 < n:
                v = V[i:, i]
                w = tau[i] * (v @ R[i:, i + 1:])
                R[i:, i + 1:] -= np.outer(v, w)
        if i + 1 < n:
            g = gamma[i + 1:] - R[i, i + 1:] ** 2
            stale = g < guard * gamma0[i + 1:]
            if stale.any():
                cols = np.flatnonzero(stale) + i + 1
                block = R[i + 1:, cols]
                g[stale] = np.einsum("ij,ij->j", block, block)
            gamma[i + 1:] = g


def apply_reflector_inplace(M, v, tau):
    """M <- (I - tau v v^T) M as a rank-1 update."""
    w = tau * (v @ M)
    M -= np.outer(v, w)
