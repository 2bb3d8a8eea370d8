"""Numba-jitted implementations of the hot factorization kernels.

Same contracts as ``cceqr._kernels_numpy``. The pivoted-QR loop fuses the
rank-1 reflector update with the column-norm downdate, so no temporaries
are allocated inside the sweep; inner loops run down columns, which is
the contiguous direction for the Fortran-ordered matrices used here.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def geqp3_inplace(R, V, tau, piv, k, guard):
    m, n = R.shape
    gamma = np.zeros(n)
    gamma0 = np.zeros(n)
    for j in range(n):
        acc = 0.0
        for r in range(m):
            acc += R[r, j] * R[r, j]
        gamma[j] = acc
        gamma0[j] = acc
    for i in range(k):
        jmax = i
        gmax = gamma[i]
        for j in range(i + 1, n):
            if gamma[j] > gmax:
                gmax = gamma[j]
                jmax = j
        if jmax != i:
            for r in range(m):
                tmp = R[r, i]
                R[r, i] = R[r, jmax]
                R[r, jmax] = tmp
            gamma[i], gamma[jmax] = gamma[jmax], gamma[i]
            gamma0[i], gamma0[jmax] = gamma0[jmax], gamma0[i]
            piv[i], piv[jmax] = piv[jmax], piv[i]
        x0 = R[i, i]
        sigma = 0.0
        for r in range(i + 1, m):
            sigma += R[r, i] * R[r, i]
        V[i, i] = 1.0
        if sigma == 0.0:
            tau[i] = 0.0
            # row i still leaves the residual block below
            for j in range(i + 1, n):
                g = gamma[j] - R[i, j] * R[i, j]
                if g < guard * gamma0[j]:
                    g = 0.0
                    for r in range(i + 1, m):
                        g += R[r, j] * R[r, j]
                gamma[j] = g
        else:
            nrm = np.sqrt(x0 * x0 + sigma)
            beta = -nrm if x0 >= 0.0 else nrm
            ti = (beta - x0) / beta
            tau[i] = ti
            scl = 1.0 / (x0 - beta)
            for r in range(i + 1, m):
                V[r, i] = R[r, i] * scl
            R[i, i] = beta
            for r in range(i + 1, m):
                R[r, i] = 0.0
            for j in range(i + 1, n):
                acc = R[i, j]
                for r in range(i + 1, m):
                    acc += V[r, i] * R[r, j]
                acc *= ti
                rij = R[i, j] - acc
                R[i, j] = rij
                for r in range(i + 1, m):
                    R[r, j] -= acc * V[r, i]
                g = gamma[j] - rij * rij
                if g < guard * gamma0[j]:
                    g = 0.0
                    for r in range(i + 1, m):
                        g += R[r, j] * R[r, j]
                gamma[j] = g


@njit(cache=True)
def apply_reflector_inplace(M, v, tau):
    m, n = M.shape
    for j in range(n):
        acc = 0.0
        for r in range(m):
            acc += v[r] * M[r, j]
        acc *= tau
        for r in range(m):
            M[r, j] -= acc * v[r]
