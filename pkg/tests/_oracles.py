"""Brute-force reference constructions shared across test modules.

Everything here builds explicit dense matrices so the fast blocked paths
can be checked against arithmetic that is obviously correct.
"""

import numpy as np

from cceqr import HouseholderSet, householder


def explicit_reflector(v, tau):
    """The full m x m matrix I - tau v v^T."""
    return np.eye(v.shape[0]) - tau * np.outer(v, v)


def explicit_q(hs):
    """Dense product (I - tau_1 v_1 v_1^T) ... (I - tau_r v_r v_r^T)."""
    m = hs.vectors.shape[0]
    Q = np.eye(m)
    for i in range(len(hs)):
        Q = Q @ explicit_reflector(hs.vectors[:, i], float(hs.scalars[i]))
    return Q


def random_reflectors(m, r, rng):
    """A valid reflector set with pivot rows 0..r-1 (unit lower triangular)."""
    V = np.zeros((m, r), order="F")
    tau = np.zeros(r)
    for i in range(r):
        v, t, _ = householder(rng.standard_normal(m), i)
        V[:, i] = v
        tau[i] = t
    return HouseholderSet(V, tau)
