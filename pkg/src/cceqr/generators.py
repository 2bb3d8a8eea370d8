"""Deterministic test-matrix families.

Three families at desk scale: unstructured Gaussian noise, an adversarial
Hadamard construction with colinear column groups and near-tied norms,
and spectral-demixing matrices whose columns are kernel eigenvector
coordinates of points drawn from a Gaussian mixture. All randomness comes
from ``numpy.random.default_rng`` (PCG64), so a family, its parameters
and a seed pin the matrix bit-for-bit for a given numpy version.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MixtureSpec:
    """Spectral-demixing instance: n points from an m-component mixture.

    Component i is a unit-covariance Gaussian centered at ``ell * e_i``
    in R^m (ambient dimension equals the component count), all components
    equally weighted. ``sigma2`` is the Gaussian kernel variance.
    """

    m: int
    n: int
    ell: float
    sigma2: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one mixture component")
        if self.n < self.m:
            raise ValueError("need at least as many points as components")
        if self.ell < 0:
            raise ValueError("separation scale must be nonnegative")
        if self.sigma2 <= 0:
            raise ValueError("kernel variance must be positive")


def gen_gaussian(m, n, seed):
    """m x n matrix of i.i.d. standard normal entries."""
    if m < 1 or n < 1:
        raise ValueError(f"invalid shape {m} x {n}")
    rng = np.random.default_rng(seed)
    return np.asfortranarray(rng.standard_normal((m, n)))


def gen_hadamard_adversary(kexp, rexp):
    """First 2^kexp rows of the 2^rexp Sylvester Hadamard matrix, scaled.

    Columns fall into 2^kexp mutually orthogonal groups of 2^rexp-kexp
    identical (hence colinear) columns each, ordered so every group is
    contiguous. Column j (1-based) is then scaled by
    ``1 + 1000 (n - j + 1) * 2**-52``, which breaks all norm ties and
    makes norms strictly decreasing in j while staying equal to working
    precision. Greedy pivoting on this matrix can only ever justify one
    commit at a time, making it a worst case for blocked pivoting.
    """
    if not 1 <= kexp <= rexp <= 30:
        raise ValueError(f"need 1 <= kexp <= rexp <= 30, got {kexp}, {rexp}")
    m = 1 << kexp
    n = 1 << rexp
    H = np.array([[1.0]])
    core = np.array([[1.0, 1.0], [1.0, -1.0]])
    for _ in range(kexp):
        H = np.kron(core, H)
    # the first 2^kexp rows of the full matrix tile H horizontally; grouping
    # columns by their residue mod 2^kexp turns the tiling into repetition
    A = np.repeat(H, n // m, axis=1)
    j = np.arange(1, n + 1, dtype=np.float64)
    A *= 1.0 + 1000.0 * (n - j + 1.0) * 2.0 ** -52
    return np.asfortranarray(A)


def sample_mixture(spec):
    """Draw the points and component labels behind a MixtureSpec."""
    rng = np.random.default_rng(spec.seed)
    labels = rng.integers(0, spec.m, size=spec.n)
    points = rng.standard_normal((spec.n, spec.m))
    points[np.arange(spec.n), labels] += spec.ell
    return points, labels


def gen_mixture_eigvecs(spec, dense_limit=2000):
    """Leading kernel eigenvector coordinates of a mixture draw.

    Builds the degree-normalized Gaussian kernel matrix of the sampled
    points and returns the transpose of its leading m eigenvectors, an
    m x n matrix with orthonormal rows. Up to ``dense_limit`` points the
    kernel matrix is formed densely and decomposed exactly; beyond it the
    kernel is compressed by a diagonally pivoted partial Cholesky
    factorization with 5x oversampling and the eigenvectors come from an
    SVD of the (normalized) low-rank factor.
    """
    points, _ = sample_mixture(spec)
    return eigvecs_from_points(points, spec.m, spec.sigma2, dense_limit)


def eigvecs_from_points(points, m, sigma2, dense_limit=2000):
    """Same as :func:`gen_mixture_eigvecs` but for caller-supplied points."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    n = points.shape[0]
    if n <= dense_limit:
        K = _kernel_matrix(points, points, sigma2)
        deg = K.sum(axis=1)
        K /= np.sqrt(np.outer(deg, deg))
        evals, evecs = np.linalg.eigh(K)
        lead = evals[::-1][:m]
        if lead[-1] <= n * np.finfo(float).eps * max(lead[0], 1.0):
            raise ValueError(
                f"normalized kernel is rank deficient: eigenvalue {m} is "
                f"{lead[-1]:.3e}; duplicate or degenerate points?"
            )
        return np.asfortranarray(evecs[:, ::-1][:, :m].T)
    rank = min(n, 5 * m)
    F = _pivoted_cholesky(points, sigma2, rank, need=m)
    # degrees via the low-rank factor; exact degrees are >= 1 because the
    # kernel's diagonal is 1, so clipping below at 1 is always safe
    deg = np.maximum(F @ (F.T @ np.ones(n)), 1.0)
    F /= np.sqrt(deg)[:, None]
    U, sv, _ = np.linalg.svd(F, full_matrices=False)
    if sv.shape[0] < m or sv[m - 1] ** 2 <= n * np.finfo(float).eps * sv[0] ** 2:
        raise ValueError(
            f"compressed kernel is rank deficient below {m} components; "
            "duplicate or degenerate points?"
        )
    return np.asfortranarray(U[:, :m].T)


def _kernel_matrix(X, Y, sigma2):
    """Gaussian kernel exp(-||x - y||^2 / (2 sigma2)) between point rows."""
    sqx = np.einsum("ij,ij->i", X, X)
    sqy = np.einsum("ij,ij->i", Y, Y)
    d2 = sqx[:, None] + sqy[None, :] - 2.0 * (X @ Y.T)
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-d2 / (2.0 * sigma2))


def _pivoted_cholesky(points, sigma2, rank, need, tol=1e-10):
    """Greedy diagonally pivoted partial Cholesky of the Gaussian kernel.

    Returns F with K approximately F F^T, stopping early when the residual
    diagonal is exhausted. Raises if the kernel collapses before ``need``
    columns are captured (duplicate points drive the residual to zero).
    """
    n = points.shape[0]
    sq = np.einsum("ij,ij->i", points, points)
    F = np.zeros((n, rank), order="F")
    dres = np.ones(n)  # Gaussian kernel has unit diagonal
    for j in range(rank):
        piv = int(np.argmax(dres))
        pval = float(dres[piv])
        if pval <= tol:
            if j < need:
                raise ValueError(
                    f"kernel rank collapsed after {j} pivots "
                    f"(need {need}); duplicate or degenerate points?"
                )
            return np.asfortranarray(F[:, :j])
        col = np.exp((points @ points[piv] - 0.5 * (sq + sq[piv])) / sigma2)
        if j:
            col -= F[:, :j] @ F[piv, :j]
        F[:, j] = col / np.sqrt(pval)
        dres -= F[:, j] ** 2
        np.maximum(dres, 0.0, out=dres)
        dres[piv] = 0.0
    return F
