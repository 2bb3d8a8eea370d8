"""Verification and measurement for factorization runs.

Everything here is read-only analysis: permutation equivalence between
the blocked and one-at-a-time pivoting paths, rank-revealing quality
ratios against a dense SVD oracle, column-norm-mass profiles, and the
RunReport record the benchmark harness serializes.
"""

from dataclasses import dataclass

import numpy as np

from . import algorithm
from .algorithm import InvariantError
from .gb import _naive_qr
from .matrix_io import as_matrix
from .reflectors import apply_qt_block

# Two residual norms closer than this (relatively) count as a tie; pivot
# choices decided by ties are implementation detail, not contract.
TIE_TOL = 1e-10

# Dense SVD oracle cap: above this many entries rank-reveal metrics are
# refused rather than approximated.
SVD_ORACLE_LIMIT = 4_000_000


@dataclass
class RunReport:
    """One benchmarked factorization, ready to serialize as a CSV row."""

    family: str
    m: int
    n: int
    k: int
    algo: str
    rho: float | None
    trial: int
    seconds: float
    cycles: int | None = None
    commits_per_cycle: list | None = None  # not serialized; cycles + max is
    max_tracked: int | None = None
    gb_ok: bool | None = None
    equiv: bool | None = None
    sigma_ratio: float | None = None
    residual_ratio: float | None = None


@dataclass
class EquivalenceReport:
    status: str  # "equivalent" | "mismatch" | "inconclusive"
    p_blocked: np.ndarray
    p_reference: np.ndarray
    min_rel_gap: float

    @property
    def ok(self):
        return self.status != "mismatch"


@dataclass
class RankRevealMetrics:
    sigma_ratio: float
    residual_ratio: float
    q_bound: float
    exact_rank: bool = False


def reconstruct_r(A, p, wy):
    """Q^T A[:, p] from a permutation and accumulated WY factors."""
    A = as_matrix(A, "A")
    Rp = np.asfortranarray(A[:, p])
    apply_qt_block(Rp, wy, (0, A.shape[0]), (0, A.shape[1]))
    return Rp


def verify_equivalence(A, k, rho=algorithm.RHO_DEFAULT):
    """Check that blocked and one-at-a-time pivoting pick the same skeleton.

    Runs both paths and compares the first k entries of the permutations.
    If any pivot step of the reference path was decided by a residual-norm
    tie (relative gap below TIE_TOL), the comparison is reported as
    inconclusive instead, since tie-breaking order is not part of the
    contract.
    """
    A = as_matrix(A, "A")
    sel = algorithm.cceqr(A, k, rho)
    fact, gap = _naive_qr(A, k)
    if gap <= TIE_TOL:
        status = "inconclusive"
    elif np.array_equal(sel.p[:k], fact.p[:k]):
        status = "equivalent"
    else:
        status = "mismatch"
    return EquivalenceReport(
        status=status,
        p_blocked=sel.p[:k].copy(),
        p_reference=fact.p[:k].copy(),
        min_rel_gap=gap,
    )


def rank_reveal_metrics(A, p, k):
    """Rank-revealing quality of a skeleton against the dense SVD oracle.

    Computes ``sigma_min(A[:, p[:k]]) / sigma_k(A)`` and
    ``||A - S S^+ A||_2 / sigma_{k+1}(A)`` (S the skeleton block) and
    checks both against the pivoted-QR suboptimality bound
    ``q = 2^k sqrt(n - k)``: the first ratio must be at least 1/q, the
    second at most q. A numerically zero sigma_{k+1} is reported as the
    exact-rank special case with zero residual ratio.
    """
    A = as_matrix(A, "A")
    m, n = A.shape
    if m * n > SVD_ORACLE_LIMIT:
        raise ValueError(
            f"{m} x {n} is beyond the dense SVD oracle limit of "
            f"{SVD_ORACLE_LIMIT} entries"
        )
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k={k} out of range for a {m} x {n} matrix")
    sv = np.linalg.svd(A, compute_uv=False)
    S = np.asfortranarray(A[:, p[:k]])
    smin = float(np.linalg.svd(S, compute_uv=False)[-1])
    sigma_ratio = smin / float(sv[k - 1])
    q_bound = float(2.0 ** k * np.sqrt(n - k))
    eps = np.finfo(float).eps
    if k == min(m, n) or sv[k] <= max(m, n) * eps * sv[0]:
        metrics = RankRevealMetrics(sigma_ratio, 0.0, q_bound, exact_rank=True)
    else:
        coef, *_ = np.linalg.lstsq(S, A, rcond=None)
        resid = float(np.linalg.norm(A - S @ coef, 2))
        metrics = RankRevealMetrics(sigma_ratio, resid / float(sv[k]), q_bound)
    slack = 1e-9
    if n > k:  # with k = n there is nothing left out and the bound is vacuous
        if metrics.sigma_ratio * q_bound < 1.0 - slack:
            raise InvariantError(
                f"sigma ratio {metrics.sigma_ratio:.3e} violates the 1/q bound "
                f"with q={q_bound:.3e}"
            )
        if not metrics.exact_rank and metrics.residual_ratio > q_bound * (1.0 + slack):
            raise InvariantError(
                f"residual ratio {metrics.residual_ratio:.3e} violates the "
                f"q bound with q={q_bound:.3e}"
            )
    return metrics


def norm_mass_cdf(A, quantiles):
    """Cumulative fraction of squared column-norm mass in the top quantiles.

    For quantile q, the fraction of total squared Frobenius mass carried
    by the floor(q n) largest-norm columns. Returns (fractions, is_zero);
    a zero matrix yields all-zero fractions with the flag set.
    """
    A = as_matrix(A, "A")
    q = np.asarray(quantiles, dtype=np.float64)
    if q.ndim != 1 or np.any(q < 0.0) or np.any(q > 1.0):
        raise ValueError("quantiles must be a 1-D list of values in [0, 1]")
    g = np.einsum("ij,ij->j", A, A)
    total = float(g.sum())
    if total == 0.0:
        return np.zeros(q.shape[0]), True
    csum = np.cumsum(np.sort(g)[::-1])
    counts = np.minimum(np.floor(q * g.shape[0] + 1e-9).astype(int), g.shape[0])
    frac = np.where(counts > 0, csum[np.maximum(counts, 1) - 1] / total, 0.0)
    return frac, False
