"""Collect-commit-expand column selection.

The driver works in cycles. Each cycle gathers the tracked columns with
the largest residual norms into a candidate block ("collect"), pivots the
candidate block with a dense QR and commits the leading pivots whose
residuals provably dominate everything not considered ("commit"), then
widens the tracked set so the next cycle is again guaranteed to commit at
least one column ("expand"). The result is a permutation under which some
orthogonal Q reduces A to GB(k) form, i.e. the same greedy ordering the
one-column-at-a-time pivoted QR produces, but with the reflector work
confined to the tracked set and applied in blocked form.

Layout note: the working matrix R keeps its columns in A's original
order for the whole run; only the permutation vector p is reordered, so
the column at logical position j is ``R[:, p[j]]``. Tracked-set reads and
writes gather and scatter through p, which keeps per-cycle memory traffic
proportional to the tracked set instead of to n.
"""

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels as _kn
from .gb import DOWNDATE_GUARD
from .matrix_io import as_matrix
from .reflectors import CompactWY, HouseholderSet, _apply_wy_transpose, compact_wy, update_wy

RHO_DEFAULT = 0.05

# Tracked slices at or below this length are ordered with a full stable
# sort (ties break to the lowest index); longer slices use argpartition
# for the top candidates, which may pick differently among exact ties that
# straddle the candidate boundary.
SORT_SWITCH = 4096

# Relative slack when comparing freshly factorized candidate residuals
# against the downdated bookkeeping values: the two sides sum the same
# quantities in different orders, so exact ties can disagree by ulps.
ACCEPT_SLACK = 1e-12


class InvariantError(RuntimeError):
    """An internal invariant that should be unbreakable was violated."""


@dataclass
class CceqrState:
    """Per-run state: the three-way column partition and its bookkeeping.

    Logical positions [0, s) are committed, [s, s+t) tracked, and the rest
    untracked. ``gamma[j]`` holds the squared residual norm of the column
    at logical position j if it is committed or tracked, and its original
    squared norm if untracked. ``mu`` is the largest untracked entry of
    gamma, maintained so commits can be justified without looking at the
    untracked block.
    """

    s: int
    t: int
    mu: float
    gamma: np.ndarray  # (n,) float64, indexed by logical position
    gamma0: np.ndarray  # (n,) original squared norms, cancellation guard
    p: np.ndarray  # (n,) int64, logical position -> original column
    wy: CompactWY  # accumulated Q, s reflectors, capacity k
    R: np.ndarray  # (m, n) float64, columns in original order
    k: int
    rho: float
    first_cycle: bool = True


@dataclass
class CollectOutput:
    """Candidate factorization handed from collect to commit."""

    delta: float  # largest squared residual among non-candidate tracked columns
    phat: np.ndarray  # (b,) pivot order chosen within the candidate block
    tauhat: np.ndarray  # (d,) Householder scalars
    Vhat: np.ndarray  # (m - s, d) Householder vectors
    Rhat: np.ndarray  # (m - s, b) factorized candidate block
    b: int


@dataclass
class SelectionResult:
    """Skeleton permutation plus per-cycle statistics."""

    p: np.ndarray  # (n,) int64; p[:k] are the skeleton columns in pivot order
    k: int
    cycles: int
    commits_per_cycle: list = field(default_factory=list)
    tracked_history: list = field(default_factory=list)  # t at each commit
    R: np.ndarray | None = None  # Q^T A[:, p], present iff full mode
    wy: CompactWY | None = None

    @property
    def max_tracked(self):
        return max(self.tracked_history) if self.tracked_history else 0


def initialize(A, k, rho=RHO_DEFAULT):
    """Set up a run: identity permutation, whole matrix tracked, mu = 0."""
    A = as_matrix(A, "A")
    m, n = A.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k={k} out of range for a {m} x {n} matrix")
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho={rho} must lie strictly inside (0, 1)")
    R = A.copy(order="F")
    gamma = np.einsum("ij,ij->j", R, R)
    wy = CompactWY(
        V=np.zeros((m, k), order="F"), T=np.zeros((k, k), order="F"), r=0
    )
    return CceqrState(
        s=0,
        t=n,
        mu=0.0,
        gamma=gamma,
        gamma0=gamma.copy(),
        p=np.arange(n, dtype=np.int64),
        wy=wy,
        R=R,
        k=k,
        rho=rho,
    )


def _descending(g, need):
    """Indices of the ``need`` largest entries of g, descending.

    Below SORT_SWITCH this is a full stable sort, so ties break to the
    lowest index exactly; above it, argpartition narrows to the top set
    first and only that set is stably ordered.
    """
    n = g.shape[0]
    need = min(need, n)
    if n <= SORT_SWITCH or need >= n:
        return np.argsort(-g, kind="stable")[:need]
    part = np.argpartition(-g, need - 1)[:need]
    return part[np.lexsort((part, -g[part]))]


def _reorder(state, lo, hi, chosen):
    """Move logical positions ``chosen`` (in order) to the front of [lo, hi).

    The remaining positions keep their relative order. Pure index
    bookkeeping: only gamma and p move, never matrix columns.
    """
    width = hi - lo
    mask = np.ones(width, dtype=bool)
    mask[chosen - lo] = False
    new_idx = np.concatenate([chosen, np.arange(lo, hi)[mask]])
    state.p[lo:hi] = state.p[new_idx]
    state.gamma[lo:hi] = state.gamma[new_idx]
    state.gamma0[lo:hi] = state.gamma0[new_idx]


def collect(state):
    """Pick and pivot the candidate block from the tracked set.

    Takes the b = 1 + floor(rho (t-1)) tracked columns of largest residual
    norm, records delta (the largest residual left behind), factorizes the
    candidates' residual block with a fully pivoted QR, and reorders the
    tracked range so the candidates sit first in their pivot order. On the
    first cycle the tracked set then shrinks to just the candidates; the
    columns dropped back out keep their original norms in gamma, which is
    exactly the untracked contract.
    """
    if state.s >= state.k:
        raise ValueError("skeleton is already complete")
    s, t = state.s, state.t
    m = state.R.shape[0]
    g_tracked = state.gamma[s:s + t]
    b = 1 + int(state.rho * (t - 1))
    order = _descending(g_tracked, b + 1)
    delta = float(g_tracked[order[b]]) if b < t else 0.0
    if state.first_cycle:
        state.t = b
        state.first_cycle = False
    cand = s + order[:b]
    B = state.R[:, state.p[cand]][s:, :]
    d = min(m - s, b)
    Vhat = np.zeros((m - s, d), order="F")
    tauhat = np.zeros(d)
    phat = np.arange(b, dtype=np.int64)
    _kn.geqp3_inplace(B, Vhat, tauhat, phat, d, DOWNDATE_GUARD)
    _reorder(state, s, s + t, cand[phat])
    return CollectOutput(
        delta=delta, phat=phat, tauhat=tauhat, Vhat=Vhat, Rhat=B, b=b
    )


def acceptance_count(Rhat, delta, mu):
    """Largest i >= 1 such that Rhat[i-1, i-1]^2 >= max(delta, mu).

    This is the number of candidate pivots whose residuals provably beat
    every column the candidate factorization did not see; the comparison
    is inclusive. The tracked-norm bookkeeping guarantees at least the
    first pivot clears the bar, so an empty result means corrupted state.
    """
    d = min(Rhat.shape)
    diag2 = np.diagonal(Rhat)[:d] ** 2
    cleared = np.flatnonzero(diag2 >= max(delta, mu) * (1.0 - ACCEPT_SLACK))
    if cleared.size == 0:
        raise InvariantError(
            "no candidate pivot clears the commit threshold; "
            "residual-norm bookkeeping is corrupt"
        )
    return int(cleared.max()) + 1


def commit(state, co):
    """Commit the accepted candidate pivots and fold Q up to date.

    Applies the accepted reflectors (in compact WY form) to the bottom
    m - s rows of the whole tracked block, appends them to the global WY
    factors via the block product update, and downdates the residual
    norms of the still-tracked columns by the weight their projections
    put on the newly committed rows. Returns M, the largest tracked
    residual norm after the commit (0 if nothing stays tracked).
    """
    s, t, k = state.s, state.t, state.k
    m = state.R.shape[0]
    c = min(acceptance_count(co.Rhat, co.delta, state.mu), k - s)
    local = compact_wy(HouseholderSet(co.Vhat[:, :c], co.tauhat[:c]))
    cols = state.p[s:s + t]
    block = state.R[:, cols]  # gather keeps Fortran order
    _apply_wy_transpose(block[s:, :], local.V, local.T)
    state.R[:, cols] = block
    padded = np.zeros((m, c), order="F")
    padded[s:, :] = co.Vhat[:, :c]
    update_wy(state.wy, CompactWY(V=padded, T=local.T, r=c))
    state.s = s + c
    state.t = t - c
    if state.t > 0:
        # columns that stay tracked lose the mass landing on the newly
        # committed rows s..s+c; badly cancelled values are recomputed
        # from the rotated block before anything else trusts them
        rest = state.gamma[state.s:state.s + state.t]
        sub = block[s:s + c, c:]
        np.subtract(rest, np.einsum("ij,ij->j", sub, sub), out=rest)
        np.maximum(rest, 0.0, out=rest)
        stale = rest < DOWNDATE_GUARD * state.gamma0[state.s:state.s + state.t]
        if stale.any():
            resid = block[s + c:, c:][:, stale]
            rest[stale] = np.einsum("ij,ij->j", resid, resid)
        return float(rest.max())
    return 0.0


def expand(state, M):
    """Widen the tracked set with every untracked column at least as big as M.

    If nothing clears M, the threshold drops to 0.9 times the largest
    untracked norm, which by construction admits at least one column.
    Newly tracked columns are rotated by the full accumulated Q^T and
    their gamma entries downdated to residual norms; mu becomes the
    largest norm left untracked (0 if none remain).
    """
    s, t = state.s, state.t
    n = state.gamma.shape[0]
    if s + t >= n:
        raise ValueError("no untracked columns to expand into")
    g_un = state.gamma[s + t:]

    def threshold(alpha):
        mask = g_un >= alpha
        beta = float(g_un[~mask].max()) if not mask.all() else 0.0
        return mask, beta

    sel, mu = threshold(M)
    if not sel.any():
        sel, mu = threshold(0.9 * mu)
    r = int(np.count_nonzero(sel))
    chosen = s + t + np.flatnonzero(sel)
    _reorder(state, s + t, n, chosen)
    if state.wy.r:
        cols = state.p[s + t:s + t + r]
        block = np.asfortranarray(state.R[:, cols])
        _apply_wy_transpose(
            block, state.wy.V[:, :state.wy.r],
            np.asfortranarray(state.wy.T[:state.wy.r, :state.wy.r]),
        )
        state.R[:, cols] = block
        top = block[:s, :]
        entering = state.gamma[s + t:s + t + r]
        np.subtract(entering, np.einsum("ij,ij->j", top, top), out=entering)
        np.maximum(entering, 0.0, out=entering)
        stale = entering < DOWNDATE_GUARD * state.gamma0[s + t:s + t + r]
        if stale.any():
            resid = block[s:, :][:, stale]
            entering[stale] = np.einsum("ij,ij->j", resid, resid)
    state.t = t + r
    state.mu = mu


def cceqr(A, k, rho=RHO_DEFAULT, full=False):
    """Select k skeleton columns of A by collect-commit-expand pivoting.

    Parameters
    ----------
    A : (m, n) array
        Real matrix, coerced to float64 Fortran order.
    k : int
        Skeleton size, 1 <= k <= min(m, n).
    rho : float
        Candidate fraction in (0, 1): each cycle factorizes
        1 + floor(rho (t-1)) of the t tracked columns.
    full : bool
        When true, the accumulated Q^T is also applied to the columns
        that never entered the tracked set, and the result carries the
        complete R factor (in pivot order).

    Returns
    -------
    SelectionResult
        Permutation (skeleton first), cycle statistics, the accumulated
        WY factors, and R when ``full`` is set. The permutation is
        equivalent to greedy max-norm pivoting: some orthogonal Q brings
        A[:, p] to GB(k) form.
    """
    state = initialize(A, k, rho)
    n = state.gamma.shape[0]
    commits = []
    tracked = []
    while state.s < k:
        co = collect(state)
        tracked.append(state.t)
        before = state.s
        M = commit(state, co)
        commits.append(state.s - before)
        if state.s < k and state.s + state.t < n:
            expand(state, M)
    R_out = None
    if full:
        s, t = state.s, state.t
        if s + t < n and state.wy.r:
            cols = state.p[s + t:]
            block = np.asfortranarray(state.R[:, cols])
            _apply_wy_transpose(
                block, state.wy.V[:, :state.wy.r],
                np.asfortranarray(state.wy.T[:state.wy.r, :state.wy.r]),
            )
            state.R[:, cols] = block
        R_out = np.asfortranarray(state.R[:, state.p])
    return SelectionResult(
        p=state.p,
        k=k,
        cycles=len(commits),
        commits_per_cycle=commits,
        tracked_history=tracked,
        R=R_out,
        wy=state.wy,
    )
