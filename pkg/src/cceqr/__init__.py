"""Column subset selection via collect-commit-expand pivoted QR.

The package pairs a blocked, deterministic column-pivoted QR column
selector (``cceqr``) with the classical one-column-at-a-time reference
(``gb_qr`` and its from-scratch-norms oracle ``gb_qr_naive``), plus the
verification machinery proving the two pick identical skeletons, the
test-matrix generators, and a benchmark CLI.

Hot kernels run through numba when available; set ``CCEQR_BACKEND=numpy``
to force the pure-numpy fallback (see ``cceqr._backend``).
"""

from ._backend import BACKEND
from .algorithm import (
    CceqrState,
    CollectOutput,
    InvariantError,
    SelectionResult,
    acceptance_count,
    cceqr,
    collect,
    commit,
    expand,
    initialize,
)
from .diagnostics import (
    EquivalenceReport,
    RankRevealMetrics,
    RunReport,
    norm_mass_cdf,
    rank_reveal_metrics,
    reconstruct_r,
    verify_equivalence,
)
from .gb import GbFactorization, GbFormCheck, check_gb_form, gb_qr, gb_qr_naive
from .generators import (
    MixtureSpec,
    eigvecs_from_points,
    gen_gaussian,
    gen_hadamard_adversary,
    gen_mixture_eigvecs,
    sample_mixture,
)
from .matrix_io import read_matrix, read_text_matrix, write_matrix
from .reflectors import (
    CompactWY,
    HouseholderSet,
    apply_qt_block,
    apply_qt_serial,
    apply_reflector,
    compact_wy,
    householder,
    update_wy,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CceqrState",
    "CollectOutput",
    "CompactWY",
    "EquivalenceReport",
    "GbFactorization",
    "GbFormCheck",
    "HouseholderSet",
    "InvariantError",
    "MixtureSpec",
    "RankRevealMetrics",
    "RunReport",
    "SelectionResult",
    "acceptance_count",
    "apply_qt_block",
    "apply_qt_serial",
    "apply_reflector",
    "cceqr",
    "check_gb_form",
    "collect",
    "commit",
    "compact_wy",
    "eigvecs_from_points",
    "expand",
    "gb_qr",
    "gb_qr_naive",
    "gen_gaussian",
    "gen_hadamard_adversary",
    "gen_mixture_eigvecs",
    "householder",
    "initialize",
    "norm_mass_cdf",
    "rank_reveal_metrics",
    "read_matrix",
    "read_text_matrix",
    "reconstruct_r",
    "sample_mixture",
    "update_wy",
    "verify_equivalence",
    "write_matrix",
]
